use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::Failure;

/// Writes every float with 17 significant digits so that values survive a
/// parse/print cycle unchanged.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // fold -0.0 so equal values print identically
        write!(writer, "{:.16e}", value + 0.0)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Canonical JSON text: keys sorted, fixed float format, trailing newline.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> Result<Vec<u8>, Failure> {
    // going through Value sorts object keys
    let value: Value = serde_json::to_value(doc).map_err(|e| Failure::Numerical(e.to_string()))?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit_json<T: Serialize>(doc: &T, path: Option<&Path>) -> Result<(), Failure> {
    let bytes = to_canonical_json(doc)?;
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, bytes).map_err(|e| Failure::io(p, e)),
        _ => io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::Validation(format!("writing stdout: {e}"))),
    }
}

pub fn emit_csv(path: &Path, rows: &[(f64, f64)]) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| Failure::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| Failure::Validation(format!("{}: {e}", path.display()));
    writer.write_record(["z", "value"]).map_err(csv_err)?;
    for (z, v) in rows {
        writer
            .write_record([format!("{z:.16e}"), format!("{v:.16e}")])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Failure::io(path, e))
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<Value, Failure> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())
            .map_err(|e| Failure::Validation(format!("reading stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?
    };
    serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: invalid JSON: {e}", path.display())))
}
