use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use heun_su11::algebra::{
    algebra_identity_check, check_factorizable, reconstruction_check, AlgebraDeviations,
    FactorizationDiagnosis,
};
use heun_su11::heun::{
    degree_decomposition_check, CanonicalCoefficients, HeunParameters, ParameterInput,
};
use heun_su11::poly::{HalfGridPoly, Monomials};
use heun_su11::representations::{classify as classify_reps, RepresentationDescriptor};
use heun_su11::series::{series_solution, SeriesSolution};
use heun_su11::spectrum::{solve_spectrum, EigenPair};
use heun_su11::verifier::{default_samples, ode_residual_with_coefficients, ResidualReport};
use heun_su11::{Direction, Parity, RepresentationClass, Su11Decomposition};

use crate::args::{
    CheckAlgebraArgs, DecomposeArgs, SeriesArgs, SourceArgs, SpectrumArgs, VerifyArgs,
};
use crate::output::{emit_csv, emit_json, read_input};
use crate::{Failure, Outcome};

#[derive(Serialize)]
struct DecomposeDoc {
    parameters: ParameterInput,
    canonical_coefficients: CanonicalCoefficients,
    factorization: FactorizationDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<Su11Decomposition>,
}

#[derive(Serialize)]
struct FactorizationDoc {
    accepted: bool,
    failures: Vec<heun_su11::algebra::FactorizationFailure>,
}

impl From<FactorizationDiagnosis> for FactorizationDoc {
    fn from(d: FactorizationDiagnosis) -> Self {
        Self {
            accepted: d.accepted(),
            failures: d.failures,
        }
    }
}

fn require_params(params: Option<HeunParameters>) -> Result<HeunParameters, Failure> {
    params.ok_or_else(|| {
        Failure::Usage("no parameters given (use --preset, --params or the parameter flags)".into())
    })
}

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome, Failure> {
    let params = require_params(args.params.resolve()?)?;
    let diagnosis = check_factorizable(&params);
    let accepted = diagnosis.accepted();
    if !accepted {
        eprintln!("not factorizable: {diagnosis}");
    }
    let decomposition = if accepted {
        Some(heun_su11::decompose(&params)?)
    } else {
        None
    };
    let doc = DecomposeDoc {
        parameters: ParameterInput::from(&params),
        canonical_coefficients: params.canonical_coefficients(),
        factorization: diagnosis.into(),
        decomposition,
    };
    emit_json(&doc, args.output.json.as_deref())?;
    Ok(if accepted {
        Outcome::Accepted
    } else {
        Outcome::Rejected
    })
}

/// Loads a decomposition either bare or wrapped in a `decompose` document.
fn load_decomposition(path: &Path) -> Result<Su11Decomposition, Failure> {
    let mut doc = read_input(path)?;
    if let Some(inner) = doc.get_mut("decomposition") {
        doc = inner.take();
    }
    if doc.is_null() {
        return Err(Failure::Validation(format!(
            "{}: document holds no decomposition (parameters not factorizable?)",
            path.display()
        )));
    }
    let dec: Su11Decomposition = serde_json::from_value(doc).map_err(|e| {
        Failure::Validation(format!("{}: invalid decomposition: {e}", path.display()))
    })?;
    let values = [
        dec.mu,
        dec.nu,
        dec.c_plus,
        dec.c_minus,
        dec.c2,
        dec.c1,
        dec.c0,
        dec.casimir,
    ];
    if values.iter().any(|v| !v.is_finite()) {
        return Err(heun_su11::Error::NonFinite("decomposition").into());
    }
    if dec.c_plus == 0.0 || dec.c_minus == 0.0 {
        return Err(Failure::Validation(
            "decomposition has c_plus or c_minus equal to zero".into(),
        ));
    }
    Ok(dec)
}

fn resolve_decomposition(source: &SourceArgs) -> Result<Su11Decomposition, Failure> {
    match &source.decomposition {
        Some(path) => load_decomposition(path),
        None => Ok(heun_su11::decompose(&require_params(
            source.params.resolve()?,
        )?)?),
    }
}

#[derive(Serialize)]
struct ClassifyDoc {
    decomposition: Su11Decomposition,
    representations: Vec<RepresentationDescriptor>,
}

pub fn classify(args: &SourceArgs) -> Result<Outcome, Failure> {
    let decomposition = resolve_decomposition(args)?;
    let doc = ClassifyDoc {
        decomposition,
        representations: classify_reps(&decomposition),
    };
    emit_json(&doc, args.output.json.as_deref())?;
    Ok(Outcome::Accepted)
}

#[derive(Serialize)]
struct SpectrumDoc<'a> {
    decomposition: Su11Decomposition,
    representation: &'a RepresentationDescriptor,
    eigenpairs: Vec<&'a EigenPair>,
    complex: bool,
}

/// `count` evenly spaced interior points of `(lo, hi)`.
fn interior_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|i| lo + (hi - lo) * i as f64 / (count + 1) as f64)
        .collect()
}

fn sample_rows(f: &dyn Monomials, points: &[f64]) -> Vec<(f64, f64)> {
    points.iter().map(|&z| (z, f.eval(z))).collect()
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Outcome, Failure> {
    let dec = resolve_decomposition(&args.source)?;
    let reps = classify_reps(&dec);
    let Some(rep) = reps
        .iter()
        .find(|r| matches!(r.class, RepresentationClass::FiniteDimensional { .. }))
    else {
        return Err(Failure::Validation(format!(
            "no finite-dimensional representation: 2(nu - mu) = {} is not a nonnegative integer",
            2.0 * (dec.nu - dec.mu)
        )));
    };
    let result = solve_spectrum(&dec, rep)?;
    let wanted: Option<Parity> = args.parity.map(Into::into);
    let pairs: Vec<&EigenPair> = result
        .pairs
        .iter()
        .filter(|p| wanted.is_none_or(|w| p.parity == w))
        .collect();
    if let Some(path) = &args.csv {
        let pair = pairs.get(args.index).ok_or_else(|| {
            Failure::Usage(format!(
                "--index {} but only {} eigenpairs",
                args.index,
                pairs.len()
            ))
        })?;
        let a = dec.singularity();
        let points = interior_points(0.0, a.abs().min(1.0), args.samples);
        emit_csv(path, &sample_rows(&pair.eigenfunction, &points))?;
    }
    let doc = SpectrumDoc {
        decomposition: dec,
        representation: rep,
        complex: pairs.iter().any(|p| p.is_complex()),
        eigenpairs: pairs,
    };
    emit_json(&doc, args.source.output.json.as_deref())?;
    Ok(Outcome::Accepted)
}

#[derive(Serialize)]
struct SeriesDoc {
    decomposition: Su11Decomposition,
    series: SeriesSolution,
    residual: ResidualReport,
}

pub fn series(args: &SeriesArgs) -> Result<Outcome, Failure> {
    let dec = resolve_decomposition(&args.source)?;
    let q = match (&args.source.decomposition, args.source.params.q) {
        (Some(_), Some(q)) => q,
        _ => dec.q(),
    };
    let solution = series_solution(&dec, args.rep.into(), args.parity.into(), q, args.kmax)?;
    let (lo, hi) = solution.sampling_window();
    let a = dec.singularity();
    let coeffs = dec.canonical_coefficients().with_q(q);
    let residual = ode_residual_with_coefficients(&coeffs, &solution, &default_samples(lo, hi, a))?;
    if let Some(path) = &args.csv {
        emit_csv(
            path,
            &sample_rows(&solution, &interior_points(lo, hi, args.samples)),
        )?;
    }
    let doc = SeriesDoc {
        decomposition: dec,
        series: solution,
        residual,
    };
    emit_json(&doc, args.source.output.json.as_deref())?;
    Ok(Outcome::Accepted)
}

/// Explicit `(exponent, coefficient)` terms.
struct Terms(Vec<(f64, f64)>);

impl Monomials for Terms {
    fn monomials(&self) -> Vec<(f64, f64)> {
        self.0.clone()
    }
}

/// A solution document after parsing.
struct Candidate {
    terms: Terms,
    direction: Option<Direction>,
    parameters: Option<ParameterInput>,
    q: Option<f64>,
    samples: Option<Vec<f64>>,
    domain: Option<(f64, f64)>,
}

fn field_error(what: &str) -> Failure {
    Failure::Validation(format!("solution document: {what}"))
}

fn as_number(v: &Value, what: &str) -> Result<f64, Failure> {
    v.as_f64()
        .ok_or_else(|| field_error(&format!("{what} must be a number")))
}

fn parse_candidate(doc: &Value) -> Result<Candidate, Failure> {
    let coefficients = doc
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(|| field_error("missing coefficients array"))?;
    let direction = match doc.get("direction") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<Direction>(v.clone())
                .map_err(|_| field_error("direction must be \"ascending\" or \"descending\""))?,
        ),
    };
    let terms = if coefficients.iter().all(Value::is_object) {
        coefficients
            .iter()
            .map(|t| {
                let exponent = as_number(t.get("exponent").unwrap_or(&Value::Null), "exponent")?;
                let value = as_number(t.get("value").unwrap_or(&Value::Null), "value")?;
                Ok((exponent, value))
            })
            .collect::<Result<Vec<_>, Failure>>()?
    } else {
        let p0 = as_number(
            doc.get("p0")
                .ok_or_else(|| field_error("plain coefficient lists need p0"))?,
            "p0",
        )?;
        let step = direction.unwrap_or(Direction::Ascending).sign();
        coefficients
            .iter()
            .enumerate()
            .map(|(m, b)| Ok((p0 + step * m as f64, as_number(b, "coefficient")?)))
            .collect::<Result<Vec<_>, Failure>>()?
    };
    let parameters = match doc.get("parameters") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<ParameterInput>(v.clone())
                .map_err(|e| field_error(&format!("invalid parameters: {e}")))?,
        ),
    };
    let q = match doc.get("q") {
        None | Some(Value::Null) => None,
        Some(v) => Some(as_number(v, "q")?),
    };
    let samples = match doc.get("samples") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_array()
                .ok_or_else(|| field_error("samples must be an array"))?
                .iter()
                .map(|z| as_number(z, "sample"))
                .collect::<Result<Vec<_>, Failure>>()?,
        ),
    };
    let domain = match doc.get("domain").and_then(Value::as_array) {
        Some(bounds) if bounds.len() == 2 => {
            let bound = |v: &Value, missing: f64| {
                if v.is_null() {
                    Ok(missing)
                } else {
                    as_number(v, "domain")
                }
            };
            Some((bound(&bounds[0], 0.0)?, bound(&bounds[1], f64::INFINITY)?))
        }
        Some(_) => return Err(field_error("domain must be [lo, hi]")),
        None => None,
    };
    Ok(Candidate {
        terms: Terms(terms),
        direction,
        parameters,
        q,
        samples,
        domain,
    })
}

/// Default residual window: half the radius for series in `z`, `(2R, 4R)`
/// for series in `1/z`, and `(0, min(1, |a|))` for polynomials.
fn default_window(candidate: &Candidate, a: f64) -> (f64, f64) {
    match candidate.direction {
        Some(Direction::Ascending) => {
            let hi = candidate.domain.map_or(a.abs().min(1.0), |d| d.1);
            (candidate.domain.map_or(0.0, |d| d.0), 0.5 * hi)
        }
        Some(Direction::Descending) => {
            let lo = candidate.domain.map_or(a.abs().max(1.0), |d| d.0);
            (2.0 * lo, 4.0 * lo)
        }
        None => match candidate.domain {
            Some((lo, hi)) if hi.is_finite() => (lo, hi),
            Some((lo, _)) => (lo, 2.0 * lo.max(1.0)),
            None => (0.0, a.abs().min(1.0)),
        },
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    threshold: f64,
    passed: bool,
    q: f64,
    report: ResidualReport,
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let candidate = parse_candidate(&read_input(&args.solution)?)?;
    let mut params =
        match (args.params.resolve()?, candidate.parameters) {
            (Some(p), _) => p,
            (None, Some(input)) => input.validate()?,
            (None, None) => return Err(Failure::Usage(
                "no parameters: give parameter flags or a \"parameters\" object in the solution"
                    .into(),
            )),
        };
    if args.params.q.is_none() {
        if let Some(q) = candidate.q {
            params = params.with_q(q);
        }
    }
    let samples = match &candidate.samples {
        Some(s) => s.clone(),
        None => {
            let (lo, hi) = default_window(&candidate, params.a());
            default_samples(lo, hi, params.a())
        }
    };
    let report = ode_residual_with_coefficients(
        &params.canonical_coefficients(),
        &candidate.terms,
        &samples,
    )?;
    let passed = report.passes(args.threshold);
    let doc = VerifyDoc {
        threshold: args.threshold,
        passed,
        q: params.q(),
        report,
    };
    emit_json(&doc, args.output.json.as_deref())?;
    Ok(if passed {
        Outcome::Accepted
    } else {
        Outcome::Rejected
    })
}

#[derive(Serialize)]
struct AlgebraDoc {
    mu: f64,
    nu: f64,
    exponents: Vec<f64>,
    tolerance: f64,
    deviations: AlgebraDeviations,
    max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree_split: Option<DegreeSplitDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reconstruction_deviation: Option<f64>,
    passed: bool,
}

#[derive(Serialize)]
struct DegreeSplitDoc {
    j: f64,
    deviation: f64,
    scale: f64,
}

/// Fixed ten-term test polynomial on the half-integer grid from `base`.
fn test_polynomial(base: f64) -> HalfGridPoly {
    let coefficients: Vec<f64> = (0..10)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (k + 1) as f64)
        .collect();
    HalfGridPoly::from_coefficients(base, &coefficients)
}

pub fn check_algebra(args: &CheckAlgebraArgs) -> Result<Outcome, Failure> {
    let exponents = args
        .exponents
        .clone()
        .unwrap_or_else(|| (-6..=6).map(|k| 0.5 * k as f64).collect());
    let params = args.params.resolve()?;
    let dec = match (args.mu.zip(args.nu), &params) {
        (Some(_), _) => None,
        (None, Some(p)) => Some(heun_su11::decompose(p)?),
        (None, None) => {
            return Err(Failure::Usage(
                "give --mu and --nu, or equation parameters".into(),
            ))
        }
    };
    let (mu, nu) = args
        .mu
        .zip(args.nu)
        .or(dec.map(|d| (d.mu, d.nu)))
        .expect("one source is present");
    let deviations = algebra_identity_check(mu, nu, &exponents);
    let mut passed = deviations.max() <= args.tolerance;

    let degree_split = params.as_ref().map(|p| {
        let c = p.canonical_coefficients();
        let scale = exponents
            .iter()
            .flat_map(|&x| c.apply_to_monomial(x))
            .fold(1.0_f64, |m, v| m.max(v.abs()))
            * (1.0 + args.j * args.j);
        DegreeSplitDoc {
            j: args.j,
            deviation: degree_decomposition_check(p, args.j, &exponents),
            scale,
        }
    });
    if let Some(d) = &degree_split {
        passed &= d.deviation <= args.tolerance * d.scale;
    }
    let reconstruction_deviation = match (&params, &dec) {
        (Some(p), Some(d)) => {
            let poly = test_polynomial(-d.nu);
            let scale = d.apply(&poly).max_abs().max(1.0);
            let rel = reconstruction_check(p, d, &poly) / scale;
            passed &= rel <= args.tolerance;
            Some(rel)
        }
        _ => None,
    };
    let doc = AlgebraDoc {
        mu,
        nu,
        exponents,
        tolerance: args.tolerance,
        max_deviation: deviations.max(),
        deviations,
        degree_split,
        reconstruction_deviation,
        passed,
    };
    emit_json(&doc, args.output.json.as_deref())?;
    if passed {
        Ok(Outcome::Accepted)
    } else {
        Err(Failure::Numerical(format!(
            "identity deviations exceed tolerance {:e}",
            args.tolerance
        )))
    }
}
