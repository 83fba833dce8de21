use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heun_su11::heun::{HeunParameters, ParameterInput};
use heun_su11::{Parity, RepresentationClass};

use crate::output::read_input;
use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "heun-su11",
    version,
    about = "su(1,1) decomposition and solutions of Heun equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the factorization conditions and print the su(1,1) coefficients.
    Decompose(DecomposeArgs),
    /// List the representation classes allowed by the Casimir value.
    Classify(SourceArgs),
    /// Eigenvalues q and √z-polynomial eigenfunctions on the finite-dimensional space.
    Spectrum(SpectrumArgs),
    /// Power-series solution along a discrete-series ladder.
    Series(SeriesArgs),
    /// Residual of a candidate solution in the original equation.
    Verify(VerifyArgs),
    /// Check the generator commutation relations and the decomposition identities.
    CheckAlgebra(CheckAlgebraArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Example1,
    Example2,
    Lame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepArg {
    Pd,
    Nd,
}

impl From<RepArg> for RepresentationClass {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::Pd => RepresentationClass::PositiveDiscrete,
            RepArg::Nd => RepresentationClass::NegativeDiscrete,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// One of the built-in example equations; --a, --q and --rho adjust it.
    #[arg(long, value_enum, conflicts_with_all = ["gamma", "delta", "epsilon", "alpha", "beta", "params"])]
    pub preset: Option<Preset>,
    /// JSON document with gamma, delta, epsilon (optional), alpha, beta, a, q.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Lamé order, used with --preset lame.
    #[arg(long, allow_hyphen_values = true, requires = "preset")]
    pub rho: Option<f64>,
}

impl ParamArgs {
    fn any_given(&self) -> bool {
        self.preset.is_some()
            || self.params.is_some()
            || [
                self.gamma,
                self.delta,
                self.epsilon,
                self.alpha,
                self.beta,
                self.a,
                self.q,
            ]
            .iter()
            .any(Option::is_some)
    }

    /// Validated parameters, or `None` when no parameter source was given.
    pub fn resolve(&self) -> Result<Option<HeunParameters>, Failure> {
        if !self.any_given() {
            return Ok(None);
        }
        let a = self.a.unwrap_or(2.0);
        let q = self.q.unwrap_or(0.0);
        let params = match self.preset {
            Some(Preset::Example1) => HeunParameters::example1(a, q),
            Some(Preset::Example2) => HeunParameters::example2(a, q),
            Some(Preset::Lame) => HeunParameters::lame(self.rho.unwrap_or(0.0), a, q),
            None => self.input()?.validate(),
        };
        params.map(Some).map_err(Failure::from)
    }

    fn input(&self) -> Result<ParameterInput, Failure> {
        let base = match &self.params {
            Some(path) => Some(
                serde_json::from_value::<ParameterInput>(read_input(path)?).map_err(|e| {
                    Failure::Validation(format!(
                        "{}: invalid parameter document: {e}",
                        path.display()
                    ))
                })?,
            ),
            None => None,
        };
        let pick = |flag: Option<f64>, from_doc: Option<f64>, name: &str| {
            flag.or(from_doc)
                .ok_or_else(|| Failure::Usage(format!("missing --{name} (or --params / --preset)")))
        };
        Ok(ParameterInput {
            gamma: pick(self.gamma, base.map(|b| b.gamma), "gamma")?,
            delta: pick(self.delta, base.map(|b| b.delta), "delta")?,
            epsilon: self.epsilon.or(base.and_then(|b| b.epsilon)),
            alpha: pick(self.alpha, base.map(|b| b.alpha), "alpha")?,
            beta: pick(self.beta, base.map(|b| b.beta), "beta")?,
            a: pick(self.a, base.map(|b| b.a), "a")?,
            q: self.q.or(base.map(|b| b.q)).unwrap_or(0.0),
        })
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the JSON document here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parameters or a previously computed decomposition.
#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Decomposition document (output of `decompose`), `-` for standard input.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["preset", "params", "gamma", "delta", "epsilon", "alpha", "beta", "a", "rho"])]
    pub decomposition: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Only report eigenpairs of this parity.
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// Write samples of one eigenfunction as CSV (columns z,value).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Which reported eigenpair to sample for --csv.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Number of CSV sample points.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value = "pd")]
    pub rep: RepArg,
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    /// Number of terms after the leading one.
    #[arg(long, default_value_t = heun_su11::series::DEFAULT_TERMS)]
    pub kmax: usize,
    /// Write samples of the truncated series as CSV (columns z,value).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Number of CSV sample points.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Solution document, `-` for standard input.
    #[arg(long, value_name = "FILE")]
    pub solution: PathBuf,
    /// Largest accepted relative residual.
    #[arg(long, visible_alias = "tolerance", default_value_t = 1e-8)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckAlgebraArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, allow_hyphen_values = true, requires = "nu", conflicts_with_all = ["preset", "params", "gamma", "delta", "epsilon", "alpha", "beta", "a", "rho"])]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "mu")]
    pub nu: Option<f64>,
    /// Shift of the level operator z d/dz - j in the degree split.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub j: f64,
    /// Test exponents, comma separated (default -3, -2.5, ..., 3).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub exponents: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
