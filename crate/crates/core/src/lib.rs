//! Quadratic su(1,1) structure of the Heun operator.
//!
//! When the singular points 0 and ∞ of a real Heun equation are elementary
//! (`|α - β| = 1/2` and `γ ∈ {1/2, 3/2}`), the operator can be written as
//! `c₊E₊E₊ + c₋E₋E₋ + c₂HH + c₁H + c₀` in first-order generators of degrees
//! `+1/2`, `0`, `-1/2`. This crate decides that condition, computes the
//! decomposition, classifies the representation spaces fixed by its Casimir
//! value, and builds solutions from them:
//!
//! * finite-dimensional spaces give eigenvalues `q` with polynomial
//!   eigenfunctions in `√z` ([`spectrum`]);
//! * discrete series give power series in `z` or `1/z` for any `q`
//!   ([`series`]).
//!
//! Every solution can be checked against the original equation with
//! [`verifier`].
//!
//! ```
//! use heun_su11::{algebra, heun::HeunParameters, representations, spectrum};
//!
//! let params = HeunParameters::example1(4.0, 0.0).unwrap();
//! let dec = algebra::decompose(&params).unwrap();
//! assert_eq!((dec.mu, dec.nu, dec.casimir), (-1.0, 0.0, -2.0));
//!
//! let triplet = &representations::classify(&dec)[0];
//! let spectrum = spectrum::solve_spectrum(&dec, triplet).unwrap();
//! let qs: Vec<f64> = spectrum.pairs.iter().map(|p| p.q).collect();
//! assert!((qs[0] - 1.0).abs() < 1e-12 && (qs[1] + 1.0).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod heun;
pub mod poly;
pub mod representations;
pub mod series;
pub mod spectrum;
pub mod verifier;

pub use algebra::{check_factorizable, decompose, Su11Decomposition};
pub use error::{Error, Result};
pub use heun::{CanonicalCoefficients, HeunParameters};
pub use representations::{classify, split_even_odd, Direction, Parity, RepresentationClass};
pub use series::{evaluate_series, series_solution, SeriesSolution};
pub use spectrum::{solve_spectrum, SpectralResult};
