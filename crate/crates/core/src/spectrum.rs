//! Finite spectra: the factorized operator restricted to one parity sub-grid
//! of a finite-dimensional representation is a tridiagonal matrix `A` with
//! `𝓗 = A - q`, so admissible `q` are the eigenvalues of `A` and the
//! eigenvectors give polynomial solutions in `√z`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::algebra::Su11Decomposition;
use crate::eigen;
use crate::error::{Error, Result};
use crate::poly::Monomials;
use crate::representations::{
    split_even_odd, Parity, RepresentationClass, RepresentationDescriptor,
};
use crate::verifier;

/// Default cap on the size of a parity sub-grid.
pub const DEFAULT_GRID_CAP: usize = 64;

/// Largest matrix accepted by [`eigen_oracle`].
pub const ORACLE_MAX_DIMENSION: usize = 8;

/// Relative size of the imaginary part below which an eigenvalue is real.
const REAL_TOLERANCE: f64 = 1e-12;

/// Operator matrix on one parity sub-grid, ascending in exponent.
///
/// Row `m` of `A b` is the coefficient of `z^{p_m}`:
/// `sub[m-1] b[m-1] + diag[m] b[m] + sup[m] b[m+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub exponents: Vec<f64>,
    pub diag: Vec<f64>,
    /// `sub[m] = up(p_m)`, entry `(m+1, m)`.
    pub sub: Vec<f64>,
    /// `sup[m] = down(p_{m+1})`, entry `(m, m+1)`.
    pub sup: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i + 1][i] = self.sub[i];
                m[i][i + 1] = self.sup[i];
            }
        }
        m
    }

    /// Symmetrizable by a diagonal similarity when every `sub[m] sup[m] > 0`.
    pub fn is_symmetrizable(&self) -> bool {
        self.sub.iter().zip(&self.sup).all(|(l, u)| l * u > 0.0)
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = v[i] * self.diag[i];
                if i > 0 {
                    r += v[i - 1] * self.sub[i - 1];
                }
                if i + 1 < n {
                    r += v[i + 1] * self.sup[i];
                }
                r
            })
            .collect()
    }
}

pub fn build_matrix(dec: &Su11Decomposition, subgrid: &[f64]) -> Result<TridiagonalMatrix> {
    build_matrix_with_cap(dec, subgrid, DEFAULT_GRID_CAP)
}

pub fn build_matrix_with_cap(
    dec: &Su11Decomposition,
    subgrid: &[f64],
    cap: usize,
) -> Result<TridiagonalMatrix> {
    if subgrid.len() > cap {
        return Err(Error::GridTooLarge {
            size: subgrid.len(),
            cap,
        });
    }
    let act = dec.monomial_action();
    let n = subgrid.len();
    Ok(TridiagonalMatrix {
        exponents: subgrid.to_vec(),
        diag: subgrid.iter().map(|&p| act.shifted_diag(p)).collect(),
        sub: (0..n.saturating_sub(1))
            .map(|m| act.up(subgrid[m]))
            .collect(),
        sup: (0..n.saturating_sub(1))
            .map(|m| act.down(subgrid[m + 1]))
            .collect(),
    })
}

/// `Σ b_m z^{p0 + m}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqrtZPolynomial {
    pub p0: f64,
    pub coefficients: Vec<f64>,
}

impl SqrtZPolynomial {
    pub fn exponent(&self, m: usize) -> f64 {
        self.p0 + m as f64
    }
}

impl Monomials for SqrtZPolynomial {
    fn monomials(&self) -> Vec<(f64, f64)> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(m, &b)| (self.exponent(m), b))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub q: f64,
    /// Nonzero only for complex pairs (possible when `a < 0`).
    pub q_imag: f64,
    pub parity: Parity,
    /// Real part of the eigenfunction.
    pub eigenfunction: SqrtZPolynomial,
    /// Imaginary part of the eigenfunction coefficients, for complex pairs.
    pub eigenfunction_imag: Option<Vec<f64>>,
    /// ODE residual for real pairs; relative matrix residual for complex ones.
    pub residual: f64,
}

impl EigenPair {
    pub fn is_complex(&self) -> bool {
        self.eigenfunction_imag.is_some()
    }
}

#[derive(Serialize)]
struct TermDoc {
    exponent: f64,
    value: f64,
}

#[derive(Serialize)]
struct EigenPairDoc {
    q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_imag: Option<f64>,
    parity: Parity,
    coefficients: Vec<TermDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients_imag: Option<Vec<TermDoc>>,
    residual: f64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    complex: bool,
}

impl Serialize for EigenPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let f = &self.eigenfunction;
        let terms = |values: &[f64]| -> Vec<TermDoc> {
            values
                .iter()
                .enumerate()
                .map(|(m, &value)| TermDoc {
                    exponent: f.exponent(m),
                    value,
                })
                .collect()
        };
        EigenPairDoc {
            q: self.q,
            q_imag: self.is_complex().then_some(self.q_imag),
            parity: self.parity,
            coefficients: terms(&f.coefficients),
            coefficients_imag: self.eigenfunction_imag.as_deref().map(terms),
            residual: self.residual,
            complex: self.is_complex(),
        }
        .serialize(serializer)
    }
}

/// All eigenpairs on both parity subspaces, even first, each group sorted by
/// descending `q`. Serializes as a JSON array.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpectralResult {
    pub pairs: Vec<EigenPair>,
}

impl SpectralResult {
    pub fn has_complex(&self) -> bool {
        self.pairs.iter().any(EigenPair::is_complex)
    }

    pub fn eigenvalues(&self, parity: Parity) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.parity == parity)
            .map(|p| p.q)
            .collect()
    }
}

/// Solves the finite-dimensional eigenproblem in `q`.
pub fn solve_spectrum(
    dec: &Su11Decomposition,
    rep: &RepresentationDescriptor,
) -> Result<SpectralResult> {
    solve_spectrum_with_cap(dec, rep, DEFAULT_GRID_CAP)
}

pub fn solve_spectrum_with_cap(
    dec: &Su11Decomposition,
    rep: &RepresentationDescriptor,
    cap: usize,
) -> Result<SpectralResult> {
    if !matches!(rep.class, RepresentationClass::FiniteDimensional { .. }) {
        return Err(Error::UnsupportedClass(rep.class.to_string()));
    }
    let split = split_even_odd(rep)?;
    let mut pairs = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let grid = split.get(parity).take(usize::MAX);
        if grid.is_empty() {
            continue;
        }
        let matrix = build_matrix_with_cap(dec, &grid, cap)?;
        pairs.extend(solve_matrix(dec, &matrix, parity)?);
    }
    Ok(SpectralResult { pairs })
}

/// Eigenvalues of one sub-grid matrix: Sturm bisection on the symmetrized
/// matrix when possible, shifted QR otherwise.
pub fn matrix_eigenvalues(matrix: &TridiagonalMatrix) -> Result<Vec<Complex64>> {
    if matrix.is_symmetrizable() {
        let off: Vec<f64> = matrix
            .sub
            .iter()
            .zip(&matrix.sup)
            .map(|(l, u)| (l * u).sqrt())
            .collect();
        Ok(eigen::symmetric_tridiagonal_eigenvalues(&matrix.diag, &off)
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect())
    } else {
        eigen::hessenberg_eigenvalues(matrix.to_dense())
    }
}

fn solve_matrix(
    dec: &Su11Decomposition,
    matrix: &TridiagonalMatrix,
    parity: Parity,
) -> Result<Vec<EigenPair>> {
    let mut values = matrix_eigenvalues(matrix)?;
    let norm = matrix
        .diag
        .iter()
        .chain(&matrix.sub)
        .chain(&matrix.sup)
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for v in values.iter_mut() {
        if v.im.abs() <= REAL_TOLERANCE * norm {
            v.im = 0.0;
        }
    }
    // one representative per conjugate pair is enough for the eigenvector,
    // but both eigenvalues are reported
    values.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));

    let dense = matrix.to_dense();
    let a = dec.singularity();
    let samples = verifier::default_samples(0.0, 1f64.min(a.abs()), a);
    let base_coeffs = dec.canonical_coefficients();
    let p0 = matrix.exponents[0];

    values
        .into_iter()
        .map(|lambda| {
            let v = normalize(eigen::inverse_iteration(&dense, lambda));
            let eigenfunction = SqrtZPolynomial {
                p0,
                coefficients: v.iter().map(|c| c.re).collect(),
            };
            if lambda.im == 0.0 {
                let coeffs = base_coeffs.with_q(lambda.re);
                let report =
                    verifier::ode_residual_with_coefficients(&coeffs, &eigenfunction, &samples)?;
                Ok(EigenPair {
                    q: lambda.re,
                    q_imag: 0.0,
                    parity,
                    eigenfunction,
                    eigenfunction_imag: None,
                    residual: report.max_relative_residual,
                })
            } else {
                let av = matrix.apply(&v);
                let resid = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - lambda * y).norm())
                    .fold(0.0, f64::max);
                Ok(EigenPair {
                    q: lambda.re,
                    q_imag: lambda.im,
                    parity,
                    eigenfunction,
                    eigenfunction_imag: Some(v.iter().map(|c| c.im).collect()),
                    residual: resid / norm.max(lambda.norm()),
                })
            }
        })
        .collect()
}

/// Scales so the largest-magnitude coefficient has modulus 1 and the first
/// non-negligible coefficient is positive (real part, for complex vectors).
fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let Some(largest) = v
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
    else {
        return v;
    };
    if largest.norm() == 0.0 {
        return v;
    }
    // dividing by the largest entry also fixes the phase of complex vectors
    let phase = if v.iter().all(|c| c.im == 0.0) {
        Complex64::new(largest.norm(), 0.0)
    } else {
        largest
    };
    v.iter_mut().for_each(|c| *c /= phase);
    if let Some(first) = v.iter().find(|c| c.norm() > 1e-12) {
        if first.re < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
    }
    v
}

/// Real eigenvalues of a small sub-grid matrix from its characteristic
/// polynomial, independent of the QR and Sturm paths.
pub fn eigen_oracle(matrix: &TridiagonalMatrix) -> Result<Vec<f64>> {
    if matrix.dim() > ORACLE_MAX_DIMENSION {
        return Err(Error::GridTooLarge {
            size: matrix.dim(),
            cap: ORACLE_MAX_DIMENSION,
        });
    }
    eigen::characteristic_roots(&matrix.diag, &matrix.sub, &matrix.sup)
}
