//! Constituent su(1,1) generators and the quadratic decomposition of the
//! Heun operator.
//!
//! With real parameters `μ`, `ν` the generators act on monomials as
//!
//! ```text
//! E₊ = 2 z^{3/2} d/dz + 2μ √z      E₊ z^p = (2p + 2μ) z^{p+1/2}
//! H  = 2 z d/dz + μ + ν            H  z^p = (2p + μ + ν) z^p
//! E₋ = 2 z^{1/2} d/dz + 2ν / √z    E₋ z^p = (2p + 2ν) z^{p-1/2}
//! ```
//!
//! and the Heun operator becomes `c₊E₊E₊ + c₋E₋E₋ + c₂HH + c₁H + c₀` exactly
//! when the singularities at 0 and ∞ are elementary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{CanonicalCoefficients, HeunParameters};
use crate::poly::HalfGridPoly;

/// Absolute tolerance on the two factorization conditions.
pub const CONDITION_TOLERANCE: f64 = 1e-9;

/// Parameters `μ`, `ν` of the constituent operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParameters {
    pub mu: f64,
    pub nu: f64,
}

impl GeneratorParameters {
    pub fn new(mu: f64, nu: f64) -> Self {
        Self { mu, nu }
    }

    /// Coefficient of `E₊ z^p`.
    pub fn raise(&self, p: f64) -> f64 {
        2.0 * p + 2.0 * self.mu
    }

    /// Eigenvalue `h` of `H` on `z^p`.
    pub fn weight(&self, p: f64) -> f64 {
        2.0 * p + self.mu + self.nu
    }

    /// Coefficient of `E₋ z^p`.
    pub fn lower(&self, p: f64) -> f64 {
        2.0 * p + 2.0 * self.nu
    }

    pub fn apply_raise(&self, f: &HalfGridPoly) -> HalfGridPoly {
        f.apply(|p| [(1, self.raise(p))])
    }

    pub fn apply_weight(&self, f: &HalfGridPoly) -> HalfGridPoly {
        f.apply(|p| [(0, self.weight(p))])
    }

    pub fn apply_lower(&self, f: &HalfGridPoly) -> HalfGridPoly {
        f.apply(|p| [(-1, self.lower(p))])
    }

    /// `-(μ - ν)(μ - ν - 1)`.
    pub fn casimir(&self) -> f64 {
        let d = self.mu - self.nu;
        -d * (d - 1.0)
    }
}

/// Which factorization condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum FactorizationFailure {
    /// `|α - β| ≠ 1/2`: the singularity at infinity is not elementary.
    InfinityNotElementary { exponent_gap: f64, deviation: f64 },
    /// `γ ∉ {1/2, 3/2}`: the singularity at the origin is not elementary.
    OriginNotElementary { gamma: f64, deviation: f64 },
}

impl FactorizationFailure {
    pub fn code(&self) -> &'static str {
        match self {
            Self::InfinityNotElementary { .. } => "infinity_not_elementary",
            Self::OriginNotElementary { .. } => "origin_not_elementary",
        }
    }
}

/// Outcome of [`check_factorizable`]; accepted iff `failures` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationDiagnosis {
    pub failures: Vec<FactorizationFailure>,
}

impl FactorizationDiagnosis {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for FactorizationDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "accepted");
        }
        for (i, failure) in self.failures.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match failure {
                FactorizationFailure::InfinityNotElementary {
                    exponent_gap,
                    deviation,
                } => write!(
                    f,
                    "|alpha - beta| = {exponent_gap} differs from 1/2 by {deviation:e}"
                )?,
                FactorizationFailure::OriginNotElementary { gamma, deviation } => {
                    write!(f, "gamma = {gamma} is {deviation:e} away from {{1/2, 3/2}}")?
                }
            }
        }
        Ok(())
    }
}

/// Tests both elementarity conditions on the parameters.
pub fn check_factorizable(params: &HeunParameters) -> FactorizationDiagnosis {
    let mut failures = Vec::new();
    let exponent_gap = (params.alpha() - params.beta()).abs();
    let deviation = (exponent_gap - 0.5).abs();
    if deviation > CONDITION_TOLERANCE {
        failures.push(FactorizationFailure::InfinityNotElementary {
            exponent_gap,
            deviation,
        });
    }
    let gamma = params.gamma();
    let deviation = (gamma - 0.5).abs().min((gamma - 1.5).abs());
    if deviation > CONDITION_TOLERANCE {
        failures.push(FactorizationFailure::OriginNotElementary { gamma, deviation });
    }
    FactorizationDiagnosis { failures }
}

/// Coefficients of `𝓗 = c₊E₊E₊ + c₋E₋E₋ + c₂HH + c₁H + c₀` together with the
/// generator parameters and the Casimir value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su11Decomposition {
    pub mu: f64,
    pub nu: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub casimir: f64,
}

/// Decomposes a factorizable Heun operator.
pub fn decompose(params: &HeunParameters) -> Result<Su11Decomposition> {
    let diagnosis = check_factorizable(params);
    if !diagnosis.accepted() {
        return Err(Error::NotFactorizable(diagnosis));
    }
    Su11Decomposition::from_coefficients(&params.canonical_coefficients())
}

impl Su11Decomposition {
    /// Solves the coefficient-matching relations for `μ`, `ν`, `c`'s.
    ///
    /// `ν` is read off `a5/a2`; the relation for `a6` is only used as a
    /// consistency check.
    pub fn from_coefficients(c: &CanonicalCoefficients) -> Result<Self> {
        let c_plus = c.a0 / 4.0;
        let c_minus = c.a2 / 4.0;
        let mu = (c.a3 / c.a0 * 2.0 - 3.0) / 4.0;
        let gamma = c.a5 / c.a2;
        let nu = if (gamma - 0.5).abs() <= CONDITION_TOLERANCE {
            0.0
        } else if (gamma - 1.5).abs() <= CONDITION_TOLERANCE {
            0.5
        } else {
            return Err(Error::NotFactorizable(FactorizationDiagnosis {
                failures: vec![FactorizationFailure::OriginNotElementary {
                    gamma,
                    deviation: (gamma - 0.5).abs().min((gamma - 1.5).abs()),
                }],
            }));
        };
        let expected_a6 = c.a0 / 2.0 * mu * (1.0 + 2.0 * mu);
        if (expected_a6 - c.a6).abs() > CONDITION_TOLERANCE {
            return Err(Error::InconsistentCoefficients {
                expected: expected_a6,
                found: c.a6,
            });
        }
        let s = mu + nu;
        let c2 = c.a1 / 4.0;
        let c1 = (c.a4 - c.a1 * (1.0 + s)) / 2.0;
        let c0 = c.a7 - s * (c1 + c2 * s);
        Ok(Self {
            mu,
            nu,
            c_plus,
            c_minus,
            c2,
            c1,
            c0,
            casimir: GeneratorParameters::new(mu, nu).casimir(),
        })
    }

    pub fn generators(&self) -> GeneratorParameters {
        GeneratorParameters::new(self.mu, self.nu)
    }

    /// Rebuilds a0..a7 from the decomposition.
    pub fn canonical_coefficients(&self) -> CanonicalCoefficients {
        let Self {
            mu,
            nu,
            c_plus,
            c_minus,
            c2,
            c1,
            c0,
            ..
        } = *self;
        let s = mu + nu;
        CanonicalCoefficients {
            a0: 4.0 * c_plus,
            a1: 4.0 * c2,
            a2: 4.0 * c_minus,
            a3: 2.0 * c_plus * (3.0 + 4.0 * mu),
            a4: 2.0 * (c1 + 2.0 * c2 * (1.0 + s)),
            a5: 2.0 * c_minus * (1.0 + 4.0 * nu),
            a6: 2.0 * c_plus * mu * (1.0 + 2.0 * mu),
            a7: c0 + s * (c1 + c2 * s),
        }
    }

    /// The accessory parameter encoded in `c₀`.
    pub fn q(&self) -> f64 {
        let s = self.mu + self.nu;
        -(self.c0 + s * (self.c1 + self.c2 * s))
    }

    /// Location of the singularity `a = c₋ / c₊`.
    pub fn singularity(&self) -> f64 {
        self.c_minus / self.c_plus
    }

    pub fn monomial_action(&self) -> MonomialAction {
        MonomialAction { dec: *self }
    }

    /// Applies `c₊E₊E₊ + c₋E₋E₋ + c₂HH + c₁H + c₀` by composing the generators.
    pub fn apply(&self, f: &HalfGridPoly) -> HalfGridPoly {
        let g = self.generators();
        let ee_plus = g.apply_raise(&g.apply_raise(f));
        let ee_minus = g.apply_lower(&g.apply_lower(f));
        let h = g.apply_weight(f);
        let hh = g.apply_weight(&h);
        f.scaled(self.c0)
            .add_scaled(&ee_plus, self.c_plus)
            .add_scaled(&ee_minus, self.c_minus)
            .add_scaled(&hh, self.c2)
            .add_scaled(&h, self.c1)
    }
}

/// Tridiagonal action of the factorized operator on `z^p`:
/// `𝓗 z^p = up(p) z^{p+1} + diag(p) z^p + down(p) z^{p-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialAction {
    dec: Su11Decomposition,
}

impl MonomialAction {
    pub fn up(&self, p: f64) -> f64 {
        let m = self.dec.mu;
        self.dec.c_plus * (2.0 * p + 2.0 * m) * (2.0 * p + 1.0 + 2.0 * m)
    }

    pub fn down(&self, p: f64) -> f64 {
        let n = self.dec.nu;
        self.dec.c_minus * (2.0 * p + 2.0 * n) * (2.0 * p - 1.0 + 2.0 * n)
    }

    pub fn diag(&self, p: f64) -> f64 {
        let h = self.dec.generators().weight(p);
        (self.dec.c2 * h + self.dec.c1) * h + self.dec.c0
    }

    /// The diagonal without its `q` dependence: `diag(p) = shifted_diag(p) - q`.
    pub fn shifted_diag(&self, p: f64) -> f64 {
        let d = &self.dec;
        let s = d.mu + d.nu;
        let h = d.generators().weight(p);
        (d.c2 * h + d.c1) * h - s * (d.c1 + d.c2 * s)
    }

    pub fn decomposition(&self) -> &Su11Decomposition {
        &self.dec
    }
}

/// Residuals of the su(1,1) relations on monomials.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AlgebraDeviations {
    /// `[H, E₊] - E₊`
    pub h_raise: f64,
    /// `[H, E₋] + E₋`
    pub h_lower: f64,
    /// `[E₊, E₋] + 2H`
    pub raise_lower: f64,
    /// `½(E₊E₋ + E₋E₊) - H² + (μ - ν)(μ - ν - 1)`
    pub casimir: f64,
}

impl AlgebraDeviations {
    pub fn max(&self) -> f64 {
        self.h_raise
            .max(self.h_lower)
            .max(self.raise_lower)
            .max(self.casimir)
    }
}

/// Checks the commutation relations and the Casimir value on `z^p` for each
/// `p` in `exponents`. Deviations are relative to the largest coefficient
/// produced (floored at 1).
pub fn algebra_identity_check(mu: f64, nu: f64, exponents: &[f64]) -> AlgebraDeviations {
    let g = GeneratorParameters::new(mu, nu);
    let mut dev = AlgebraDeviations::default();
    for &p in exponents {
        let f = HalfGridPoly::monomial(p);
        let e_plus = g.apply_raise(&f);
        let e_minus = g.apply_lower(&f);
        let h = g.apply_weight(&f);
        let h_e_plus = g.apply_weight(&e_plus);
        let e_plus_h = g.apply_raise(&h);
        let h_e_minus = g.apply_weight(&e_minus);
        let e_minus_h = g.apply_lower(&h);
        let e_plus_e_minus = g.apply_raise(&e_minus);
        let e_minus_e_plus = g.apply_lower(&e_plus);
        let hh = g.apply_weight(&h);

        let rel = |x: &HalfGridPoly, scale: f64| x.max_abs() / scale.max(1.0);

        let r = h_e_plus
            .add_scaled(&e_plus_h, -1.0)
            .add_scaled(&e_plus, -1.0);
        dev.h_raise = dev.h_raise.max(rel(&r, h_e_plus.max_abs()));

        let r = h_e_minus
            .add_scaled(&e_minus_h, -1.0)
            .add_scaled(&e_minus, 1.0);
        dev.h_lower = dev.h_lower.max(rel(&r, h_e_minus.max_abs()));

        let r = e_plus_e_minus
            .add_scaled(&e_minus_e_plus, -1.0)
            .add_scaled(&h, 2.0);
        dev.raise_lower = dev.raise_lower.max(rel(&r, e_plus_e_minus.max_abs()));

        let d = mu - nu;
        let r = e_plus_e_minus
            .scaled(0.5)
            .add_scaled(&e_minus_e_plus, 0.5)
            .add_scaled(&hh, -1.0)
            .add_scaled(&f, d * (d - 1.0));
        let scale = e_plus_e_minus.max_abs().max(hh.max_abs());
        dev.casimir = dev.casimir.max(rel(&r, scale));
    }
    dev
}

/// Largest coefficient difference between the polynomial-form operator (with
/// the coefficients of `params`) and the decomposed operator on `test_poly`.
pub fn reconstruction_check(
    params: &HeunParameters,
    dec: &Su11Decomposition,
    test_poly: &HalfGridPoly,
) -> f64 {
    let c = params.canonical_coefficients();
    let canonical = test_poly.apply(|p| {
        let [up, diag, down] = c.apply_to_monomial(p);
        [(2, up), (0, diag), (-2, down)]
    });
    canonical.max_abs_diff(&dec.apply(test_poly))
}
