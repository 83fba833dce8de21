//! Heun equation parameters and the polynomial-coefficient form of the operator.
//!
//! The Heun equation
//!
//! ```text
//! y'' + (γ/z + δ/(z-1) + ε/(z-a)) y' + (αβ z - q) / (z(z-1)(z-a)) y = 0
//! ```
//!
//! is handled throughout in its polynomial form `f1 y'' + f2 y' + f3 y = 0`
//! with `f1 = a0 z³ + a1 z² + a2 z`, `f2 = a3 z² + a4 z + a5`, `f3 = a6 z + a7`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the Fuchsian residual of a user-supplied ε.
pub const FUCHS_TOLERANCE: f64 = 1e-9;

/// The six real Heun parameters plus the accessory parameter `q`.
///
/// Always satisfies γ + δ + ε = α + β + 1 exactly (ε is recomputed on
/// construction) and stores the exponents at infinity ordered `alpha <= beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunParameters {
    gamma: f64,
    delta: f64,
    epsilon: f64,
    alpha: f64,
    beta: f64,
    a: f64,
    q: f64,
}

impl HeunParameters {
    /// Validates and builds a parameter set. When `epsilon` is `None` it is
    /// eliminated through the Fuchsian condition.
    pub fn new(
        gamma: f64,
        delta: f64,
        alpha: f64,
        beta: f64,
        a: f64,
        q: f64,
        epsilon: Option<f64>,
    ) -> Result<Self> {
        for (name, v) in [
            ("gamma", gamma),
            ("delta", delta),
            ("alpha", alpha),
            ("beta", beta),
            ("a", a),
            ("q", q),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if a == 0.0 || a == 1.0 {
            return Err(Error::DegenerateSingularity(a));
        }
        let fuchsian_epsilon = alpha + beta + 1.0 - gamma - delta;
        if let Some(eps) = epsilon {
            if !eps.is_finite() {
                return Err(Error::NonFinite("epsilon"));
            }
            let residual = eps - fuchsian_epsilon;
            if residual.abs() > FUCHS_TOLERANCE {
                return Err(Error::FuchsianViolation { residual });
            }
        }
        let (alpha, beta) = if alpha <= beta {
            (alpha, beta)
        } else {
            (beta, alpha)
        };
        Ok(Self {
            gamma,
            delta,
            epsilon: fuchsian_epsilon,
            alpha,
            beta,
            a,
            q,
        })
    }

    /// Parameters given through the sum and product of the exponents at infinity.
    pub fn from_exponent_sum_product(
        gamma: f64,
        delta: f64,
        sum: f64,
        product: f64,
        a: f64,
        q: f64,
    ) -> Result<Self> {
        let (alpha, beta) = exponents_from_sum_product(sum, product)?;
        Self::new(gamma, delta, alpha, beta, a, q, None)
    }

    /// γ = 1/2, δ = ε = -1/2, αβ = 1/2.
    pub fn example1(a: f64, q: f64) -> Result<Self> {
        // α + β = γ + δ + ε - 1
        Self::from_exponent_sum_product(0.5, -0.5, -1.5, 0.5, a, q)
    }

    /// γ = 3/2, δ = ε = -1/2, αβ = 0.
    pub fn example2(a: f64, q: f64) -> Result<Self> {
        Self::from_exponent_sum_product(1.5, -0.5, -0.5, 0.0, a, q)
    }

    /// The algebraic Lamé equation: γ = δ = ε = 1/2 and
    /// `f3 = -(ρ(ρ+1) z / 4 + q)`, i.e. α + β = 1/2 and αβ = -ρ(ρ+1)/4.
    ///
    /// The exponents at infinity are `-ρ/2` and `(ρ+1)/2`.
    pub fn lame(rho: f64, a: f64, q: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NonFinite("rho"));
        }
        Self::from_exponent_sum_product(0.5, 0.5, 0.5, -rho * (rho + 1.0) / 4.0, a, q)
    }

    /// Same equation with a different accessory parameter.
    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Polynomial coefficients a0..a7 of the operator.
    pub fn canonical_coefficients(&self) -> CanonicalCoefficients {
        let Self {
            gamma,
            delta,
            alpha,
            beta,
            a,
            q,
            ..
        } = *self;
        CanonicalCoefficients {
            a0: 1.0,
            a1: -(a + 1.0),
            a2: a,
            a3: 1.0 + alpha + beta,
            a4: -(a * gamma + a * delta - delta + alpha + beta + 1.0),
            a5: a * gamma,
            a6: alpha * beta,
            a7: -q,
        }
    }
}

/// Resolves α ≤ β from α + β and αβ, rejecting complex pairs.
pub fn exponents_from_sum_product(sum: f64, product: f64) -> Result<(f64, f64)> {
    let discriminant = sum * sum - 4.0 * product;
    if discriminant < 0.0 {
        return Err(Error::ComplexExponents { discriminant });
    }
    let root = discriminant.sqrt();
    // Avoid cancellation in the smaller-magnitude root.
    let (x1, x2) = if sum == 0.0 {
        (-0.5 * root, 0.5 * root)
    } else {
        let big = 0.5 * (sum + root.copysign(sum));
        (big, product / big)
    };
    // `+ 0.0` folds a negative zero into +0.
    let (x1, x2) = (x1 + 0.0, x2 + 0.0);
    Ok(if x1 <= x2 { (x1, x2) } else { (x2, x1) })
}

/// Parameter document accepted from JSON input. `epsilon` is optional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterInput {
    pub gamma: f64,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub q: f64,
}

impl ParameterInput {
    pub fn validate(&self) -> Result<HeunParameters> {
        HeunParameters::new(
            self.gamma,
            self.delta,
            self.alpha,
            self.beta,
            self.a,
            self.q,
            self.epsilon,
        )
    }
}

impl From<&HeunParameters> for ParameterInput {
    fn from(p: &HeunParameters) -> Self {
        Self {
            gamma: p.gamma,
            delta: p.delta,
            epsilon: Some(p.epsilon),
            alpha: p.alpha,
            beta: p.beta,
            a: p.a,
            q: p.q,
        }
    }
}

/// Coefficients of `f1 = a0 z³ + a1 z² + a2 z`, `f2 = a3 z² + a4 z + a5`,
/// `f3 = a6 z + a7`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
}

impl CanonicalCoefficients {
    pub fn with_q(mut self, q: f64) -> Self {
        self.a7 = -q;
        self
    }

    /// Location of the finite singularity other than 0 and 1.
    pub fn singularity(&self) -> f64 {
        self.a2 / self.a0
    }

    pub fn f1(&self, z: f64) -> f64 {
        ((self.a0 * z + self.a1) * z + self.a2) * z
    }

    pub fn f2(&self, z: f64) -> f64 {
        (self.a3 * z + self.a4) * z + self.a5
    }

    pub fn f3(&self, z: f64) -> f64 {
        self.a6 * z + self.a7
    }

    /// Action on `z^p`: returns the coefficients of `z^{p+1}`, `z^p`, `z^{p-1}`.
    pub fn apply_to_monomial(&self, p: f64) -> [f64; 3] {
        let pp = p * (p - 1.0);
        [
            self.a0 * pp + self.a3 * p + self.a6,
            self.a1 * pp + self.a4 * p + self.a7,
            self.a2 * pp + self.a5 * p,
        ]
    }
}

/// The operator regrouped by degree: `P₊ + F(P₀) + P₋` with `P₀ = z d/dz - j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeDecomposition {
    pub j: f64,
    /// `P₊ = a0 z³ d² + a3 z² d + a6 z`, stored as `[a0, a3, a6]`.
    pub raising: [f64; 3],
    /// `F(P₀) = f2 P₀² + f1 P₀ + f0`, stored as `[f2, f1, f0]`.
    pub level: [f64; 3],
    /// `P₋ = a2 z d² + a5 d`, stored as `[a2, a5]`.
    pub lowering: [f64; 2],
}

impl DegreeDecomposition {
    pub fn new(c: &CanonicalCoefficients, j: f64) -> Self {
        Self {
            j,
            raising: [c.a0, c.a3, c.a6],
            level: [
                c.a1,
                (2.0 * j - 1.0) * c.a1 + c.a4,
                j * (j - 1.0) * c.a1 + j * c.a4 + c.a7,
            ],
            lowering: [c.a2, c.a5],
        }
    }

    /// Action on `z^p` as coefficients of `z^{p+1}`, `z^p`, `z^{p-1}`.
    pub fn apply_to_monomial(&self, p: f64) -> [f64; 3] {
        let [r2, r1, r0] = self.raising;
        let [l2, l1, l0] = self.level;
        let [m2, m1] = self.lowering;
        let p0 = p - self.j;
        [
            r2 * p * (p - 1.0) + r1 * p + r0,
            (l2 * p0 + l1) * p0 + l0,
            m2 * p * (p - 1.0) + m1 * p,
        ]
    }
}

/// Largest coefficient deviation between `P₊ + F(P₀) + P₋` and the
/// polynomial-form operator on the monomials `z^p`, `p` in `exponents`.
pub fn degree_decomposition_check(params: &HeunParameters, j: f64, exponents: &[f64]) -> f64 {
    let coeffs = params.canonical_coefficients();
    let dd = DegreeDecomposition::new(&coeffs, j);
    exponents
        .iter()
        .flat_map(|&p| {
            let lhs = dd.apply_to_monomial(p);
            let rhs = canonical_action_from_polynomials(params, p);
            (0..3).map(move |i| (lhs[i] - rhs[i]).abs())
        })
        .fold(0.0, f64::max)
}

/// Action on `z^p` built from `f2 = γ(z-1)(z-a) + δz(z-a) + εz(z-1)` expanded
/// directly, independent of the a0..a7 table.
fn canonical_action_from_polynomials(params: &HeunParameters, p: f64) -> [f64; 3] {
    let HeunParameters {
        gamma,
        delta,
        epsilon,
        alpha,
        beta,
        a,
        q,
    } = *params;
    // f1 = z(z-1)(z-a)
    let f1 = [1.0, -(1.0 + a), a];
    let f2 = [
        gamma + delta + epsilon,
        -gamma * (1.0 + a) - delta * a - epsilon,
        gamma * a,
    ];
    let pp = p * (p - 1.0);
    [
        f1[0] * pp + f2[0] * p + alpha * beta,
        f1[1] * pp + f2[1] * p - q,
        f1[2] * pp + f2[2] * p,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * (1.0 + b.abs())
    }

    #[test]
    fn epsilon_eliminated_for_example_parameters() {
        let p = HeunParameters::new(0.5, -0.5, -1.0, -0.5, 2.0, 0.0, None).unwrap();
        assert_eq!(p.epsilon(), -0.5);
        let p = HeunParameters::new(1.5, -0.5, 0.0, -0.5, 2.0, 0.0, None).unwrap();
        assert_eq!(p.epsilon(), -0.5);
        assert_eq!((p.alpha(), p.beta()), (-0.5, 0.0));
    }

    #[test]
    fn degenerate_singularity_rejected() {
        for a in [0.0, 1.0] {
            let err = HeunParameters::new(1.0, 1.0, 1.0, 1.0, a, 0.0, None).unwrap_err();
            assert_eq!(err, Error::DegenerateSingularity(a));
        }
    }

    #[test]
    fn supplied_epsilon_checked_against_fuchsian_condition() {
        let ok = HeunParameters::new(0.5, -0.5, -1.0, -0.5, 2.0, 0.0, Some(-0.5 + 5e-10));
        assert_eq!(ok.unwrap().epsilon(), -0.5);
        let bad = HeunParameters::new(0.5, -0.5, -1.0, -0.5, 2.0, 0.0, Some(-0.4));
        assert!(matches!(bad, Err(Error::FuchsianViolation { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let err = HeunParameters::new(f64::NAN, 0.0, 0.0, 0.0, 2.0, 0.0, None).unwrap_err();
        assert_eq!(err, Error::NonFinite("gamma"));
    }

    #[test]
    fn presets_match_explicit_parameters() {
        let e1 = HeunParameters::example1(2.0, 0.0).unwrap();
        let explicit = HeunParameters::new(0.5, -0.5, -1.0, -0.5, 2.0, 0.0, None).unwrap();
        assert_eq!(e1, explicit);
        let e2 = HeunParameters::example2(2.0, 0.0).unwrap();
        assert_eq!((e2.alpha(), e2.beta(), e2.epsilon()), (-0.5, 0.0, -0.5));
    }

    #[test]
    fn canonical_coefficients_example1() {
        let c = HeunParameters::example1(2.0, 0.0)
            .unwrap()
            .canonical_coefficients();
        let expected = [1.0, -3.0, 2.0, -0.5, 0.0, 1.0, 0.5, 0.0];
        let got = [c.a0, c.a1, c.a2, c.a3, c.a4, c.a5, c.a6, c.a7];
        for (g, e) in got.iter().zip(expected) {
            assert!(close(*g, e), "{got:?}");
        }
    }

    #[test]
    fn canonical_coefficients_lame() {
        let c = HeunParameters::lame(0.0, 2.0, 1.0)
            .unwrap()
            .canonical_coefficients();
        assert_eq!([c.a3, c.a4, c.a5, c.a6, c.a7], [1.5, -3.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn lame_exponents() {
        for rho in [0.0, -1.0] {
            let p = HeunParameters::lame(rho, 2.0, 1.0).unwrap();
            assert_eq!((p.gamma(), p.delta(), p.epsilon()), (0.5, 0.5, 0.5));
            assert_eq!((p.alpha(), p.beta()), (0.0, 0.5));
        }
        let p = HeunParameters::lame(1.0, 2.0, 0.0).unwrap();
        assert!(close(p.alpha(), -0.5) && close(p.beta(), 1.0));
    }

    #[test]
    fn complex_exponent_pair_rejected() {
        assert!(matches!(
            exponents_from_sum_product(0.5, 0.5),
            Err(Error::ComplexExponents { .. })
        ));
        assert_eq!(exponents_from_sum_product(-1.5, 0.5).unwrap(), (-1.0, -0.5));
        assert_eq!(exponents_from_sum_product(0.0, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(exponents_from_sum_product(0.0, -4.0).unwrap(), (-2.0, 2.0));
    }

    #[test]
    fn degree_decomposition_examples() {
        let e1 = HeunParameters::example1(2.0, 0.0).unwrap();
        assert!(degree_decomposition_check(&e1, 0.0, &[0.0, 1.0, 2.0]) <= 1e-12);
        let lame = HeunParameters::lame(0.0, 2.0, 1.0).unwrap();
        let ps = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert!(degree_decomposition_check(&lame, 5.5, &ps) <= 1e-12);
    }

    #[test]
    fn a7_is_minus_q() {
        let c = HeunParameters::new(0.3, 0.1, 0.7, -0.2, 3.0, 0.0, None)
            .unwrap()
            .canonical_coefficients();
        assert_eq!(c.a7, 0.0);
    }

    #[test]
    fn json_parameter_document() {
        let doc = r#"{"gamma":0.5,"delta":-0.5,"alpha":-1,"beta":-0.5,"a":2,"q":0}"#;
        let input: ParameterInput = serde_json::from_str(doc).unwrap();
        assert_eq!(input.epsilon, None);
        assert_eq!(input.validate().unwrap().epsilon(), -0.5);
    }
}
