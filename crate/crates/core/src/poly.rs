//! Finite linear combinations of monomials `z^p` with `p` on a half-integer
//! grid `base + k/2`. Operators are applied through their exact action on
//! monomials, so no sampling or quadrature is involved.

use std::collections::BTreeMap;

/// Anything that is a finite sum of `coefficient * z^exponent`.
pub trait Monomials {
    /// `(exponent, coefficient)` pairs.
    fn monomials(&self) -> Vec<(f64, f64)>;

    /// Value and first two derivatives at `z > 0`, summed with compensation.
    fn eval_with_derivatives(&self, z: f64) -> [f64; 3] {
        let terms = self.monomials();
        let mut y = CompensatedSum::default();
        let mut dy = CompensatedSum::default();
        let mut d2y = CompensatedSum::default();
        for (p, b) in terms {
            if b == 0.0 {
                continue;
            }
            let zp = z.powf(p);
            y.add(b * zp);
            dy.add(b * p * zp / z);
            d2y.add(b * p * (p - 1.0) * zp / (z * z));
        }
        [y.value(), dy.value(), d2y.value()]
    }

    fn eval(&self, z: f64) -> f64 {
        let mut y = CompensatedSum::default();
        for (p, b) in self.monomials() {
            y.add(b * z.powf(p));
        }
        y.value()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Polynomial in `√z` times `z^base`: `Σ_k c_k z^{base + k/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfGridPoly {
    base: f64,
    terms: BTreeMap<i64, f64>,
}

impl HalfGridPoly {
    pub fn zero(base: f64) -> Self {
        Self {
            base,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(p: f64) -> Self {
        let mut poly = Self::zero(p);
        poly.terms.insert(0, 1.0);
        poly
    }

    /// Builds `Σ coefficients[k] z^{base + k/2}`.
    pub fn from_coefficients(base: f64, coefficients: &[f64]) -> Self {
        let mut poly = Self::zero(base);
        for (k, &c) in coefficients.iter().enumerate() {
            poly.add_term(k as i64, c);
        }
        poly
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn exponent(&self, k: i64) -> f64 {
        self.base + 0.5 * k as f64
    }

    /// Coefficient of `z^{base + k/2}`.
    pub fn coefficient(&self, k: i64) -> f64 {
        self.terms.get(&k).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, k: i64, c: f64) {
        *self.terms.entry(k).or_insert(0.0) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    /// Applies an operator of definite shifts given by its action on a single
    /// monomial: `action(p)` returns `(half_step_shift, coefficient)` pairs.
    pub fn apply<F, I>(&self, action: F) -> Self
    where
        F: Fn(f64) -> I,
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut out = Self::zero(self.base);
        for (&k, &c) in &self.terms {
            for (shift, coeff) in action(self.exponent(k)) {
                out.add_term(k + shift, c * coeff);
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= s);
        out
    }

    /// `self + s * other`; both must live on the same grid.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        debug_assert!(self.same_grid(other));
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, s * c);
        }
        out
    }

    /// True when the two grids coincide (bases differ by a multiple of 1/2).
    pub fn same_grid(&self, other: &Self) -> bool {
        let d = 2.0 * (self.base - other.base);
        (d - d.round()).abs() < 1e-12
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest coefficient-wise difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.add_scaled(other, -1.0).max_abs()
    }
}

impl Monomials for HalfGridPoly {
    fn monomials(&self) -> Vec<(f64, f64)> {
        self.terms().map(|(k, c)| (self.exponent(k), c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn derivatives_of_sqrt() {
        let p = HalfGridPoly::monomial(0.5);
        let [y, dy, d2y] = p.eval_with_derivatives(4.0);
        assert_eq!(y, 2.0);
        assert!((dy - 0.25).abs() < 1e-15);
        assert!((d2y + 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn apply_shifts_on_grid() {
        let p = HalfGridPoly::from_coefficients(0.0, &[1.0, 2.0]);
        // z d/dz raises nothing: z^p -> p z^p
        let q = p.apply(|e| [(0, e)]);
        assert_eq!(q.coefficient(0), 0.0);
        assert_eq!(q.coefficient(1), 1.0);
        // multiply by √z
        let r = p.apply(|_| [(1, 1.0)]);
        assert_eq!(r.coefficient(2), 2.0);
        assert_eq!(r.exponent(2), 1.0);
    }
}
