//! Substitutes candidate solutions into the Heun equation and reports
//! residuals, independently of how the solution was produced.
//!
//! Residuals are always taken on the polynomial form `f1 y'' + f2 y' + f3 y`
//! with `y`, `y'`, `y''` summed term by term from the monomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heun::{CanonicalCoefficients, HeunParameters};
use crate::poly::Monomials;

/// Minimum distance of a sample point from the singular points 1 and `a`.
pub const SINGULARITY_EXCLUSION: f64 = 1e-6;

/// Number of sample points used when none are given.
pub const DEFAULT_SAMPLE_COUNT: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_relative_residual: f64,
    pub sample_points: Vec<f64>,
    /// `|f1 y'' + f2 y' + f3 y| / scale` at each sample.
    pub residuals: Vec<f64>,
    /// `max(|f1 y''|, |f2 y'|, |f3 y|)` at each sample.
    pub scales: Vec<f64>,
}

impl ResidualReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.max_relative_residual < threshold
    }
}

pub fn ode_residual(
    params: &HeunParameters,
    solution: &dyn Monomials,
    samples: &[f64],
) -> Result<ResidualReport> {
    ode_residual_with_coefficients(&params.canonical_coefficients(), solution, samples)
}

pub fn ode_residual_with_coefficients(
    coeffs: &CanonicalCoefficients,
    solution: &dyn Monomials,
    samples: &[f64],
) -> Result<ResidualReport> {
    let a = coeffs.singularity();
    let mut report = ResidualReport {
        max_relative_residual: 0.0,
        sample_points: samples.to_vec(),
        residuals: Vec::with_capacity(samples.len()),
        scales: Vec::with_capacity(samples.len()),
    };
    for &z in samples {
        if z.is_nan()
            || z <= 0.0
            || (z - 1.0).abs() < SINGULARITY_EXCLUSION
            || (z - a).abs() < SINGULARITY_EXCLUSION
        {
            return Err(Error::SamplePointAtSingularity { z });
        }
        let [y, dy, d2y] = solution.eval_with_derivatives(z);
        let terms = [coeffs.f1(z) * d2y, coeffs.f2(z) * dy, coeffs.f3(z) * y];
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        let total = terms[0] + terms[1] + terms[2];
        let rel = if scale > 0.0 {
            total.abs() / scale
        } else {
            total.abs()
        };
        report.max_relative_residual = report.max_relative_residual.max(rel);
        report.residuals.push(rel);
        report.scales.push(scale);
    }
    Ok(report)
}

/// `n` Chebyshev points of the first kind inside `(lo, hi)`.
pub fn chebyshev_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..n)
        .rev()
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
            mid + half * theta.cos()
        })
        .collect()
}

/// Default sample set on `(lo, hi)`: Chebyshev points with any point closer
/// than [`SINGULARITY_EXCLUSION`] to 1 or `a` pushed away from it.
pub fn default_samples(lo: f64, hi: f64, a: f64) -> Vec<f64> {
    chebyshev_points(lo, hi, DEFAULT_SAMPLE_COUNT)
        .into_iter()
        .map(|mut z| {
            for s in [1.0, a] {
                if (z - s).abs() < SINGULARITY_EXCLUSION {
                    z = if z < s {
                        s - 2.0 * SINGULARITY_EXCLUSION
                    } else {
                        s + 2.0 * SINGULARITY_EXCLUSION
                    };
                }
            }
            z
        })
        .collect()
}

/// Analytic-versus-finite-difference derivative deviations, one entry per step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub steps: Vec<f64>,
    /// `|y'(z) - (y(z+h) - y(z-h)) / 2h|`
    pub first: Vec<f64>,
    /// `|y''(z) - (y(z+h) - 2y(z) + y(z-h)) / h²|`
    pub second: Vec<f64>,
}

impl DerivativeCheck {
    pub fn max_deviation(&self) -> f64 {
        self.first
            .iter()
            .chain(&self.second)
            .fold(0.0, |m, &d| m.max(d))
    }

    /// Least-squares slope of `log(deviation)` against `log(h)`.
    pub fn convergence_order(deviations: &[f64], steps: &[f64]) -> f64 {
        let pts: Vec<(f64, f64)> = steps
            .iter()
            .zip(deviations)
            .filter(|(_, d)| **d > 0.0)
            .map(|(h, d)| (h.ln(), d.ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        sxy / sxx
    }
}

pub fn derivative_crosscheck(solution: &dyn Monomials, z: f64, h_steps: &[f64]) -> DerivativeCheck {
    let [y, dy, d2y] = solution.eval_with_derivatives(z);
    let mut check = DerivativeCheck {
        steps: h_steps.to_vec(),
        first: Vec::with_capacity(h_steps.len()),
        second: Vec::with_capacity(h_steps.len()),
    };
    for &h in h_steps {
        let plus = solution.eval(z + h);
        let minus = solution.eval(z - h);
        check.first.push((dy - (plus - minus) / (2.0 * h)).abs());
        check
            .second
            .push((d2y - (plus - 2.0 * y + minus) / (h * h)).abs());
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::HalfGridPoly;

    #[test]
    fn constant_solves_example2_with_zero_q() {
        let params = HeunParameters::example2(4.0, 0.0).unwrap();
        let y = HalfGridPoly::monomial(0.0);
        let samples = default_samples(0.0, 1.0, 4.0);
        let report = ode_residual(&params, &y, &samples).unwrap();
        assert!(report.max_relative_residual <= 1e-14);
        assert_eq!(report.sample_points.len(), 25);
    }

    #[test]
    fn example1_linear_solution_and_wrong_q() {
        let y = HalfGridPoly::from_coefficients(0.0, &[2.0, 0.0, 1.0]);
        let samples: Vec<f64> = (1..=9).map(|k| 0.1 * k as f64).collect();
        let good = HeunParameters::example1(4.0, 1.0).unwrap();
        assert!(
            ode_residual(&good, &y, &samples)
                .unwrap()
                .max_relative_residual
                <= 1e-12
        );
        let bad = good.with_q(0.9);
        assert!(
            ode_residual(&bad, &y, &samples)
                .unwrap()
                .max_relative_residual
                >= 1e-3
        );
    }

    #[test]
    fn singular_sample_rejected() {
        let params = HeunParameters::example1(4.0, 1.0).unwrap();
        let y = HalfGridPoly::monomial(0.0);
        for z in [0.0, -1.0, 1.0, 4.0 + 1e-8] {
            assert!(matches!(
                ode_residual(&params, &y, &[z]),
                Err(Error::SamplePointAtSingularity { .. })
            ));
        }
    }

    #[test]
    fn chebyshev_points_interior_and_sorted() {
        let pts = chebyshev_points(0.0, 1.0, 25);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts[0] > 0.0 && pts[24] < 1.0);
        let nudged = default_samples(0.0, 2.0, 3.0);
        assert!(nudged
            .iter()
            .all(|z| (z - 1.0).abs() >= SINGULARITY_EXCLUSION));
    }

    #[test]
    fn sqrt_derivative_against_finite_differences() {
        let y = HalfGridPoly::monomial(0.5);
        let check = derivative_crosscheck(&y, 1.0, &[1e-4]);
        assert!(check.first[0] <= 1e-9);
        assert!(check.max_deviation() <= 1e-7);
    }

    #[test]
    fn linear_function_has_zero_second_derivative() {
        let y = HalfGridPoly::from_coefficients(0.0, &[2.0, 0.0, 1.0]);
        let [_, _, d2y] = y.eval_with_derivatives(0.37);
        assert_eq!(d2y, 0.0);
        let check = derivative_crosscheck(&y, 0.37, &[1e-1, 1e-2, 1e-3]);
        assert!(check.second.iter().all(|&d| d <= 1e-8), "{check:?}");
    }
}
