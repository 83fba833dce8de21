//! Power-series solutions in the positive (powers of `z`) and negative
//! (powers of `1/z`) discrete representation spaces, for any real `q`.

use serde::{Serialize, Serializer};

use crate::algebra::{MonomialAction, Su11Decomposition};
use crate::error::{Error, Result};
use crate::poly::{CompensatedSum, Monomials};
use crate::representations::{Direction, Parity, RepresentationClass};

/// Default truncation order.
pub const DEFAULT_TERMS: usize = 60;

/// Open interval `(lo, hi)`; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn contains(&self, z: f64) -> bool {
        z > self.lo && z < self.hi
    }
}

impl Serialize for Domain {
    /// `[lo, hi]` with `null` for an infinite bound.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let bound = |x: f64| x.is_finite().then_some(x);
        [bound(self.lo), bound(self.hi)].serialize(serializer)
    }
}

/// Domain of convergence: `(0, min(1,|a|))` for series in `z`,
/// `(max(1,|a|), ∞)` for series in `1/z`.
pub fn convergence_domain(dec: &Su11Decomposition, direction: Direction) -> Domain {
    let a = dec.singularity().abs();
    match direction {
        Direction::Ascending => Domain {
            lo: 0.0,
            hi: a.min(1.0),
        },
        Direction::Descending => Domain {
            lo: a.max(1.0),
            hi: f64::INFINITY,
        },
    }
}

/// Truncated series `Σ_{m=0}^{K} b_m z^{p0 ± m}` with `b_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    pub p0: f64,
    pub direction: Direction,
    pub parity: Parity,
    pub q: f64,
    #[serde(rename = "K")]
    pub terms: usize,
    pub coefficients: Vec<f64>,
    pub domain: Domain,
}

impl SeriesSolution {
    pub fn exponent(&self, m: usize) -> f64 {
        self.p0 + self.direction.sign() * m as f64
    }

    /// Coefficients against `(z/a)^m` (ascending) or `(1/z)^m` (descending),
    /// the normalization in which closed forms are usually printed.
    pub fn scaled_coefficients(&self, a: f64) -> Vec<f64> {
        match self.direction {
            Direction::Ascending => self
                .coefficients
                .iter()
                .enumerate()
                .map(|(m, b)| b * a.powi(m as i32))
                .collect(),
            Direction::Descending => self.coefficients.clone(),
        }
    }

    /// Points strictly inside half the convergence radius, for residual
    /// checks and plotting.
    pub fn sampling_window(&self) -> (f64, f64) {
        match self.direction {
            Direction::Ascending => (0.0, 0.5 * self.domain.hi),
            Direction::Descending => (2.0 * self.domain.lo, 4.0 * self.domain.lo),
        }
    }
}

impl Monomials for SeriesSolution {
    fn monomials(&self) -> Vec<(f64, f64)> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(m, &b)| (self.exponent(m), b))
            .collect()
    }
}

/// Base exponent of a discrete-series sub-ladder.
pub fn base_exponent(
    dec: &Su11Decomposition,
    class: RepresentationClass,
    parity: Parity,
) -> Result<f64> {
    let offset = match parity {
        Parity::Even => 0.0,
        Parity::Odd => 0.5,
    };
    match class {
        RepresentationClass::PositiveDiscrete => Ok(-dec.nu + offset),
        RepresentationClass::NegativeDiscrete => Ok(-dec.mu - offset),
        other => Err(Error::UnsupportedClass(other.to_string())),
    }
}

type Coupling = fn(&MonomialAction, f64) -> f64;

/// Generates `b_1..b_K` from the three-term recurrence
/// `up(p_{m-1}) b_{m-1} + [A(p_m) - q] b_m + down(p_{m+1}) b_{m+1} = 0`
/// (ascending; mirrored for descending), starting from `b_0 = 1`.
pub fn series_solution(
    dec: &Su11Decomposition,
    class: RepresentationClass,
    parity: Parity,
    q: f64,
    terms: usize,
) -> Result<SeriesSolution> {
    if terms < 1 {
        return Err(Error::InvalidArgument(
            "series needs at least one term beyond b0".into(),
        ));
    }
    let p0 = base_exponent(dec, class, parity)?;
    let direction = match class {
        RepresentationClass::PositiveDiscrete => Direction::Ascending,
        _ => Direction::Descending,
    };
    let act = dec.monomial_action();
    let step = direction.sign();
    let exponent = |m: isize| p0 + step * m as f64;
    // inward and outward couplings relative to the ladder direction
    let (toward, away): (Coupling, Coupling) = match direction {
        Direction::Ascending => (MonomialAction::down, MonomialAction::up),
        Direction::Descending => (MonomialAction::up, MonomialAction::down),
    };

    let mut b = Vec::with_capacity(terms + 1);
    b.push(1.0);
    for m in 0..terms as isize {
        let divisor = toward(&act, exponent(m + 1));
        if divisor == 0.0 {
            return Err(Error::RecurrenceBreakdown {
                step: m as usize + 1,
            });
        }
        let mut rhs = (act.shifted_diag(exponent(m)) - q) * b[m as usize];
        if m > 0 {
            rhs += away(&act, exponent(m - 1)) * b[m as usize - 1];
        }
        b.push(-rhs / divisor);
    }
    Ok(SeriesSolution {
        p0,
        direction,
        parity,
        q,
        terms,
        coefficients: b,
        domain: convergence_domain(dec, direction),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Geometric bound on the omitted tail from the last coefficient ratio;
    /// infinite when the ratio does not indicate convergence.
    pub tail_estimate: f64,
}

pub fn evaluate_series(sol: &SeriesSolution, z: f64) -> Result<SeriesValue> {
    if z.is_nan() || z <= 0.0 || !sol.domain.contains(z) {
        return Err(Error::OutOfDomain {
            z,
            lo: sol.domain.lo,
            hi: sol.domain.hi,
        });
    }
    let mut sum = CompensatedSum::default();
    for (p, b) in sol.monomials() {
        sum.add(b * z.powf(p));
    }
    let k = sol.coefficients.len() - 1;
    let last = sol.coefficients[k];
    let last_term = (last * z.powf(sol.exponent(k))).abs();
    let tail_estimate = if last_term == 0.0 {
        0.0
    } else {
        let prev = sol.coefficients[k - 1];
        let zstep = z.powf(sol.direction.sign());
        let ratio = if prev == 0.0 {
            f64::INFINITY
        } else {
            (last / prev).abs() * zstep
        };
        if ratio < 1.0 {
            last_term * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    };
    Ok(SeriesValue {
        value: sum.value(),
        tail_estimate,
    })
}
