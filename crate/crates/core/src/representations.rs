//! Representation spaces of su(1,1) available for a decomposition.
//!
//! Basis vectors are unnormalized monomials `z^p` with `h = 2p + μ + ν`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::Su11Decomposition;
use crate::error::{Error, Result};

/// Integrality tolerance on `2(ν - μ)`.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationClass {
    PrincipalSeries,
    ComplementarySeries,
    PositiveDiscrete,
    NegativeDiscrete,
    FiniteDimensional { n: usize },
}

impl RepresentationClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PrincipalSeries => "principal_series",
            Self::ComplementarySeries => "complementary_series",
            Self::PositiveDiscrete => "positive_discrete",
            Self::NegativeDiscrete => "negative_discrete",
            Self::FiniteDimensional { .. } => "finite_dimensional",
        }
    }
}

impl fmt::Display for RepresentationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Powers `z^{p0}, z^{p0+1/2}, ...`
    Ascending,
    /// Powers `z^{p0}, z^{p0-1/2}, ...`
    Descending,
}

impl Direction {
    pub fn sign(&self) -> f64 {
        match self {
            Self::Ascending => 1.0,
            Self::Descending => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// Admissible exponents `p` of a representation space.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentGrid {
    Finite(Vec<f64>),
    /// Infinite ladder `base, base ± step, base ± 2 step, ...`.
    Ladder {
        base: f64,
        step: f64,
        direction: Direction,
    },
    /// Every real `p`, except the exponent mapping to `excluded_h`.
    Continuous {
        excluded_h: Option<f64>,
    },
}

impl ExponentGrid {
    /// The first `count` exponents (all of them for a finite grid).
    pub fn take(&self, count: usize) -> Vec<f64> {
        match self {
            Self::Finite(ps) => ps.iter().copied().take(count).collect(),
            Self::Ladder {
                base,
                step,
                direction,
            } => (0..count)
                .map(|m| base + direction.sign() * step * m as f64)
                .collect(),
            Self::Continuous { .. } => Vec::new(),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Self::Finite(ps) => Some(ps.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationDescriptor {
    pub class: RepresentationClass,
    pub casimir: f64,
    pub grid: ExponentGrid,
    /// Whether this crate builds solutions in the space (false for PS/CS).
    pub constructible: bool,
}

impl RepresentationDescriptor {
    pub fn finite_exponents(&self) -> Option<&[f64]> {
        match &self.grid {
            ExponentGrid::Finite(ps) => Some(ps),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct DescriptorDoc<'a> {
    class: &'static str,
    casimir: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_grid: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_base: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    excluded_h: Option<f64>,
    constructible: bool,
}

impl Serialize for RepresentationDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut doc = DescriptorDoc {
            class: self.class.name(),
            casimir: self.casimir,
            n: None,
            p_grid: None,
            p_base: None,
            direction: None,
            excluded_h: None,
            constructible: self.constructible,
        };
        if let RepresentationClass::FiniteDimensional { n } = self.class {
            doc.n = Some(n);
        }
        match &self.grid {
            ExponentGrid::Finite(ps) => doc.p_grid = Some(ps),
            ExponentGrid::Ladder {
                base, direction, ..
            } => {
                doc.p_base = Some(*base);
                doc.direction = Some(*direction);
            }
            ExponentGrid::Continuous { excluded_h } => doc.excluded_h = *excluded_h,
        }
        doc.serialize(serializer)
    }
}

/// Dimension `n = 2(ν - μ) + 1` when `2(ν - μ)` is a nonnegative integer.
pub fn finite_dimension(mu: f64, nu: f64) -> Option<usize> {
    let twice = 2.0 * (nu - mu);
    let rounded = twice.round();
    if rounded >= 0.0 && (twice - rounded).abs() <= INTEGRALITY_TOLERANCE {
        Some(rounded as usize + 1)
    } else {
        None
    }
}

/// Every representation class admissible for the decomposition's Casimir.
///
/// Discrete ladders start at the exponent annihilated by the lowering
/// (`p = -ν`, positive discrete) or raising (`p = -μ`, negative discrete)
/// operator.
pub fn classify(dec: &Su11Decomposition) -> Vec<RepresentationDescriptor> {
    let c = dec.casimir;
    let tol = INTEGRALITY_TOLERANCE;
    let mut reps = Vec::new();
    if let Some(n) = finite_dimension(dec.mu, dec.nu) {
        let grid = (0..n).map(|k| -dec.nu + 0.5 * k as f64).collect();
        reps.push(RepresentationDescriptor {
            class: RepresentationClass::FiniteDimensional { n },
            casimir: c,
            grid: ExponentGrid::Finite(grid),
            constructible: true,
        });
    }
    if c <= 0.25 + tol {
        reps.push(RepresentationDescriptor {
            class: RepresentationClass::PositiveDiscrete,
            casimir: c,
            grid: ExponentGrid::Ladder {
                base: -dec.nu,
                step: 0.5,
                direction: Direction::Ascending,
            },
            constructible: true,
        });
        reps.push(RepresentationDescriptor {
            class: RepresentationClass::NegativeDiscrete,
            casimir: c,
            grid: ExponentGrid::Ladder {
                base: -dec.mu,
                step: 0.5,
                direction: Direction::Descending,
            },
            constructible: true,
        });
    }
    if c >= 0.25 - tol {
        let excluded_h = ((c - 0.25).abs() <= tol).then_some(0.5);
        reps.push(RepresentationDescriptor {
            class: RepresentationClass::PrincipalSeries,
            casimir: c,
            grid: ExponentGrid::Continuous { excluded_h },
            constructible: false,
        });
    }
    if c > tol && c < 0.25 - tol {
        reps.push(RepresentationDescriptor {
            class: RepresentationClass::ComplementarySeries,
            casimir: c,
            grid: ExponentGrid::Continuous {
                excluded_h: Some(0.5),
            },
            constructible: false,
        });
    }
    reps
}

/// Even and odd sub-grids of a representation space; the quadratic operator
/// maps each into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSplit {
    pub even: ExponentGrid,
    pub odd: ExponentGrid,
}

impl SubspaceSplit {
    pub fn get(&self, parity: Parity) -> &ExponentGrid {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

/// Splits a finite or discrete grid into the sub-ladder containing its base
/// exponent (even) and the one offset by 1/2 (odd).
pub fn split_even_odd(rep: &RepresentationDescriptor) -> Result<SubspaceSplit> {
    match &rep.grid {
        ExponentGrid::Finite(ps) => {
            let even = ps.iter().copied().step_by(2).collect();
            let odd = ps.iter().copied().skip(1).step_by(2).collect();
            Ok(SubspaceSplit {
                even: ExponentGrid::Finite(even),
                odd: ExponentGrid::Finite(odd),
            })
        }
        ExponentGrid::Ladder {
            base,
            step,
            direction,
        } => {
            let ladder = |base| ExponentGrid::Ladder {
                base,
                step: 2.0 * step,
                direction: *direction,
            };
            Ok(SubspaceSplit {
                even: ladder(*base),
                odd: ladder(base + direction.sign() * step),
            })
        }
        ExponentGrid::Continuous { .. } => Err(Error::UnsupportedClass(rep.class.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::decompose;
    use crate::heun::HeunParameters;

    fn classes(reps: &[RepresentationDescriptor]) -> Vec<RepresentationClass> {
        reps.iter().map(|r| r.class).collect()
    }

    #[test]
    fn example1_triplet() {
        let dec = decompose(&HeunParameters::example1(2.0, 0.0).unwrap()).unwrap();
        let reps = classify(&dec);
        assert_eq!(
            classes(&reps),
            [
                RepresentationClass::FiniteDimensional { n: 3 },
                RepresentationClass::PositiveDiscrete,
                RepresentationClass::NegativeDiscrete
            ]
        );
        assert_eq!(reps[0].finite_exponents().unwrap(), [0.0, 0.5, 1.0]);
        let split = split_even_odd(&reps[0]).unwrap();
        assert_eq!(split.even, ExponentGrid::Finite(vec![0.0, 1.0]));
        assert_eq!(split.odd, ExponentGrid::Finite(vec![0.5]));
    }

    #[test]
    fn example2_triplet() {
        let dec = decompose(&HeunParameters::example2(2.0, 0.0).unwrap()).unwrap();
        let reps = classify(&dec);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0].finite_exponents().unwrap(), [-0.5, 0.0, 0.5]);
        let split = split_even_odd(&reps[0]).unwrap();
        assert_eq!(split.even, ExponentGrid::Finite(vec![-0.5, 0.5]));
        assert_eq!(split.odd, ExponentGrid::Finite(vec![0.0]));
    }

    #[test]
    fn lame_singlet_and_ladders() {
        let dec = decompose(&HeunParameters::lame(0.0, 2.0, 1.0).unwrap()).unwrap();
        let reps = classify(&dec);
        assert_eq!(
            classes(&reps),
            [
                RepresentationClass::FiniteDimensional { n: 1 },
                RepresentationClass::PositiveDiscrete,
                RepresentationClass::NegativeDiscrete
            ]
        );
        let pd = split_even_odd(&reps[1]).unwrap();
        assert_eq!(pd.even.take(3), [0.0, 1.0, 2.0]);
        assert_eq!(pd.odd.take(3), [0.5, 1.5, 2.5]);
        let nd = split_even_odd(&reps[2]).unwrap();
        assert_eq!(nd.even.take(3), [0.0, -1.0, -2.0]);
        assert_eq!(nd.odd.take(2), [-0.5, -1.5]);
        let singlet = split_even_odd(&reps[0]).unwrap();
        assert!(singlet.odd.is_empty());
    }

    #[test]
    fn complementary_and_principal_series_flagged() {
        // μ - ν = 1/2 gives C = 1/4.
        let mut dec = decompose(&HeunParameters::lame(0.0, 2.0, 0.0).unwrap()).unwrap();
        dec.mu = 0.5;
        dec.casimir = dec.generators().casimir();
        let reps = classify(&dec);
        let ps = reps
            .iter()
            .find(|r| r.class == RepresentationClass::PrincipalSeries)
            .unwrap();
        assert!(!ps.constructible);
        assert!(matches!(
            split_even_odd(ps),
            Err(Error::UnsupportedClass(_))
        ));

        dec.mu = 0.25;
        dec.casimir = dec.generators().casimir();
        let reps = classify(&dec);
        assert!(reps
            .iter()
            .any(|r| r.class == RepresentationClass::ComplementarySeries && !r.constructible));
        assert!(reps
            .iter()
            .all(|r| r.class != RepresentationClass::PrincipalSeries));
    }

    #[test]
    fn finite_dimension_tolerance() {
        assert_eq!(finite_dimension(-1.0, 0.0), Some(3));
        assert_eq!(finite_dimension(-1.0 + 1e-12, 0.0), Some(3));
        assert_eq!(finite_dimension(0.5, 0.0), None);
        assert_eq!(finite_dimension(-0.3, 0.0), None);
    }
}
