//! Spectra and series checked against the original equation.

use proptest::prelude::*;

use heun_su11::algebra::decompose;
use heun_su11::eigen::hessenberg_eigenvalues;
use heun_su11::heun::HeunParameters;
use heun_su11::poly::HalfGridPoly;
use heun_su11::representations::{classify, Parity, RepresentationClass};
use heun_su11::series::{series_solution, SeriesSolution};
use heun_su11::spectrum::{build_matrix, eigen_oracle, matrix_eigenvalues, solve_spectrum};
use heun_su11::verifier::{default_samples, derivative_crosscheck, ode_residual, DerivativeCheck};
use heun_su11::Error;

use RepresentationClass::{NegativeDiscrete as Nd, PositiveDiscrete as Pd};

fn finite_rep(
    dec: &heun_su11::Su11Decomposition,
) -> heun_su11::representations::RepresentationDescriptor {
    classify(dec)
        .into_iter()
        .find(|r| matches!(r.class, RepresentationClass::FiniteDimensional { .. }))
        .unwrap()
}

/// Factorizable parameters with an `n`-dimensional representation.
fn with_dimension(n: usize, a: f64, delta: f64) -> HeunParameters {
    let twice_gap = n - 1;
    let nu = 0.5 * (twice_gap % 2) as f64;
    let mu = nu - 0.5 * twice_gap as f64;
    HeunParameters::new(2.0 * nu + 0.5, delta, mu, mu + 0.5, a, 0.0, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenfunctions_solve_the_equation(n in 1usize..=12, a in 0.2..6.0f64, delta in -1.0..1.0f64) {
        prop_assume!((a - 1.0).abs() > 0.05);
        let params = with_dimension(n, a, delta);
        let dec = decompose(&params).unwrap();
        let result = solve_spectrum(&dec, &finite_rep(&dec)).unwrap();
        prop_assert_eq!(result.pairs.len(), n);
        prop_assert!(!result.has_complex());
        let samples = default_samples(0.0, a.min(1.0), a);
        for pair in &result.pairs {
            let r = ode_residual(&params.with_q(pair.q), &pair.eigenfunction, &samples).unwrap();
            prop_assert!(r.max_relative_residual <= 1e-8, "n={} q={} r={}", n, pair.q, r.max_relative_residual);
            // normalization: max |b| = 1, first nonzero positive
            let c = &pair.eigenfunction.coefficients;
            let max = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            prop_assert!((max - 1.0).abs() < 1e-14);
            prop_assert!(c.iter().find(|v| v.abs() > 1e-12).unwrap() > &0.0);
        }
    }

    #[test]
    fn solver_agrees_with_oracle(n in 1usize..=15, a in 0.2..6.0f64, delta in -1.0..1.0f64) {
        prop_assume!((a - 1.0).abs() > 0.05);
        let dec = decompose(&with_dimension(n, a, delta)).unwrap();
        let ps = finite_rep(&dec).finite_exponents().unwrap().to_vec();
        for grid in [
            ps.iter().copied().step_by(2).collect::<Vec<_>>(),
            ps.iter().copied().skip(1).step_by(2).collect(),
        ] {
            if grid.is_empty() {
                continue;
            }
            let m = build_matrix(&dec, &grid).unwrap();
            let oracle = eigen_oracle(&m).unwrap();
            let mut solved: Vec<f64> = matrix_eigenvalues(&m).unwrap().iter().map(|c| c.re).collect();
            solved.sort_by(f64::total_cmp);
            // the general QR path must agree as well
            let mut qr: Vec<f64> = hessenberg_eigenvalues(m.to_dense()).unwrap().iter().map(|c| c.re).collect();
            qr.sort_by(f64::total_cmp);
            for ((x, y), z) in oracle.iter().zip(&solved).zip(&qr) {
                let scale = y.abs().max(1.0);
                prop_assert!((x - y).abs() <= 1e-10 * scale);
                prop_assert!((z - y).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn negative_a_spectra_are_consistent(n in 2usize..=12, a in -6.0..-0.2f64, delta in -1.0..1.0f64) {
        let dec = decompose(&with_dimension(n, a, delta)).unwrap();
        let result = solve_spectrum(&dec, &finite_rep(&dec)).unwrap();
        prop_assert_eq!(result.pairs.len(), n);
        for pair in &result.pairs {
            prop_assert!(pair.residual <= 1e-8, "residual {}", pair.residual);
        }
        // trace of each block equals the sum of its eigenvalues
        for parity in [Parity::Even, Parity::Odd] {
            let pairs: Vec<_> = result.pairs.iter().filter(|p| p.parity == parity).collect();
            if pairs.is_empty() {
                continue;
            }
            let grid: Vec<f64> = (0..pairs[0].eigenfunction.coefficients.len())
                .map(|m| pairs[0].eigenfunction.exponent(m))
                .collect();
            let m = build_matrix(&dec, &grid).unwrap();
            let trace: f64 = m.diag.iter().sum();
            let sum: f64 = pairs.iter().map(|p| p.q).sum();
            let imag: f64 = pairs.iter().map(|p| p.q_imag).sum();
            prop_assert!((trace - sum).abs() <= 1e-9 * trace.abs().max(1.0));
            prop_assert!(imag.abs() <= 1e-9);
        }
    }

    #[test]
    fn recurrence_holds_on_every_row(
        a in prop_oneof![-4.0..-0.2f64, 0.2..0.9f64, 1.1..5.0f64],
        q in -3.0..3.0f64,
        n in 1usize..=6,
        descending in any::<bool>(),
        odd in any::<bool>(),
    ) {
        let dec = decompose(&with_dimension(n, a, 0.3).with_q(q)).unwrap();
        let class = if descending { Nd } else { Pd };
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let s = series_solution(&dec, class, parity, q, 40).unwrap();
        let act = dec.monomial_action();
        let b = &s.coefficients;
        prop_assert_eq!(b[0], 1.0);
        for m in 0..s.terms {
            let p = s.exponent(m);
            let (toward, away) = if descending {
                (act.up(s.exponent(m + 1)), if m > 0 { act.down(s.exponent(m - 1)) } else { 0.0 })
            } else {
                (act.down(s.exponent(m + 1)), if m > 0 { act.up(s.exponent(m - 1)) } else { 0.0 })
            };
            let prev = if m > 0 { b[m - 1] } else { 0.0 };
            let terms = [away * prev, (act.shifted_diag(p) - q) * b[m], toward * b[m + 1]];
            let scale = terms.iter().fold(0.0_f64, |x, t| x.max(t.abs()));
            let row: f64 = terms.iter().sum();
            prop_assert!(row.abs() <= 1e-13 * scale.max(f64::MIN_POSITIVE), "row {} = {}", m, row);
        }
    }

    #[test]
    fn positive_discrete_boundary_matches_gamma(gamma in -1.0..3.0f64, a in 1.5..5.0f64) {
        // the polynomial-form lowering coefficient at p0 = -ν vanishes for
        // ν ∈ {0, 1/2} exactly when γ ∈ {1/2, 3/2}
        let p = HeunParameters::new(gamma, 0.2, -1.0, -0.5, a, 0.0, None).unwrap();
        let c = p.canonical_coefficients();
        let lowering = |p0: f64| c.a2 * p0 * (p0 - 1.0) + c.a5 * p0;
        let vanishes_somewhere = [0.0, -0.5].iter().any(|&p0| p0 != 0.0 && lowering(p0).abs() < 1e-12);
        prop_assert_eq!(vanishes_somewhere, (gamma - 1.5).abs() < 1e-12);
        // ν = 0 corresponds to p0 = 0, where the coefficient always vanishes;
        // the matching condition there is the a5 relation, γ = 1/2
        prop_assert_eq!(lowering(0.0), 0.0);
    }
}

fn lame_series(
    a: f64,
    q: f64,
    class: RepresentationClass,
    parity: Parity,
    k: usize,
) -> SeriesSolution {
    let dec = decompose(&HeunParameters::lame(0.0, a, q).unwrap()).unwrap();
    series_solution(&dec, class, parity, q, k).unwrap()
}

#[test]
fn lame_negative_discrete_mirrors_positive_discrete() {
    // b_m(ND) = a^m b_m(PD) for ρ(ρ+1) = 0
    for (a, q) in [(2.0, 1.0), (0.5, -0.3), (3.7, 2.2)] {
        for parity in [Parity::Even, Parity::Odd] {
            let pd = lame_series(a, q, Pd, parity, 5);
            let nd = lame_series(a, q, Nd, parity, 5);
            for m in 0..=5 {
                let expected = pd.coefficients[m] * a.powi(m as i32);
                let err = (nd.coefficients[m] - expected).abs();
                assert!(err <= 1e-13 * expected.abs().max(1.0), "m={m} a={a} q={q}");
            }
        }
    }
}

#[test]
fn example1_even_spectrum_is_symmetric() {
    for a in [0.25, 0.7, 2.0, 4.0, 9.0] {
        let dec = decompose(&HeunParameters::example1(a, 0.0).unwrap()).unwrap();
        let r = solve_spectrum(&dec, &finite_rep(&dec)).unwrap();
        let even = r.eigenvalues(Parity::Even);
        assert!((even[0] + even[1]).abs() <= 1e-12);
    }
}

#[test]
fn parity_subspaces_are_separate() {
    let dec = decompose(&with_dimension(7, 2.5, 0.1)).unwrap();
    let r = solve_spectrum(&dec, &finite_rep(&dec)).unwrap();
    let base = -dec.nu;
    for pair in &r.pairs {
        let f = &pair.eigenfunction;
        let offset = f.p0 - base;
        let expected = match pair.parity {
            Parity::Even => 0.0,
            Parity::Odd => 0.5,
        };
        assert_eq!(offset, expected);
        // every exponent of the eigenfunction lies on its own sub-grid
        for m in 0..f.coefficients.len() {
            let k = f.exponent(m) - base - expected;
            assert_eq!(k.fract(), 0.0);
        }
    }
}

#[test]
fn grid_too_large_for_solver() {
    let dec = decompose(&with_dimension(131, 2.0, 0.0)).unwrap();
    assert!(matches!(
        solve_spectrum(&dec, &finite_rep(&dec)),
        Err(Error::GridTooLarge { size: 66, cap: 64 })
    ));
}

#[test]
fn series_residual_does_not_grow_when_k_doubles_at_half_radius() {
    for (a, q) in [(2.0, 1.0), (0.5, -0.3), (3.0, -1.5)] {
        let params = HeunParameters::lame(0.0, a, q).unwrap();
        for class in [Pd, Nd] {
            for parity in [Parity::Even, Parity::Odd] {
                let s60 = lame_series(a, q, class, parity, 60);
                let s120 = lame_series(a, q, class, parity, 120);
                let (lo, hi) = s60.sampling_window();
                let z = if lo == 0.0 { hi } else { lo };
                let r60 = ode_residual(&params, &s60, &[z])
                    .unwrap()
                    .max_relative_residual;
                let r120 = ode_residual(&params, &s120, &[z])
                    .unwrap()
                    .max_relative_residual;
                assert!(r60 <= 1e-8);
                assert!(
                    r120 <= 2.0 * r60.max(f64::EPSILON),
                    "r60={r60:e} r120={r120:e}"
                );
            }
        }
    }
}

#[test]
fn truncation_residual_shrinks_near_the_boundary() {
    // close to the radius of convergence truncation dominates rounding
    for (a, q) in [(2.0, 1.0), (0.5, -0.3)] {
        let params = HeunParameters::lame(0.0, a, q).unwrap();
        for class in [Pd, Nd] {
            for parity in [Parity::Even, Parity::Odd] {
                let s60 = lame_series(a, q, class, parity, 60);
                let s120 = lame_series(a, q, class, parity, 120);
                let z = match class {
                    Pd => 0.9 * s60.domain.hi,
                    _ => s60.domain.lo / 0.9,
                };
                let r60 = ode_residual(&params, &s60, &[z])
                    .unwrap()
                    .max_relative_residual;
                let r120 = ode_residual(&params, &s120, &[z])
                    .unwrap()
                    .max_relative_residual;
                assert!(
                    r60 >= 10.0 * r120,
                    "{class} {parity:?}: r60={r60:e} r120={r120:e}"
                );
            }
        }
    }
}

#[test]
fn empirical_ratio_test_matches_domain() {
    // |b_{m}/b_{m+1}| approaches the radius min(1,|a|) (in z) or
    // 1/max(1,|a|) (in 1/z)
    for (a, q) in [(2.0, 1.0), (0.5, -0.3), (-3.0, 0.4)] {
        let dec = decompose(&HeunParameters::lame(0.0, a, q).unwrap()).unwrap();
        for class in [Pd, Nd] {
            let s = series_solution(&dec, class, Parity::Even, q, 400).unwrap();
            let b = &s.coefficients;
            let radius = (b[399] / b[400]).abs();
            let expected = match class {
                Pd => f64::min(1.0, a.abs()),
                _ => 1.0 / f64::max(1.0, a.abs()),
            };
            assert!(
                (radius - expected).abs() < 0.02 * expected,
                "{class}: {radius} vs {expected}"
            );
        }
    }
}

#[test]
fn series_derivative_converges_at_second_order() {
    let s = lame_series(2.0, 1.0, Pd, Parity::Even, 60);
    let steps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let check = derivative_crosscheck(&s, 0.3, &steps);
    for devs in [&check.first, &check.second] {
        let order = DerivativeCheck::convergence_order(devs, &steps);
        assert!((order - 2.0).abs() <= 0.2, "order {order}");
    }
    let fine = derivative_crosscheck(&s, 0.3, &[1e-4]);
    assert!(fine.max_deviation() <= 1e-7);
}

#[test]
fn linear_eigenfunction_has_vanishing_second_difference() {
    let a: f64 = 4.0;
    let y = HalfGridPoly::from_coefficients(0.0, &[a.sqrt(), 0.0, 1.0]);
    for z in [0.1, 0.35, 0.8] {
        let check = derivative_crosscheck(&y, z, &[0.1, 0.01]);
        assert!(check.second.iter().all(|&d| d <= 1e-8));
    }
}
