//! End-to-end checks of the cutting-plane dual solver and the sparse
//! recovery pipeline on instances whose optima are known in closed form.

use approx::assert_relative_eq;
use shiftforge::freqset::rat;
use shiftforge::optimize::{self, SolverConfig};
use shiftforge::shiftrule::{self, solve_fixed_support};
use shiftforge::trigpoly::ExtremaConfig;
use shiftforge::{DerivativeTarget, Error, FrequencySet, Rational, TrigPoly};
use std::f64::consts::PI;

fn band(m: i64) -> FrequencySet {
    let pts: Vec<Vec<Rational>> = (1..=m).map(|k| vec![rat(k, 1)]).collect();
    FrequencySet::from_points(1, &pts, true).unwrap()
}

fn set1(xi_plus: &[(i64, i64)]) -> FrequencySet {
    let pts: Vec<Vec<Rational>> = xi_plus.iter().map(|&(n, d)| vec![rat(n, d)]).collect();
    FrequencySet::from_points(1, &pts, true).unwrap()
}

/// The minimum cost for ∂^α over the full band {−m, …, m} is (2πm)^α.
#[test]
fn equispaced_band_values() {
    let config = SolverConfig::default();
    for m in 1..=3i64 {
        for alpha in 1..=2u32 {
            let freqs = band(m);
            let t = DerivativeTarget::new(&freqs, &[alpha]).unwrap();
            let (rule, cert) = optimize::solve_certified(&freqs, &t, &config).unwrap();
            let expected = (2.0 * PI * m as f64).powi(alpha as i32);
            assert_relative_eq!(cert.dual.value, expected, max_relative = 1e-6);
            assert_relative_eq!(rule.cost(), expected, max_relative = 1e-6);
            assert!(cert.is_optimal(), "m={m} alpha={alpha}: {cert:?}");
            assert!(rule.support_size() <= 2 * m as usize + 1);
            assert!(cert.feasibility_residual <= 1e-7);
            // Complementary slackness: every atom sits on the correct side
            // of the witness's unit levels.
            for (a, u) in rule.atoms() {
                let fa = cert.dual.f_star.eval(a).unwrap();
                assert!(u.signum() * fa >= 1.0 - 1e-6, "atom {a:?} -> {fa}");
            }
        }
    }
}

/// Spectral gaps do not lower the cost: {1, 3} prices like the top band.
#[test]
fn gap_immunity_matches_top_frequency() {
    let freqs = set1(&[(1, 1), (3, 1)]);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let config = SolverConfig::default();
    let (rule, cert) = optimize::solve_certified(&freqs, &t, &config).unwrap();
    assert_relative_eq!(cert.dual.value, 6.0 * PI, max_relative = 1e-6);
    assert!(cert.is_optimal());

    let (sparse_rule, sparse_cert) = optimize::sparse_optimal(&freqs, &t, &config).unwrap();
    assert_relative_eq!(sparse_cert.dual.value, 6.0 * PI, max_relative = 1e-12);
    assert!(sparse_cert.is_optimal());
    assert_relative_eq!(rule.cost(), sparse_rule.cost(), max_relative = 1e-6);
}

/// Rational frequencies are handled by rescaling: {1/3, 2/3} is the m = 2
/// band stretched by 3, so the cost shrinks by the same factor.
#[test]
fn rational_set_scaling_consistency() {
    let freqs = set1(&[(1, 3), (2, 3)]);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let config = SolverConfig::default();
    let (rule, cert) = optimize::solve_certified(&freqs, &t, &config).unwrap();
    assert_relative_eq!(cert.dual.value, 4.0 * PI / 3.0, max_relative = 1e-6);
    assert!(cert.is_optimal());
    assert!(rule.residual(&freqs, &t).unwrap() <= 1e-7);

    let (sparse_rule, sparse_cert) = optimize::sparse_optimal(&freqs, &t, &config).unwrap();
    assert_relative_eq!(sparse_cert.dual.value, 4.0 * PI / 3.0, max_relative = 1e-12);
    assert!(sparse_cert.is_optimal());
    assert_relative_eq!(sparse_rule.cost(), rule.cost(), max_relative = 1e-6);
    // Shifts live on the stretched lattice: odd multiples of 3/(4·2).
    for (a, _) in sparse_rule.atoms() {
        let scaled = a[0] * 8.0 / 3.0;
        assert_relative_eq!(scaled, scaled.round(), epsilon = 1e-9);
        assert!(scaled.round().abs() as i64 % 2 == 1);
    }
}

/// Mixed partial ∂²/∂a₁∂a₂ over {−1,0,1} × {−2,0,2}: the cutting-plane
/// solver reaches the analytic optimum 8π² from a coarse grid.
#[test]
fn pointy_two_dim_cutting_planes() {
    let pts = vec![
        vec![rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(2, 1)],
        vec![rat(1, 1), rat(2, 1)],
        vec![rat(1, 1), rat(-2, 1)],
    ];
    let freqs = FrequencySet::from_points(2, &pts, true).unwrap();
    let t = DerivativeTarget::new(&freqs, &[1, 1]).unwrap();
    let config = SolverConfig::default();
    let dual = optimize::solve_dual(&freqs, &t, &config).unwrap();
    assert_relative_eq!(dual.value, 8.0 * PI * PI, max_relative = 1e-3);
    let sup = dual.f_star.sup_norm(&ExtremaConfig::default()).unwrap();
    assert!(sup <= 1.0 + 1e-5, "witness escapes the unit ball: {sup}");

    // The closed-form route must agree exactly.
    let (_, cert) = optimize::sparse_optimal(&freqs, &t, &config).unwrap();
    assert_relative_eq!(cert.dual.value, 8.0 * PI * PI, max_relative = 1e-12);
    assert!(cert.is_optimal());
}

/// The iteration trace is monotone: points only accumulate and the LP
/// relaxation value only tightens downward.
#[test]
fn trace_is_monotone() {
    let freqs = band(4);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let mut config = SolverConfig::default();
    config.initial_grid = 11;
    let dual = optimize::solve_dual(&freqs, &t, &config).unwrap();
    assert!(!dual.trace.is_empty());
    for w in dual.trace.windows(2) {
        assert!(w[1].points >= w[0].points);
        assert!(w[1].lp_value <= w[0].lp_value + 1e-9);
    }
    assert_eq!(dual.iterations, dual.trace.len());
    let last = dual.trace.last().unwrap();
    assert!(last.max_violation <= config.delta);
}

/// Fixed-support solving on the known-optimal equispaced grid reproduces
/// the unconstrained optimum; weak duality holds against the witness.
#[test]
fn fixed_support_weak_duality() {
    let m = 2i64;
    let freqs = band(m);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let support: Vec<Vec<f64>> = (-m..m)
        .map(|k| vec![(2 * k + 1) as f64 / (4 * m) as f64])
        .collect();
    let solve = solve_fixed_support(&freqs, &t, &support, 1e-9, 1e-7).unwrap();
    assert!(solve.feasible);
    let rule = solve.rule;
    assert_relative_eq!(rule.cost(), 4.0 * PI, max_relative = 1e-9);

    let f_star = optimize::analytic_dual(&freqs, &t).unwrap();
    let bound = f_star.neg_deriv_at_zero(&t).unwrap();
    assert!(rule.cost() >= bound - 1e-9);
}

/// A rule for Ξ⁺ = {1, 2} differentiates every function with that spectrum:
/// compare against central differences of the function itself.
#[test]
fn rule_differentiates_arbitrary_member() {
    let freqs = band(2);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let (rule, _) = optimize::solve_certified(&freqs, &t, &SolverConfig::default()).unwrap();
    let f = TrigPoly::new(freqs.clone(), 0.3, vec![0.25, -0.4], vec![0.15, 0.35]).unwrap();
    let h = 1e-5;
    for i in 0..7 {
        let x = -0.45 + 0.13 * i as f64;
        let fd = (f.eval(&[x + h]).unwrap() - f.eval(&[x - h]).unwrap()) / (2.0 * h);
        let via_rule = rule.apply(&f, &[x]).unwrap();
        assert_relative_eq!(via_rule, fd, epsilon = 1e-5, max_relative = 1e-5);
    }
}

/// Classic two-point rule: built-in constructor, solver, and sparse path
/// all land on πδ_{−1/4} − πδ_{1/4}.
#[test]
fn classic_rule_three_ways() {
    let classic = shiftrule::classic_two_point();
    let freqs = band(1);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    assert!(classic.residual(&freqs, &t).unwrap() <= 1e-12);

    let config = SolverConfig::default();
    let (solved, _) = optimize::solve_certified(&freqs, &t, &config).unwrap();
    let (sparse, _) = optimize::sparse_optimal(&freqs, &t, &config).unwrap();
    for other in [&solved, &sparse] {
        assert_eq!(other.support_size(), 2);
        for ((a, u), (b, v)) in classic.atoms().iter().zip(other.atoms()) {
            assert_relative_eq!(a[0], b[0], epsilon = 1e-9);
            assert_relative_eq!(*u, *v, max_relative = 1e-7);
        }
    }
}

/// Dimensions above three have no closed-form touching grids; the sparse
/// path refuses rather than guessing.
#[test]
fn sparse_rejects_high_dimensions() {
    let pts = vec![vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]];
    let freqs = FrequencySet::from_points(4, &pts, true).unwrap();
    let t = DerivativeTarget::new(&freqs, &[1, 1, 1, 1]).unwrap();
    let err = optimize::sparse_optimal(&freqs, &t, &SolverConfig::default()).unwrap_err();
    assert!(matches!(err, Error::UnsupportedDimension { dim: 4 }));
}
