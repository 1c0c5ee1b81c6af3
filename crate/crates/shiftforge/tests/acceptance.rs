//! Acceptance suite: ten numbered criteria, one printed PASS/FAIL line
//! each (run with `--nocapture` to see all lines).  Certificates produced
//! for criteria 1–5 are banked and re-checked for complementary slackness
//! in criterion 6, so the heavy solves run exactly once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftforge::freqset::rat;
use shiftforge::optimize::{self, Certificate, SolverConfig};
use shiftforge::pqcsim::{self, CircuitSpec, HermitianOp, Layer};
use shiftforge::shiftrule::ShiftRule;
use shiftforge::trigpoly::ExtremaConfig;
use shiftforge::{DerivativeTarget, FrequencySet, Rational, ScalingMap, TrigPoly};
use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn band(m: i64) -> FrequencySet {
    let pts: Vec<Vec<Rational>> = (1..=m).map(|k| vec![rat(k, 1)]).collect();
    FrequencySet::from_points(1, &pts, true).unwrap()
}

fn set1(xi_plus: &[i64]) -> FrequencySet {
    let pts: Vec<Vec<Rational>> = xi_plus.iter().map(|&k| vec![rat(k, 1)]).collect();
    FrequencySet::from_points(1, &pts, true).unwrap()
}

/// Certificates produced once and shared between criteria.
struct Bank {
    /// (label, rule, certificate) triples from criteria 1–5.
    certs: Vec<(String, ShiftRule, Certificate)>,
    classic_time: Duration,
    equispaced_time: Duration,
    pointy2d_time: Duration,
}

static BANK: OnceLock<Bank> = OnceLock::new();

fn bank() -> &'static Bank {
    BANK.get_or_init(|| {
        let config = SolverConfig::default();
        let mut certs = Vec::new();

        // Criterion 1: closed-form classic rule.
        let start = Instant::now();
        let freqs = band(1);
        let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
        let (rule, cert) = optimize::sparse_optimal(&freqs, &t, &config).unwrap();
        let classic_time = start.elapsed();
        certs.push(("classic".to_string(), rule, cert));

        // Criterion 2: equispaced family via the cutting-plane pipeline.
        let start = Instant::now();
        for m in 1..=5i64 {
            for alpha in 1..=4u32 {
                let freqs = band(m);
                let t = DerivativeTarget::new(&freqs, &[alpha]).unwrap();
                let (rule, cert) = optimize::solve_certified(&freqs, &t, &config)
                    .unwrap_or_else(|e| panic!("equispaced m={m} alpha={alpha}: {e}"));
                certs.push((format!("equispaced m={m} alpha={alpha}"), rule, cert));
            }
        }
        let equispaced_time = start.elapsed();

        // Criterion 3: gapped spectra.
        for xi in [&[1i64, 3][..], &[1, 3, 7][..]] {
            let freqs = set1(xi);
            let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
            let (rule, cert) = optimize::solve_certified(&freqs, &t, &config)
                .unwrap_or_else(|e| panic!("gapped {xi:?}: {e}"));
            certs.push((format!("gapped {xi:?}"), rule, cert));
        }

        // Criterion 5: pointy two-dimensional instance.
        let start = Instant::now();
        let pts = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1)],
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(-2, 1)],
        ];
        let freqs = FrequencySet::from_points(2, &pts, true).unwrap();
        let t = DerivativeTarget::new(&freqs, &[1, 1]).unwrap();
        let (rule, cert) = optimize::solve_certified(&freqs, &t, &config).unwrap();
        let pointy2d_time = start.elapsed();
        certs.push(("pointy-2d".to_string(), rule, cert));

        Bank { certs, classic_time, equispaced_time, pointy2d_time }
    })
}

fn report(number: u32, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {number:02} {name}: PASS");
    } else {
        println!("ACCEPTANCE {number:02} {name}: FAIL");
        for f in failures {
            println!("  - {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {number} failed: {failures:?}");
}

#[test]
fn criterion_01_classic_rule_recovery() {
    let b = bank();
    let (_, rule, cert) = &b.certs[0];
    let mut failures = Vec::new();
    if rule.support_size() != 2 {
        failures.push(format!("support {} != 2", rule.support_size()));
    }
    let atoms = rule.atoms();
    for (atom, (want_a, want_u)) in atoms.iter().zip([(-0.25, PI), (0.25, -PI)]) {
        if (atom.0[0] - want_a).abs() > 1e-9 {
            failures.push(format!("atom at {} (want {want_a})", atom.0[0]));
        }
        if (atom.1 - want_u).abs() > 1e-9 {
            failures.push(format!("coefficient {} (want {want_u})", atom.1));
        }
    }
    if (rule.cost() - 2.0 * PI).abs() > 1e-9 {
        failures.push(format!("cost {} (want 2π)", rule.cost()));
    }
    if !cert.is_optimal() {
        failures.push("certificate not optimal".into());
    }
    if b.classic_time > Duration::from_secs(1) {
        failures.push(format!("runtime {:?} over 1s", b.classic_time));
    }
    report(1, "classic rule recovery", &failures);
}

#[test]
fn criterion_02_equispaced_family() {
    let b = bank();
    let mut failures = Vec::new();
    for (label, rule, cert) in &b.certs {
        let Some(rest) = label.strip_prefix("equispaced m=") else { continue };
        let mut it = rest.split(" alpha=");
        let m: f64 = it.next().unwrap().parse().unwrap();
        let alpha: i32 = it.next().unwrap().parse().unwrap();
        let expected = (2.0 * PI * m).powi(alpha);
        if (cert.dual.value - expected).abs() > 1e-4 * expected {
            failures.push(format!("{label}: value {} (want {expected})", cert.dual.value));
        }
        if cert.feasibility_residual > 1e-6 {
            failures.push(format!("{label}: residual {}", cert.feasibility_residual));
        }
        if cert.gap.abs() > 1e-5 * (1.0 + expected) {
            failures.push(format!("{label}: gap {}", cert.gap));
        }
        let bound = 2 * m as usize + 1;
        if rule.support_size() > bound {
            failures.push(format!("{label}: support {} > {bound}", rule.support_size()));
        }
        if !cert.is_optimal() {
            failures.push(format!("{label}: certificate not optimal"));
        }
    }
    if b.equispaced_time > Duration::from_secs(30) {
        failures.push(format!("runtime {:?} over 30s", b.equispaced_time));
    }
    report(2, "equispaced family", &failures);
}

#[test]
fn criterion_03_gap_immunity() {
    let b = bank();
    let mut failures = Vec::new();
    for (xi, expected) in [("[1, 3]", 6.0 * PI), ("[1, 3, 7]", 14.0 * PI)] {
        let label = format!("gapped {xi}");
        let Some((_, _, cert)) = b.certs.iter().find(|(l, _, _)| *l == label) else {
            failures.push(format!("{label}: missing"));
            continue;
        };
        if (cert.dual.value - expected).abs() > 1e-4 * expected {
            failures.push(format!("{label}: value {} (want {expected})", cert.dual.value));
        }
        if !cert.is_optimal() {
            failures.push(format!("{label}: certificate not optimal"));
        }
    }
    report(3, "gap immunity", &failures);
}

#[test]
fn criterion_04_sparse_support_bound() {
    let config = SolverConfig::default();
    let mut failures = Vec::new();
    for m in 1..=5i64 {
        for alpha in 1..=4u32 {
            let freqs = band(m);
            let t = DerivativeTarget::new(&freqs, &[alpha]).unwrap();
            let (rule, cert) = match optimize::sparse_optimal(&freqs, &t, &config) {
                Ok(pair) => pair,
                Err(e) => {
                    failures.push(format!("m={m} alpha={alpha}: {e}"));
                    continue;
                }
            };
            let bound = freqs.len() - (alpha % 2) as usize;
            if rule.support_size() > bound {
                failures.push(format!(
                    "m={m} alpha={alpha}: support {} > {bound}",
                    rule.support_size()
                ));
            }
            if !cert.is_optimal() {
                failures.push(format!("m={m} alpha={alpha}: not optimal"));
            }
        }
    }
    report(4, "d=1 sparse support bound", &failures);
}

#[test]
fn criterion_05_pointy_two_dimensional() {
    let b = bank();
    let mut failures = Vec::new();

    let pts = vec![
        vec![rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(2, 1)],
        vec![rat(1, 1), rat(2, 1)],
        vec![rat(1, 1), rat(-2, 1)],
    ];
    let freqs = FrequencySet::from_points(2, &pts, true).unwrap();
    let t = DerivativeTarget::new(&freqs, &[1, 1]).unwrap();
    let f0 = optimize::analytic_dual(&freqs, &t).unwrap();
    let analytic = f0.neg_deriv_at_zero(&t).unwrap();
    let expected = 8.0 * PI * PI;
    if (analytic - expected).abs() > 1e-10 * expected {
        failures.push(format!("analytic value {analytic} (want {expected})"));
    }

    let (_, _, cert) = b.certs.iter().find(|(l, _, _)| l == "pointy-2d").unwrap();
    if (cert.dual.value - expected).abs() > 1e-3 * expected {
        failures.push(format!("dual-opt value {} (want {expected})", cert.dual.value));
    }
    if !cert.is_optimal() {
        failures.push("certificate not optimal".into());
    }
    if b.pointy2d_time > Duration::from_secs(60) {
        failures.push(format!("runtime {:?} over 60s", b.pointy2d_time));
    }
    report(5, "pointy d=2", &failures);
}

#[test]
fn criterion_06_complementary_slackness() {
    let b = bank();
    let mut failures = Vec::new();
    for (label, rule, cert) in &b.certs {
        if !cert.is_optimal() {
            failures.push(format!("{label}: certificate not optimal"));
            continue;
        }
        for (a, u) in rule.atoms() {
            let fa = cert.dual.f_star.eval(a).unwrap();
            if u.signum() * fa < 1.0 - 1e-6 {
                failures.push(format!("{label}: atom {a:?} has sign(u)·f* = {}", u.signum() * fa));
            }
        }
    }
    report(6, "complementary slackness", &failures);
}

#[test]
fn criterion_07_weak_duality_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = SolverConfig::default();
    let extrema = ExtremaConfig::default();
    let mut failures = Vec::new();
    for case in 0..50 {
        let size = rng.gen_range(1..=4usize);
        let mut xi: Vec<i64> = Vec::new();
        while xi.len() < size {
            let k = rng.gen_range(1..=8i64);
            if !xi.contains(&k) {
                xi.push(k);
            }
        }
        let alpha = rng.gen_range(1..=3u32);
        let freqs = set1(&xi);
        let t = DerivativeTarget::new(&freqs, &[alpha]).unwrap();

        // A feasible rule (the certified optimum qualifies).
        let (rule, _) = match optimize::solve_certified(&freqs, &t, &config) {
            Ok(pair) => pair,
            Err(e) => {
                failures.push(format!("case {case} {xi:?} alpha={alpha}: solve failed: {e}"));
                continue;
            }
        };

        // A random dual-feasible f: random coefficients scaled onto ‖f‖∞ = 1.
        let n = freqs.xi_plus().len();
        let cos: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sin: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c0 = rng.gen_range(-0.2..0.2);
        let f = TrigPoly::new(freqs.clone(), c0, cos, sin).unwrap();
        let sup = f.sup_norm(&extrema).unwrap();
        let n_xi = freqs.xi_plus().len();
        let f = TrigPoly::new(
            freqs.clone(),
            c0 / sup,
            (0..n_xi).map(|i| f.cos_coeffs()[i] / sup).collect(),
            (0..n_xi).map(|i| f.sin_coeffs()[i] / sup).collect(),
        )
        .unwrap();

        let objective = f.neg_deriv_at_zero(&t).unwrap();
        if objective > rule.cost() + 1e-6 {
            failures.push(format!(
                "case {case} {xi:?} alpha={alpha}: objective {objective} > cost {}",
                rule.cost()
            ));
        }
    }
    report(7, "weak duality on random instances", &failures);
}

#[test]
fn criterion_08_simulator_cross_check() {
    let mut failures = Vec::new();

    // H = diag(0, 1), ρ = |+⟩⟨+|, μ = X: f(x) = cos(2πx).
    let h = HermitianOp::diagonal(&[0.0, 1.0]).unwrap();
    let half = |re: f64| num_complex::Complex64::new(re, 0.0);
    let rho = HermitianOp::new(vec![vec![half(0.5), half(0.5)], vec![half(0.5), half(0.5)]])
        .unwrap();
    let x_obs =
        HermitianOp::new(vec![vec![half(0.0), half(1.0)], vec![half(1.0), half(0.0)]]).unwrap();
    let spec =
        CircuitSpec::new(vec![Layer { hamiltonian: h, channel: None }], rho, x_obs).unwrap();
    let f = pqcsim::expectation_trigpoly(&spec).unwrap();

    if f.c0().abs() > 1e-10 {
        failures.push(format!("c0 = {}", f.c0()));
    }
    let idx = f
        .freqs()
        .xi_plus()
        .iter()
        .position(|xi| xi[0] == rat(1, 1))
        .expect("frequency 1 present");
    if (f.cos_coeffs()[idx] - 1.0).abs() > 1e-10 {
        failures.push(format!("cos coefficient {}", f.cos_coeffs()[idx]));
    }
    if f.sin_coeffs()[idx].abs() > 1e-10 {
        failures.push(format!("sin coefficient {}", f.sin_coeffs()[idx]));
    }

    // The optimal rule reproduces a central finite difference of f'.
    let freqs = band(1);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let (rule, _) = optimize::sparse_optimal(&freqs, &t, &SolverConfig::default()).unwrap();
    let h_step = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let x = rng.gen_range(-0.5..0.5);
        let fd =
            (f.eval(&[x + h_step]).unwrap() - f.eval(&[x - h_step]).unwrap()) / (2.0 * h_step);
        let via_rule = rule.apply(&f, &[x]).unwrap();
        let scale = fd.abs().max(via_rule.abs()).max(1.0);
        if (via_rule - fd).abs() / scale > 1e-5 {
            failures.push(format!("x = {x}: rule {via_rule} vs fd {fd}"));
        }
    }
    report(8, "simulator cross-check", &failures);
}

#[test]
fn criterion_09_shot_noise_scale() {
    let mut failures = Vec::new();
    let freqs = band(1);
    let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
    let (rule, _) = optimize::sparse_optimal(&freqs, &t, &SolverConfig::default()).unwrap();

    // Near-flat member of Fun_Ξ: probabilities stay near ½ at every shift,
    // putting the estimator in its worst-variance regime.
    let f = TrigPoly::new(freqs, 0.0, vec![1e-3], vec![0.0]).unwrap();
    let (_, std) = pqcsim::shot_noise_estimate(&f, &rule, &[0.0], 1_000_000, 42).unwrap();
    let claim = 2.0 * PI / 1e3;
    if (std - claim).abs() > 0.25 * claim {
        failures.push(format!("std {std} vs claimed {claim}"));
    }
    report(9, "shot-noise scale", &failures);
}

#[test]
fn criterion_10_rescaling_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let config = SolverConfig::default();
    let mut failures = Vec::new();
    for case in 0..20 {
        let size = rng.gen_range(1..=3usize);
        let mut xi: Vec<Rational> = Vec::new();
        while xi.len() < size {
            let r = rat(rng.gen_range(1..=9i64), rng.gen_range(1..=6i64));
            if !xi.contains(&r) {
                xi.push(r);
            }
        }
        let alpha = rng.gen_range(1..=2u32);
        let pts: Vec<Vec<Rational>> = xi.iter().map(|r| vec![*r]).collect();
        let freqs = FrequencySet::from_points(1, &pts, true).unwrap();
        let t = DerivativeTarget::new(&freqs, &[alpha]).unwrap();

        // Direct optimization of the rational instance.
        let direct = match optimize::solve_certified(&freqs, &t, &config) {
            Ok((_, cert)) => cert.dual.value,
            Err(e) => {
                failures.push(format!("case {case} {xi:?}: direct solve failed: {e}"));
                continue;
            }
        };

        // Integer-scaled instance, solved and mapped back by hand.
        let (scaled, smap) = freqs.scale_to_integers();
        let t_scaled = DerivativeTarget::new(&scaled, &[alpha]).unwrap();
        let (rule_scaled, cert_scaled) =
            match optimize::solve_certified(&scaled, &t_scaled, &config) {
                Ok(pair) => pair,
                Err(e) => {
                    failures.push(format!("case {case} {xi:?}: scaled solve failed: {e}"));
                    continue;
                }
            };
        let inverse = ScalingMap::new(
            smap.factors().iter().map(|f| Rational::new(*f.denom(), *f.numer())).collect(),
        )
        .unwrap();
        let unscaled_rule = rule_scaled.rescale(&inverse, &t_scaled).unwrap();
        let unscaled_value = cert_scaled.dual.value / smap.alpha_power(&[alpha]);

        if (unscaled_value - direct).abs() > 1e-5 * direct.abs().max(1e-9) {
            failures.push(format!(
                "case {case} {xi:?} alpha={alpha}: unscaled {unscaled_value} vs direct {direct}"
            ));
        }
        if (unscaled_rule.cost() - direct).abs() > 1e-5 * direct.abs().max(1e-9) {
            failures.push(format!(
                "case {case} {xi:?} alpha={alpha}: rescaled cost {} vs direct {direct}",
                unscaled_rule.cost()
            ));
        }
        let residual = unscaled_rule.residual(&freqs, &t).unwrap();
        if residual > 1e-6 {
            failures.push(format!("case {case} {xi:?}: rescaled residual {residual}"));
        }
    }
    report(10, "rescaling invariant", &failures);
}
