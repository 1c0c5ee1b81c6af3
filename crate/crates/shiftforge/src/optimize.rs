//! The optimizer: dual cutting planes, primal recovery, closed-form
//! witnesses, sparse recovery, and certification.
//!
//! The minimum-cost shift rule for (Ξ, α) is the optimum of an
//! infinite-dimensional LP; its dual is concrete and finite-dimensional:
//!
//! > maximize (−∂)^α f(0) over f ∈ Fun_Ξ with ‖f‖_∞ ≤ 1,
//!
//! where Fun_Ξ is spanned by the harmonics of Ξ.  In sine–cosine
//! coordinates the objective is linear, Σ_ξ c_ξ x_ξ + s_ξ y_ξ, and the
//! norm bound is two inequalities −1 ≤ f(a) ≤ 1 *per point* a of the
//! period cell — infinitely many rows, finitely many variables.  The
//! solver keeps a finite row set A, solves, asks a certified global-extrema
//! search for points where |f| > 1 + δ, adds them, and repeats.  At the
//! optimum, strong duality makes the row multipliers of the final LP a
//! minimum-cost rule, supported where the witness f★ touches ±1.
//!
//! Everything runs on the integer frequency lattice internally: the
//! problem is rescaled on the way in and results are mapped back on the
//! way out, which keeps one period cell [−1/2, 1/2)ᵈ the universal search
//! domain.

use crate::error::{Error, Result};
use crate::freqset::{ratio_to_f64, FrequencySet, Rational, ScalingMap};
use crate::lp::{self, LinearProgram, LpStatus, RowId, Sense};
use crate::shiftrule::{equality_system, ShiftRule};
use crate::trigpoly::{DerivativeTarget, ExtremaConfig, TrigPoly};
use num_rational::Ratio;

/// Tuning knobs for the dual solver and the certificates built from it.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Separation slack: a dual iterate is accepted once ‖f★‖_∞ ≤ 1 + δ.
    pub delta: f64,
    /// Objective precision; also the floor of the certificate gap
    /// tolerance (relative scale 1e−5 unless ε is set larger).
    pub epsilon: f64,
    /// Accuracy claimed for certified global extrema.
    pub extrema_tol: f64,
    /// Pivot/feasibility tolerance handed to the simplex.
    pub lp_tol: f64,
    /// Cutting-plane iteration cap.
    pub max_iterations: usize,
    /// Initial per-axis grid size for the constraint set A₀; 0 picks
    /// min(2|Ξ|+1, ⌊128^{1/d}⌋) automatically.
    pub initial_grid: usize,
    /// Seed for randomized helpers built on top of the solver.
    pub seed: u64,
    /// Absolute residual below which a rule counts as feasible.
    pub feas_tol: f64,
    /// Complementary slackness: u_a > 0 requires f★(a) ≥ 1 − slack_tol.
    pub slack_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            delta: 1e-7,
            epsilon: 1e-6,
            extrema_tol: 1e-9,
            lp_tol: 1e-9,
            max_iterations: 200,
            initial_grid: 0,
            seed: 42,
            feas_tol: 1e-7,
            slack_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.epsilon > 0.0 && self.extrema_tol > 0.0 && self.lp_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be >= 1".into()));
        }
        Ok(())
    }

    /// Gap tolerance for certificates: max(ε, 1e−5) · (1 + |value|).
    pub fn cert_tol(&self, value: f64) -> f64 {
        self.epsilon.max(1e-5) * (1.0 + value.abs())
    }

    fn extrema_config(&self, grid_multiplier: u32) -> ExtremaConfig {
        ExtremaConfig {
            grid_multiplier,
            grad_tol: (self.extrema_tol * 1e-3).min(1e-12),
            ..ExtremaConfig::default()
        }
    }
}

/// One row of the cutting-plane progress log.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iteration: usize,
    /// |A| when the LP of this iteration was solved.
    pub points: usize,
    /// LP optimum, already mapped back to the original frequency scale.
    pub lp_value: f64,
    /// max(‖f★‖_∞ − 1, 0) reported by the separation oracle.
    pub max_violation: f64,
}

/// A (near-)optimal dual witness.
///
/// `f_star` lives over the *original* frequency set and satisfies
/// ‖f★‖_∞ ≤ 1 + δ; `value` = (−∂)^α f★(0) is the certified lower bound on
/// any feasible rule's cost.  `basis_plus`/`basis_minus` are the LP-active
/// touching sets A± (f★ = +1 / −1); by complementary slackness every
/// optimal rule is supported there.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub f_star: TrigPoly,
    pub value: f64,
    /// All constraint points of the final LP, original coordinates.
    pub constraint_points: Vec<Vec<f64>>,
    pub basis_plus: Vec<Vec<f64>>,
    pub basis_minus: Vec<Vec<f64>>,
    pub iterations: usize,
    pub trace: Vec<IterationTrace>,
    /// Row multipliers of the final LP, folded into candidate rule atoms
    /// (original coordinates).  Empty for witnesses not built by an LP.
    pub(crate) multipliers: Vec<(Vec<f64>, f64)>,
}

impl DualSolution {
    /// Wraps a closed-form witness (no LP run behind it).
    pub fn from_witness(
        f_star: TrigPoly,
        t: &DerivativeTarget,
        basis_plus: Vec<Vec<f64>>,
        basis_minus: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let value = f_star.neg_deriv_at_zero(t)?;
        let mut constraint_points = basis_plus.clone();
        constraint_points.extend(basis_minus.iter().cloned());
        Ok(DualSolution {
            f_star,
            value,
            constraint_points,
            basis_plus,
            basis_minus,
            iterations: 0,
            trace: Vec::new(),
            multipliers: Vec::new(),
        })
    }
}

/// A slackness breach: the atom at `point` with coefficient `coefficient`
/// sits where the witness takes `witness_value` instead of the required ±1.
#[derive(Debug, Clone)]
pub struct SlacknessViolation {
    pub point: Vec<f64>,
    pub coefficient: f64,
    pub witness_value: f64,
}

/// Joint optimality certificate for a (rule, dual witness) pair.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub rule: ShiftRule,
    pub dual: DualSolution,
    /// cost(rule) − value(dual); ≥ −o(1) by weak duality, ≤ tol iff optimal.
    pub gap: f64,
    pub slackness_violations: Vec<SlacknessViolation>,
    pub feasibility_residual: f64,
    optimal: bool,
}

impl Certificate {
    /// True iff gap ≤ cert_tol ∧ residual ≤ feas_tol ∧ no slackness
    /// violations — the three conditions are re-derivable from the fields.
    pub fn is_optimal(&self) -> bool {
        self.optimal
    }
}

/// Solves the dual problem by cutting planes (near-feasible to slack δ).
///
/// Returns [`Error::IterationLimit`] carrying the best iterate when the
/// cap is hit, and [`Error::UnsupportedDimension`] above d = 3.
pub fn solve_dual(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    config: &SolverConfig,
) -> Result<DualSolution> {
    config.validate()?;
    check_target(freqs, t)?;
    if freqs.dim() > 3 {
        return Err(Error::UnsupportedDimension { dim: freqs.dim() });
    }
    if freqs.xi_plus().is_empty() {
        // Ξ = {0}: every f in the space is constant, every ∂^α vanishes.
        return DualSolution::from_witness(
            TrigPoly::constant(freqs.clone(), 1.0),
            t,
            Vec::new(),
            Vec::new(),
        );
    }

    let d = freqs.dim();
    let (scaled, smap) = freqs.scale_to_integers();
    debug_assert_aligned(freqs, &scaled, &smap);
    let t_scaled = DerivativeTarget::new(&scaled, t.alpha())?;
    let alpha_pow = smap.alpha_power(t.alpha());
    let mut points = initial_grid(&scaled, config, d);
    let mut trace: Vec<IterationTrace> = Vec::new();
    let mut best: Option<DualSolution> = None;
    let mut grid_multiplier = 1u32;

    for iteration in 1..=config.max_iterations {
        let lp = dual_lp(&scaled, &t_scaled, &points);
        let res = lp::solve(&lp, config.lp_tol)?;
        match res.status {
            LpStatus::Infeasible => {
                // f = 0 satisfies every row; only numerics can land here.
                return Err(Error::NumericalBreakdown("dual LP reported infeasible".into()));
            }
            LpStatus::Unbounded => {
                // Cut the improving ray off by constraining its extrema.
                let ray = res.ray.as_ref().expect("unbounded results carry a ray");
                let f_ray = poly_from_coords(&scaled, ray)?;
                let rep = f_ray.global_extrema(&config.extrema_config(grid_multiplier))?;
                trace.push(IterationTrace {
                    iteration,
                    points: points.len(),
                    lp_value: f64::INFINITY,
                    max_violation: f64::INFINITY,
                });
                let mut added = push_dedup(&mut points, rep.argmax);
                added |= push_dedup(&mut points, rep.argmin);
                if !added {
                    return Err(Error::NumericalBreakdown(
                        "unbounded dual LP with no separating point".into(),
                    ));
                }
                continue;
            }
            LpStatus::Optimal => {}
        }

        let f_scaled = poly_from_coords(&scaled, &res.primal)?;
        let rep = f_scaled.global_extrema(&config.extrema_config(grid_multiplier))?;
        let violation = (rep.maxval - 1.0).max(-1.0 - rep.minval).max(0.0);
        trace.push(IterationTrace {
            iteration,
            points: points.len(),
            lp_value: res.value / alpha_pow,
            max_violation: violation,
        });

        let solution = assemble_solution(
            freqs, &smap, alpha_pow, &f_scaled, &res, &points, iteration, &trace,
        )?;
        if rep.maxval <= 1.0 + config.delta && rep.minval >= -1.0 - config.delta {
            return Ok(solution);
        }
        best = Some(solution);

        let mut added = false;
        if rep.maxval > 1.0 + config.delta {
            added |= push_dedup(&mut points, rep.argmax);
        }
        if rep.minval < -1.0 - config.delta {
            added |= push_dedup(&mut points, rep.argmin);
        }
        if !added {
            // The violating point coincides with an existing row: the grid
            // missed structure between constraint points.  Scan denser.
            if grid_multiplier < 8 {
                grid_multiplier *= 2;
            } else {
                return Err(Error::NumericalBreakdown(
                    "separation stalled: violation without a new cut point".into(),
                ));
            }
        }
    }

    match best {
        Some(b) => Err(Error::IterationLimit { limit: config.max_iterations, best: Box::new(b) }),
        None => Err(Error::NumericalBreakdown("no LP iterate completed".into())),
    }
}

/// Extracts the minimum-cost rule behind a dual solution: primarily the
/// final LP's row multipliers; if those are missing or inconsistent, a
/// sign-constrained solve on the touching sets A±.
pub fn recover_from_basis(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    dual: &DualSolution,
    config: &SolverConfig,
) -> Result<ShiftRule> {
    check_target(freqs, t)?;
    if freqs.xi_plus().is_empty() {
        return Ok(ShiftRule::empty(freqs.dim()));
    }
    if !dual.multipliers.is_empty() {
        let rule = ShiftRule::new(freqs.dim(), dual.multipliers.iter().cloned())?;
        if rule.residual(freqs, t)? <= config.feas_tol
            && (rule.cost() - dual.value).abs() <= config.cert_tol(dual.value)
        {
            return Ok(rule);
        }
    }
    match signed_support_solve(freqs, t, &dual.basis_plus, &dual.basis_minus, config)? {
        Some(rule) if rule.residual(freqs, t)? <= config.feas_tol => Ok(rule),
        _ => Err(Error::DegenerateBasis),
    }
}

/// The closed-form dual witness for pointy sets: the single harmonic
/// f★(a) = Re(ω e^{2πi ζ·a}) at the corner frequency ζ = ε ∘ M,
/// M_j = max pr_j(Ξ), with the unit phase ω = (∏_j ε_j^{α_j}) · i^{|α|}.
/// Then ‖f★‖_∞ = 1 and (−∂)^α f★(0) = ∏_j (2π M_j)^{α_j} — for d = 1 this
/// is exactly the α-th derivative of cosine evaluated at 2πMa.
pub fn analytic_dual(freqs: &FrequencySet, t: &DerivativeTarget) -> Result<TrigPoly> {
    check_target(freqs, t)?;
    let eps = freqs.is_pointy().ok_or(Error::NotPointy)?;
    if freqs.xi_plus().is_empty() {
        return Ok(TrigPoly::constant(freqs.clone(), 1.0));
    }
    let zeta: Vec<Rational> = (0..freqs.dim())
        .map(|j| {
            let m = freqs.max_coord(j);
            if eps[j] > 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    let sgn: f64 = eps
        .iter()
        .zip(t.alpha())
        .map(|(&e, &a)| if e < 0 && a % 2 == 1 { -1.0 } else { 1.0 })
        .product();
    // ω = sgn · i^{|α|} gives the coefficient x + iy at ζ.
    let (x, mut y) = match t.order() % 4 {
        0 => (sgn, 0.0),
        1 => (0.0, sgn),
        2 => (-sgn, 0.0),
        _ => (0.0, -sgn),
    };
    // Locate the canonical representative of {ζ, −ζ}; conjugate if −ζ.
    let mut key = zeta.clone();
    if !freqs.xi_plus().iter().any(|p| p == &key) {
        key = zeta.iter().map(|c| -c).collect();
        y = -y;
    }
    let n = freqs.xi_plus().len();
    let mut xs = vec![0.0; n];
    let mut ys = vec![0.0; n];
    match freqs.xi_plus().iter().position(|p| p == &key) {
        Some(k) => {
            xs[k] = x;
            ys[k] = y;
        }
        None => {
            // ζ = 0: Ξ has no extent in any coordinate; the witness is the
            // constant 1 and the optimal value is 0.
            return Ok(TrigPoly::constant(freqs.clone(), 1.0));
        }
    }
    TrigPoly::new(freqs.clone(), 0.0, xs, ys)
}

/// Recovers a sparse optimal rule from a dual witness via its touching
/// sets.  Requires the integral lattice (rescale first; d ≤ 3).
///
/// The detection prefers the closed-form equispaced grids — per axis
/// 2M_j points, odd α_j on half-odd quarters (2k+1)/(4M_j), even α_j on
/// halves k/(2M_j) — verified against f★; when f★ does not take ±1 there,
/// it falls back to a numerically detected finite touching set.
pub fn sparse_recover(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    f_star: &TrigPoly,
    config: &SolverConfig,
) -> Result<ShiftRule> {
    check_target(freqs, t)?;
    if !freqs.is_integral() {
        return Err(Error::NonIntegralFrequencies);
    }
    if freqs.dim() > 3 {
        return Err(Error::UnsupportedDimension { dim: freqs.dim() });
    }
    if freqs.xi_plus().is_empty() {
        return Ok(ShiftRule::empty(freqs.dim()));
    }
    let d = freqs.dim();
    let m: Vec<i64> = (0..d).map(|j| freqs.max_coord(j).to_integer()).collect();
    if m.iter().any(|&mj| mj == 0) {
        // Some coordinate has no frequency content: the target is 0 on all
        // of Ξ and the empty rule is the (optimal) answer.
        return Ok(ShiftRule::empty(d));
    }

    let (a_plus, a_minus) = match closed_form_touching_sets(&m, t, f_star)? {
        Some(sets) => sets,
        None => detected_touching_sets(f_star, config)?,
    };
    if a_plus.is_empty() && a_minus.is_empty() {
        return Err(Error::ActiveSetInfeasible);
    }
    match signed_support_solve(freqs, t, &a_plus, &a_minus, config)? {
        Some(rule) if rule.residual(freqs, t)? <= config.feas_tol => Ok(rule),
        _ => Err(Error::ActiveSetInfeasible),
    }
}

/// Certifies a (rule, dual) pair: duality gap, feasibility residual, and
/// complementary slackness of every atom against the witness.
pub fn certify(
    rule: &ShiftRule,
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    dual: &DualSolution,
    config: &SolverConfig,
) -> Result<Certificate> {
    check_target(freqs, t)?;
    let feasibility_residual = rule.residual(freqs, t)?;
    let gap = rule.cost() - dual.value;
    let mut slackness_violations = Vec::new();
    for (a, u) in rule.atoms() {
        let v = dual.f_star.eval(a)?;
        let ok = if *u > 0.0 { v >= 1.0 - config.slack_tol } else { v <= -1.0 + config.slack_tol };
        if !ok {
            slackness_violations.push(SlacknessViolation {
                point: a.clone(),
                coefficient: *u,
                witness_value: v,
            });
        }
    }
    let optimal = gap <= config.cert_tol(dual.value)
        && feasibility_residual <= config.feas_tol
        && slackness_violations.is_empty();
    Ok(Certificate {
        rule: rule.clone(),
        dual: dual.clone(),
        gap,
        slackness_violations,
        feasibility_residual,
        optimal,
    })
}

/// End-to-end cutting-plane pipeline: solve_dual → recover_from_basis →
/// certify.
pub fn solve_certified(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    config: &SolverConfig,
) -> Result<(ShiftRule, Certificate)> {
    let dual = solve_dual(freqs, t, config)?;
    let rule = recover_from_basis(freqs, t, &dual, config)?;
    let cert = certify(&rule, freqs, t, &dual, config)?;
    Ok((rule, cert))
}

/// End-to-end sparse pipeline for pointy sets: rescale to the lattice,
/// take the closed-form witness, recover the equispaced rule, map back,
/// certify — no iterative optimization anywhere.
pub fn sparse_optimal(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    config: &SolverConfig,
) -> Result<(ShiftRule, Certificate)> {
    check_target(freqs, t)?;
    let (scaled, smap) = freqs.scale_to_integers();
    debug_assert_aligned(freqs, &scaled, &smap);
    let t_scaled = DerivativeTarget::new(&scaled, t.alpha())?;
    let f_scaled = analytic_dual(&scaled, &t_scaled)?;
    let rule_scaled = sparse_recover(&scaled, &t_scaled, &f_scaled, config)?;
    let rule = rule_scaled.rescale(&inverse_map(&smap)?, &t_scaled)?;
    // The witness carries over coefficient-for-coefficient: harmonics of
    // the scaled set correspond index-wise to harmonics of the original.
    let f_star = TrigPoly::new(
        freqs.clone(),
        f_scaled.c0(),
        f_scaled.cos_coeffs().to_vec(),
        f_scaled.sin_coeffs().to_vec(),
    )?;
    let unscale = |pts: &[Vec<f64>]| -> Vec<Vec<f64>> {
        pts.iter()
            .map(|a| a.iter().enumerate().map(|(j, &aj)| aj * smap.factor_f64(j)).collect())
            .collect()
    };
    let plus: Vec<Vec<f64>> = unscale(
        &rule_scaled.atoms().iter().filter(|(_, u)| *u > 0.0).map(|(a, _)| a.clone()).collect::<Vec<_>>(),
    );
    let minus: Vec<Vec<f64>> = unscale(
        &rule_scaled.atoms().iter().filter(|(_, u)| *u < 0.0).map(|(a, _)| a.clone()).collect::<Vec<_>>(),
    );
    let dual = DualSolution::from_witness(f_star, t, plus, minus)?;
    let cert = certify(&rule, freqs, t, &dual, config)?;
    Ok((rule, cert))
}

// ---------------------------------------------------------------------------
// internals

fn check_target(freqs: &FrequencySet, t: &DerivativeTarget) -> Result<()> {
    if t.alpha().len() != freqs.dim() {
        return Err(Error::DimensionMismatch { expected: freqs.dim(), got: t.alpha().len() });
    }
    Ok(())
}

/// In debug builds, verify that rescaling preserved the Ξ⁺ ordering (the
/// coefficient transplant between scaled and original relies on it).
fn debug_assert_aligned(orig: &FrequencySet, scaled: &FrequencySet, smap: &ScalingMap) {
    debug_assert_eq!(orig.xi_plus().len(), scaled.xi_plus().len());
    #[cfg(debug_assertions)]
    for (o, s) in orig.xi_plus().iter().zip(scaled.xi_plus()) {
        for j in 0..o.len() {
            debug_assert_eq!(o[j] * smap.factors()[j], s[j]);
        }
    }
    #[cfg(not(debug_assertions))]
    let _ = (orig, scaled, smap);
}

fn inverse_map(s: &ScalingMap) -> Result<ScalingMap> {
    ScalingMap::new(s.factors().iter().map(|f| Ratio::new(*f.denom(), *f.numer())).collect())
}

/// A₀: a tensor grid over [−1/2, 1/2)ᵈ, min(2|Ξ|+1, ⌊128^{1/d}⌋) points
/// per axis unless the config fixes a per-axis count.
fn initial_grid(scaled: &FrequencySet, config: &SolverConfig, d: usize) -> Vec<Vec<f64>> {
    let per_axis = if config.initial_grid > 0 {
        config.initial_grid
    } else {
        let auto = 2 * scaled.len() + 1;
        let cap = match d {
            1 => 128,
            2 => 11,
            _ => 5,
        };
        auto.min(cap)
    };
    let mut pts: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::with_capacity(pts.len() * per_axis);
        for stem in &pts {
            for k in 0..per_axis {
                let mut p = stem.clone();
                p.push(-0.5 + k as f64 / per_axis as f64);
                next.push(p);
            }
        }
        pts = next;
    }
    pts
}

/// The LP over a finite row set A: maximize Σ c_ξ x_ξ + s_ξ y_ξ subject to
/// −1 ≤ f(a) ≤ 1 for a ∈ A, variables z = (μ, x, y) free.
fn dual_lp(scaled: &FrequencySet, t: &DerivativeTarget, points: &[Vec<f64>]) -> LinearProgram {
    let xi = scaled.xi_plus_f64();
    let n = xi.len();
    let mut objective = vec![0.0; 1 + 2 * n];
    for (k, &(c, s)) in t.targets().iter().enumerate() {
        objective[1 + k] = c;
        objective[1 + n + k] = s;
    }
    let mut ineq_lhs = Vec::with_capacity(2 * points.len());
    let mut ineq_rhs = Vec::with_capacity(2 * points.len());
    for a in points {
        let mut row = vec![0.0; 1 + 2 * n];
        row[0] = 1.0;
        for (k, x) in xi.iter().enumerate() {
            let phase = 2.0 * std::f64::consts::PI * dot(a, x);
            row[1 + k] = phase.cos();
            row[1 + n + k] = -phase.sin();
        }
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        ineq_lhs.push(row);
        ineq_rhs.push(1.0);
        ineq_lhs.push(neg);
        ineq_rhs.push(1.0);
    }
    LinearProgram {
        sense: Sense::Maximize,
        objective,
        eq_lhs: vec![],
        eq_rhs: vec![],
        ineq_lhs,
        ineq_rhs,
        nonneg: vec![false; 1 + 2 * n],
    }
}

/// (μ, x, y) coordinate vector → polynomial over the given set.
fn poly_from_coords(freqs: &FrequencySet, z: &[f64]) -> Result<TrigPoly> {
    let n = freqs.xi_plus().len();
    if z.len() != 1 + 2 * n {
        return Err(Error::DimensionMismatch { expected: 1 + 2 * n, got: z.len() });
    }
    TrigPoly::new(freqs.clone(), z[0], z[1..1 + n].to_vec(), z[1 + n..].to_vec())
}

/// Builds the full DualSolution for an optimal LP iterate, mapping the
/// scaled-lattice objects back to original coordinates: points a = s ∘ a′,
/// coefficients transplant index-wise, value and multipliers divide by
/// ∏ s^α.
#[allow(clippy::too_many_arguments)]
fn assemble_solution(
    freqs: &FrequencySet,
    smap: &ScalingMap,
    alpha_pow: f64,
    f_scaled: &TrigPoly,
    res: &lp::LpResult,
    points: &[Vec<f64>],
    iterations: usize,
    trace: &[IterationTrace],
) -> Result<DualSolution> {
    let d = freqs.dim();
    let unscale_point = |a: &Vec<f64>| -> Vec<f64> {
        (0..d).map(|j| a[j] * smap.factor_f64(j)).collect()
    };
    let f_star = TrigPoly::new(
        freqs.clone(),
        f_scaled.c0(),
        f_scaled.cos_coeffs().to_vec(),
        f_scaled.sin_coeffs().to_vec(),
    )?;
    let mut basis_plus = Vec::new();
    let mut basis_minus = Vec::new();
    for row in &res.basis {
        if let RowId::Ineq(i) = *row {
            let a = unscale_point(&points[i / 2]);
            if i % 2 == 0 {
                basis_plus.push(a);
            } else {
                basis_minus.push(a);
            }
        }
    }
    let mut multipliers = Vec::with_capacity(points.len());
    for (k, a) in points.iter().enumerate() {
        let lam_plus = res.duals[2 * k].max(0.0);
        let lam_minus = res.duals[2 * k + 1].max(0.0);
        let u = (lam_plus - lam_minus) / alpha_pow;
        if u != 0.0 {
            multipliers.push((unscale_point(a), u));
        }
    }
    Ok(DualSolution {
        f_star,
        value: res.value / alpha_pow,
        constraint_points: points.iter().map(unscale_point).collect(),
        basis_plus,
        basis_minus,
        iterations,
        trace: trace.to_vec(),
        multipliers,
    })
}

fn push_dedup(points: &mut Vec<Vec<f64>>, candidate: Vec<f64>) -> bool {
    let tol = 1e-9;
    if points.iter().any(|p| dist(p, &candidate) < tol) {
        false
    } else {
        points.push(candidate);
        true
    }
}

/// Per-axis closed-form touching grids, verified against f★.  Returns
/// `None` when f★ is not ±1 (to 1e−8) on the product grid — then the
/// numerical detector takes over.
fn closed_form_touching_sets(
    m: &[i64],
    t: &DerivativeTarget,
    f_star: &TrigPoly,
) -> Result<Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)>> {
    let d = m.len();
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mj = m[j];
        let pts: Vec<f64> = if t.alpha()[j] % 2 == 1 {
            (-mj..mj).map(|k| (2 * k + 1) as f64 / (4 * mj) as f64).collect()
        } else {
            (-mj..mj).map(|k| k as f64 / (2 * mj) as f64).collect()
        };
        axes.push(pts);
    }
    let mut a_plus = Vec::new();
    let mut a_minus = Vec::new();
    let mut stack: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        let mut next = Vec::with_capacity(stack.len() * axis.len());
        for stem in &stack {
            for &c in axis {
                let mut p = stem.clone();
                p.push(c);
                next.push(p);
            }
        }
        stack = next;
    }
    for p in stack {
        let v = f_star.eval(&p)?;
        if (v - 1.0).abs() <= 1e-8 {
            a_plus.push(p);
        } else if (v + 1.0).abs() <= 1e-8 {
            a_minus.push(p);
        } else {
            return Ok(None);
        }
    }
    Ok(Some((a_plus, a_minus)))
}

/// Numerical touching-set detection: grid points within 1e−3 of ±1 are
/// Newton-polished toward the nearest extremum and kept if they reach ±1
/// to 1e−8, deduplicated at 1e−9.
fn detected_touching_sets(
    f_star: &TrigPoly,
    config: &SolverConfig,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let d = f_star.freqs().dim();
    let per_axis: Vec<usize> = (0..d)
        .map(|j| 32 * (ratio_to_f64(&f_star.freqs().max_coord(j)).round() as usize) + 17)
        .collect();
    let mut a_plus: Vec<Vec<f64>> = Vec::new();
    let mut a_minus: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; d];
    let mut done = false;
    while !done {
        let p: Vec<f64> = (0..d).map(|j| -0.5 + idx[j] as f64 / per_axis[j] as f64).collect();
        let v = f_star.eval_unchecked(&p);
        if (v - 1.0).abs() <= 1e-3 {
            if let Some(q) = polish_to_level(f_star, &p, 1.0, config) {
                push_dedup(&mut a_plus, q);
            }
        } else if (v + 1.0).abs() <= 1e-3 {
            if let Some(q) = polish_to_level(f_star, &p, -1.0, config) {
                push_dedup(&mut a_minus, q);
            }
        }
        done = true;
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < per_axis[j] {
                done = false;
                break;
            }
            idx[j] = 0;
        }
    }
    Ok((a_plus, a_minus))
}

/// Newton on the gradient from `start`; accepts when f lands within 1e−8
/// of `level` (±1).
fn polish_to_level(f: &TrigPoly, start: &[f64], level: f64, _config: &SolverConfig) -> Option<Vec<f64>> {
    let sigma = level;
    let mut a = start.to_vec();
    let mut v = f.eval_unchecked(&a);
    for _ in 0..50 {
        let (_, g, h) = f.eval_with_derivs(&a);
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm <= 1e-12 {
            break;
        }
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        let step = crate::linalg::solve_square(&h, &rhs)?;
        let mut lambda = 1.0;
        let mut moved = false;
        while lambda > 1e-6 {
            let trial: Vec<f64> = a.iter().zip(&step).map(|(ai, si)| ai + lambda * si).collect();
            let tv = f.eval_unchecked(&trial);
            if sigma * tv > sigma * v {
                a = trial;
                v = tv;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if (v - level).abs() <= 1e-8 {
        for x in &mut a {
            let w = *x - x.round();
            *x = if w >= 0.5 { w - 1.0 } else if w < -0.5 { w + 1.0 } else { w };
        }
        Some(a)
    } else {
        None
    }
}

/// Minimum-cost rule constrained to sign-split supports: u ≥ 0 on A⁺,
/// u ≤ 0 on A⁻ (complementary slackness shape).  `None` = infeasible.
fn signed_support_solve(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    a_plus: &[Vec<f64>],
    a_minus: &[Vec<f64>],
    config: &SolverConfig,
) -> Result<Option<ShiftRule>> {
    let mut support: Vec<Vec<f64>> = a_plus.to_vec();
    support.extend(a_minus.iter().cloned());
    if support.is_empty() {
        return Ok(None);
    }
    let np = a_plus.len();
    let n = support.len();
    let (rows, rhs) = equality_system(freqs, t, &support);
    // Signed columns: +row entries on A⁺ (u ≥ 0), −row entries on A⁻
    // (stored magnitude w = −u ≥ 0).
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective: vec![1.0; n],
        eq_lhs: rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(k, &v)| if k < np { v } else { -v })
                    .collect()
            })
            .collect(),
        eq_rhs: rhs,
        ineq_lhs: vec![],
        ineq_rhs: vec![],
        nonneg: vec![true; n],
    };
    let res = lp::solve(&lp, config.lp_tol)?;
    if res.status != LpStatus::Optimal {
        return Ok(None);
    }
    let atoms = support.into_iter().enumerate().map(|(k, a)| {
        let u = if k < np { res.primal[k] } else { -res.primal[k] };
        (a, u)
    });
    Ok(Some(ShiftRule::new(freqs.dim(), atoms)?))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
