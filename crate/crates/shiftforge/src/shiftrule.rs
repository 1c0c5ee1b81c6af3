//! Shift rules: finite signed atomic measures φ = Σ_a u_a δ_a.
//!
//! A rule is *feasible* for (Ξ, α) when its Fourier transform
//! φ̂(ξ) = Σ_a u_a e^{−2πi a·ξ} equals (2πi ξ)^α on all of Ξ; then
//! Σ_a u_a f(x − a) = ∂^α f(x) for every f with spectrum Ξ, exactly.
//! The cost Σ_a |u_a| is the total-variation norm — the figure of merit
//! the optimizer minimizes, because the standard deviation of the
//! shot-sampled estimator scales with it.

use crate::error::{Error, Result};
use crate::freqset::{FrequencySet, ScalingMap};
use crate::linalg;
use crate::lp::{self, LinearProgram, LpStatus, Sense};
use crate::trigpoly::{phase_factor, DerivativeTarget, TrigPoly};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Atoms closer than this (Euclidean) merge at construction.
const MERGE_TOL: f64 = 1e-9;
/// Coefficients at or below this magnitude are dropped at construction.
const DROP_TOL: f64 = 1e-11;

/// An immutable shift rule: support points with signed real coefficients,
/// sorted lexicographically, duplicates merged, zero coefficients dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRule {
    dim: usize,
    atoms: Vec<(Vec<f64>, f64)>,
}

/// Result of a fixed-support solve: the best rule on the given support,
/// whether it meets the equality system, and — when it does not — the
/// least-squares gap that is left.
#[derive(Debug, Clone)]
pub struct FixedSupportSolve {
    pub rule: ShiftRule,
    pub feasible: bool,
    /// Weighted ℓ² norm of the residual over the whole of Ξ (0 when
    /// feasible): √(r₀² + 2 Σ_{ξ∈Ξ⁺} |r_ξ|²).
    pub l2_gap: f64,
}

impl ShiftRule {
    /// Builds a rule from raw atoms: checks dimensions, merges points
    /// within 1e−9, drops vanishing coefficients, sorts the support.
    pub fn new(dim: usize, atoms: impl IntoIterator<Item = (Vec<f64>, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("shift rules need dimension >= 1".into()));
        }
        let mut raw: Vec<(Vec<f64>, f64)> = Vec::new();
        for (p, u) in atoms {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            raw.push((p, u));
        }
        raw.sort_by(|a, b| cmp_points(&a.0, &b.0));
        let mut merged: Vec<(Vec<f64>, f64)> = Vec::new();
        for (p, u) in raw {
            match merged.last_mut() {
                Some((q, w)) if dist(q, &p) < MERGE_TOL => *w += u,
                _ => merged.push((p, u)),
            }
        }
        merged.retain(|(_, u)| u.abs() > DROP_TOL);
        Ok(ShiftRule { dim, atoms: merged })
    }

    /// The empty rule (the exact rule for a target that is identically 0).
    pub fn empty(dim: usize) -> Self {
        ShiftRule { dim, atoms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Support points with their coefficients, sorted lexicographically.
    pub fn atoms(&self) -> &[(Vec<f64>, f64)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// Σ_a |u_a| — the total-variation norm.
    pub fn cost(&self) -> f64 {
        self.atoms.iter().map(|(_, u)| u.abs()).sum()
    }

    /// φ̂(ξ) = Σ_a u_a e^{−2πi a·ξ}.
    pub fn fourier_at(&self, xi: &[f64]) -> Result<Complex64> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: xi.len() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, u) in &self.atoms {
            let t = -2.0 * PI * dot(a, xi);
            acc += u * Complex64::new(t.cos(), t.sin());
        }
        Ok(acc)
    }

    /// max_{ξ∈Ξ} |φ̂(ξ) − (2πi ξ)^α|.  By conjugate symmetry the maximum
    /// over Ξ⁺ ∪ {0} equals the maximum over all of Ξ.
    pub fn residual(&self, freqs: &FrequencySet, t: &DerivativeTarget) -> Result<f64> {
        if freqs.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: freqs.dim() });
        }
        let zero_err: f64 = self.atoms.iter().map(|(_, u)| u).sum();
        let mut worst = zero_err.abs();
        for xi in freqs.xi_plus_f64() {
            let (c, s) = phase_factor(&xi, t.alpha());
            let err = self.fourier_at(&xi)? - Complex64::new(c, s);
            worst = worst.max(err.norm());
        }
        Ok(worst)
    }

    /// Σ_a u_a f(x − a) — the estimator the rule realizes.
    pub fn apply(&self, f: &TrigPoly, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut acc = 0.0;
        let mut shifted = vec![0.0; self.dim];
        for (a, u) in &self.atoms {
            for j in 0..self.dim {
                shifted[j] = x[j] - a[j];
            }
            acc += u * f.eval(&shifted)?;
        }
        Ok(acc)
    }

    /// Transplants a rule for (Ξ, α) to the rescaled problem (s ∘ Ξ, α):
    /// support points divide componentwise by s, coefficients (and hence
    /// the cost) multiply by ∏ s_j^{α_j}.  Feasibility and optimality are
    /// preserved in both directions.
    pub fn rescale(&self, s: &ScalingMap, t: &DerivativeTarget) -> Result<ShiftRule> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: s.dim() });
        }
        let factor = s.alpha_power(t.alpha());
        let atoms = self.atoms.iter().map(|(a, u)| {
            let p: Vec<f64> = a.iter().enumerate().map(|(j, &aj)| aj / s.factor_f64(j)).collect();
            (p, u * factor)
        });
        ShiftRule::new(self.dim, atoms)
    }
}

/// Solves the shift-rule equality system on a fixed support A: minimizes
/// Σ|u| over rules supported on A subject to φ̂(ξ) = (2πi ξ)^α on Ξ.  When
/// the system has no solution on A, falls back to an unconstrained
/// least-squares fit and reports the remaining ℓ² gap.
pub fn solve_fixed_support(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    support: &[Vec<f64>],
    lp_tol: f64,
    feas_tol: f64,
) -> Result<FixedSupportSolve> {
    let dim = freqs.dim();
    for a in support {
        if a.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
        }
    }
    if support.is_empty() {
        return Err(Error::InvalidInput("fixed-support solve needs at least one point".into()));
    }
    let (rows, rhs) = equality_system(freqs, t, support);

    // Minimize Σ(u⁺ + u⁻) with u = u⁺ − u⁻ over the equality rows.
    let n = support.len();
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective: vec![1.0; 2 * n],
        eq_lhs: rows.iter().map(|r| split_columns(r)).collect(),
        eq_rhs: rhs.clone(),
        ineq_lhs: vec![],
        ineq_rhs: vec![],
        nonneg: vec![true; 2 * n],
    };
    let res = lp::solve(&lp, lp_tol)?;
    if res.status == LpStatus::Optimal {
        let coeffs: Vec<f64> = (0..n).map(|k| res.primal[k] - res.primal[n + k]).collect();
        let rule = ShiftRule::new(dim, support.iter().cloned().zip(coeffs))?;
        let resid = rule.residual(freqs, t)?;
        if resid <= feas_tol {
            return Ok(FixedSupportSolve { rule, feasible: true, l2_gap: 0.0 });
        }
    }

    // Least-squares fallback: the support cannot meet the equations.
    let coeffs = linalg::lstsq(&rows, &rhs);
    let rule = ShiftRule::new(dim, support.iter().cloned().zip(coeffs))?;
    let gap = l2_gap(&rule, freqs, t)?;
    Ok(FixedSupportSolve { rule, feasible: false, l2_gap: gap })
}

/// The real equality system E u = τ for a support A: one row for ξ = 0
/// (Σ u_a = 0), then per ξ ∈ Ξ⁺ a cosine row (Re φ̂ = c_ξ) and a sine row
/// (Im φ̂ = s_ξ, lhs −sin(2π a·ξ)).
pub(crate) fn equality_system(
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    support: &[Vec<f64>],
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows = vec![vec![1.0; support.len()]];
    let mut rhs = vec![0.0];
    for xi in freqs.xi_plus_f64() {
        let (c, s) = phase_factor(&xi, t.alpha());
        let mut cos_row = Vec::with_capacity(support.len());
        let mut sin_row = Vec::with_capacity(support.len());
        for a in support {
            let phase = 2.0 * PI * dot(a, &xi);
            cos_row.push(phase.cos());
            sin_row.push(-phase.sin());
        }
        rows.push(cos_row);
        rhs.push(c);
        rows.push(sin_row);
        rhs.push(s);
    }
    (rows, rhs)
}

/// √(r₀² + 2 Σ_{ξ∈Ξ⁺} |r_ξ|²) — the ℓ² size of the Fourier residual
/// counted over the full symmetric spectrum.
fn l2_gap(rule: &ShiftRule, freqs: &FrequencySet, t: &DerivativeTarget) -> Result<f64> {
    let r0: f64 = rule.atoms().iter().map(|(_, u)| u).sum();
    let mut acc = r0 * r0;
    for xi in freqs.xi_plus_f64() {
        let (c, s) = phase_factor(&xi, t.alpha());
        let err = rule.fourier_at(&xi)? - Complex64::new(c, s);
        acc += 2.0 * err.norm_sqr();
    }
    Ok(acc.sqrt())
}

/// [u⁺ columns | u⁻ columns] for one equality row.
fn split_columns(row: &[f64]) -> Vec<f64> {
    row.iter().copied().chain(row.iter().map(|x| -x)).collect()
}

fn cmp_points(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.total_cmp(y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The textbook two-point rule π f(x + 1/4) − π f(x − 1/4) for Ξ⁺ = {1},
/// α = 1, used in examples and tests.
pub fn classic_two_point() -> ShiftRule {
    ShiftRule::new(1, vec![(vec![-0.25], PI), (vec![0.25], -PI)]).expect("static atoms are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freqset::rat;
    use approx::assert_abs_diff_eq;

    fn set1(xi_plus: &[i64]) -> FrequencySet {
        let pts: Vec<Vec<crate::freqset::Rational>> =
            xi_plus.iter().map(|&n| vec![rat(n, 1)]).collect();
        FrequencySet::from_points(1, &pts, true).unwrap()
    }

    #[test]
    fn classic_rule_is_feasible_with_cost_two_pi() {
        let rule = classic_two_point();
        assert_abs_diff_eq!(rule.cost(), 2.0 * PI, epsilon = 1e-12);
        let freqs = set1(&[1]);
        let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
        assert!(rule.residual(&freqs, &t).unwrap() < 1e-12);
        // φ̂(1) = 2πi.
        let v = rule.fourier_at(&[1.0]).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn apply_differentiates_members_of_the_space() {
        let rule = classic_two_point();
        let freqs = set1(&[1]);
        // f = 0.3 + 0.8 cos(2πa) − 0.5·(−sin): f' known in closed form.
        let f = TrigPoly::new(freqs, 0.3, vec![0.8], vec![0.5]).unwrap();
        let df = f.derivative(&[1]).unwrap();
        for &x in &[0.0, 0.1, 0.37, -0.2] {
            assert_abs_diff_eq!(
                rule.apply(&f, &[x]).unwrap(),
                df.eval(&[x]).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn construction_merges_and_drops() {
        let rule = ShiftRule::new(
            1,
            vec![
                (vec![0.25], 1.0),
                (vec![0.25 + 1e-12], 2.0),
                (vec![-0.25], 1e-13),
            ],
        )
        .unwrap();
        assert_eq!(rule.support_size(), 1);
        assert_abs_diff_eq!(rule.atoms()[0].1, 3.0);
    }

    #[test]
    fn merged_opposite_coefficients_cancel() {
        let rule = ShiftRule::new(1, vec![(vec![0.1], 2.0), (vec![0.1], -2.0)]).unwrap();
        assert_eq!(rule.support_size(), 0);
        assert_abs_diff_eq!(rule.cost(), 0.0);
    }

    #[test]
    fn rescale_transplants_feasibility() {
        // Classic rule for Ξ⁺ = {1} → rule for Ξ⁺ = {1/2} via s = 1/2.
        let rule = classic_two_point();
        let t = DerivativeTarget::new(&set1(&[1]), &[1]).unwrap();
        let s = ScalingMap::new(vec![rat(1, 2)]).unwrap();
        let scaled = rule.rescale(&s, &t).unwrap();
        assert_abs_diff_eq!(scaled.cost(), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(scaled.atoms()[0].0[0], -0.5, epsilon = 1e-15);

        let half = FrequencySet::from_points(1, &[vec![rat(1, 2)]], true).unwrap();
        let t_half = DerivativeTarget::new(&half, &[1]).unwrap();
        assert!(scaled.residual(&half, &t_half).unwrap() < 1e-12);
    }

    #[test]
    fn rescale_round_trips() {
        let rule = classic_two_point();
        let t = DerivativeTarget::new(&set1(&[1]), &[1]).unwrap();
        let s = ScalingMap::new(vec![rat(3, 2)]).unwrap();
        let back = rule
            .rescale(&s, &t)
            .unwrap()
            .rescale(&ScalingMap::new(vec![rat(2, 3)]).unwrap(), &t)
            .unwrap();
        assert_eq!(back.support_size(), 2);
        assert_abs_diff_eq!(back.cost(), rule.cost(), epsilon = 1e-12);
        assert_abs_diff_eq!(back.atoms()[0].0[0], -0.25, epsilon = 1e-15);
    }

    #[test]
    fn fixed_support_quarter_points_recover_classic_rule() {
        let freqs = set1(&[1]);
        let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
        let sol =
            solve_fixed_support(&freqs, &t, &[vec![-0.25], vec![0.25]], 1e-9, 1e-7).unwrap();
        assert!(sol.feasible);
        assert_abs_diff_eq!(sol.l2_gap, 0.0);
        assert_abs_diff_eq!(sol.rule.cost(), 2.0 * PI, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.rule.atoms()[0].1, PI, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.rule.atoms()[1].1, -PI, epsilon = 1e-9);
    }

    #[test]
    fn fixed_support_origin_only_is_infeasible_with_known_gap() {
        // A = {0} cannot produce a first derivative; the least-squares gap
        // is √(2)·2π (the target 2πi at ±1 cannot be touched).
        let freqs = set1(&[1]);
        let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
        let sol = solve_fixed_support(&freqs, &t, &[vec![0.0]], 1e-9, 1e-7).unwrap();
        assert!(!sol.feasible);
        assert_abs_diff_eq!(sol.l2_gap, 2.0 * PI * 2.0f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn fixed_support_respects_oversized_supports() {
        // Nine equispaced points admit a feasible rule for Ξ⁺ = {1, 2};
        // the LP vertex keeps the support no larger than the row count.
        let freqs = set1(&[1, 2]);
        let t = DerivativeTarget::new(&freqs, &[1]).unwrap();
        let support: Vec<Vec<f64>> = (0..9).map(|k| vec![-0.5 + k as f64 / 9.0]).collect();
        let sol = solve_fixed_support(&freqs, &t, &support, 1e-9, 1e-7).unwrap();
        assert!(sol.feasible);
        assert!(sol.rule.support_size() <= 5);
        assert!(sol.rule.residual(&freqs, &t).unwrap() <= 1e-8);
    }
}
