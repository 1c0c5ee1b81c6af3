//! Dense two-phase revised simplex.
//!
//! Small by design: the programs this crate generates have at most a few
//! hundred rows (two per separation point) and columns (one per Fourier
//! coefficient or candidate shift), so an explicit B⁻¹ with periodic
//! refactorization is both simple and fast.  What matters here and is less
//! common in textbook implementations:
//!
//! * exact dual multipliers and the active-row basis are part of the
//!   result — optimality certificates are built from them;
//! * Bland's rule by default (termination guarantee), a largest-coefficient
//!   mode for speed;
//! * rows are pre-normalized by their largest entry so tolerances mean the
//!   same thing across badly scaled instances; multipliers are unscaled on
//!   the way out;
//! * redundant equality rows survive phase 1 as artificials parked at
//!   zero; they are pivoted out degenerately whenever a pivot touches
//!   their row, and never re-enter.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering variable; terminates on degenerate programs.
    Bland,
    /// Most negative reduced cost; falls back to Bland when stalling.
    LargestCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Identifies a constraint active at the reported vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowId {
    /// Equality row (always active).
    Eq(usize),
    /// Inequality row with nonbasic slack.
    Ineq(usize),
    /// Sign bound x_j ≥ 0 of a nonnegative variable, active at 0.
    Bound(usize),
}

/// `sense` c·x over {x : eq_lhs·x = eq_rhs, ineq_lhs·x ≤ ineq_rhs,
/// x_j ≥ 0 where nonneg[j]}.  Variables with `nonneg[j] = false` are free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub nonneg: Vec<bool>,
}

/// Solver outcome.
///
/// When `status` is [`LpStatus::Optimal`]:
/// * `primal` is a vertex solution and `value` its objective;
/// * `duals` holds one multiplier per row (equalities first, then
///   inequalities) satisfying c = Σᵢ dualᵢ·rowᵢ together with the reduced
///   costs on active sign bounds, so `value = duals · rhs`; inequality
///   multipliers are ≥ 0 for maximization and ≤ 0 for minimization;
/// * `basis` lists the active rows (including sign bounds) describing the
///   vertex.
///
/// When `status` is [`LpStatus::Unbounded`], `primal` is a feasible point
/// and `ray` an improving direction.
#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub ray: Option<Vec<f64>>,
    pub duals: Vec<f64>,
    pub basis: Vec<RowId>,
}

pub fn solve(lp: &LinearProgram, tol: f64) -> Result<LpResult> {
    solve_with(lp, tol, PivotRule::Bland)
}

pub fn solve_with(lp: &LinearProgram, tol: f64, rule: PivotRule) -> Result<LpResult> {
    validate(lp)?;
    Simplex::build(lp, tol, rule).run(lp)
}

fn validate(lp: &LinearProgram) -> Result<()> {
    let n = lp.objective.len();
    if lp.nonneg.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lp.nonneg.len() });
    }
    if lp.eq_lhs.len() != lp.eq_rhs.len() {
        return Err(Error::DimensionMismatch { expected: lp.eq_lhs.len(), got: lp.eq_rhs.len() });
    }
    if lp.ineq_lhs.len() != lp.ineq_rhs.len() {
        return Err(Error::DimensionMismatch { expected: lp.ineq_lhs.len(), got: lp.ineq_rhs.len() });
    }
    for row in lp.eq_lhs.iter().chain(&lp.ineq_lhs) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    Ok(())
}

/// Standard-form working copy: min c̃·v, A v = b, v ≥ 0, where v stacks
/// split/plain structural variables, slacks, and artificials.
struct Simplex {
    tol: f64,
    rule: PivotRule,
    m: usize,
    cols: Vec<Vec<f64>>,    // dense columns of A
    cost: Vec<f64>,         // phase-2 costs c̃
    b: Vec<f64>,            // ≥ 0 after row conditioning
    row_scale: Vec<f64>,    // original row → scaled: divided by this
    row_flip: Vec<f64>,     // ±1, −1 when the row was negated
    var_of_col: Vec<VarTag>,
    slack_col: Vec<Option<usize>>, // per ineq row
    first_artificial: usize,
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    pivots_since_refactor: usize,
}

#[derive(Debug, Clone, Copy)]
enum VarTag {
    Plain(usize),          // x_j ≥ 0
    Pos(usize),            // positive part of free x_j
    Neg(usize),            // negative part of free x_j
    Slack,                 // slack of an inequality row (index via slack_col)
    Artificial,
}

impl Simplex {
    fn build(lp: &LinearProgram, tol: f64, rule: PivotRule) -> Simplex {
        let n = lp.objective.len();
        let me = lp.eq_lhs.len();
        let mi = lp.ineq_lhs.len();
        let m = me + mi;
        let min_cost: Vec<f64> = match lp.sense {
            Sense::Minimize => lp.objective.clone(),
            Sense::Maximize => lp.objective.iter().map(|c| -c).collect(),
        };

        // Assemble scaled rows: equalities first, then inequalities.
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut row_scale = Vec::with_capacity(m);
        let mut row_flip = Vec::with_capacity(m);
        for (lhs, &rhs) in lp.eq_lhs.iter().zip(&lp.eq_rhs).chain(lp.ineq_lhs.iter().zip(&lp.ineq_rhs)) {
            // Normalize by the largest entry so badly scaled rows compare
            // against one tolerance — but never pull a row that is zero to
            // rounding error up to O(1).  That would promote noise (sin of
            // a multiple of π is not exactly 0.0) into a binding
            // constraint; left alone such a row sits below the pivot
            // threshold and stays inert.
            let raw = lhs.iter().fold(rhs.abs(), |acc, x| acc.max(x.abs()));
            let scale = if raw <= 1e-12 { 1.0 } else { raw };
            rows.push(lhs.iter().map(|x| x / scale).collect());
            b.push(rhs / scale);
            row_scale.push(scale);
            row_flip.push(1.0);
        }

        // Structural columns: plain for x_j ≥ 0, split pair for free x_j.
        let mut cols: Vec<Vec<f64>> = Vec::new();
        let mut cost: Vec<f64> = Vec::new();
        let mut var_of_col: Vec<VarTag> = Vec::new();
        for j in 0..n {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            if lp.nonneg[j] {
                cols.push(col);
                cost.push(min_cost[j]);
                var_of_col.push(VarTag::Plain(j));
            } else {
                cols.push(col.clone());
                cost.push(min_cost[j]);
                var_of_col.push(VarTag::Pos(j));
                cols.push(col.iter().map(|x| -x).collect());
                cost.push(-min_cost[j]);
                var_of_col.push(VarTag::Neg(j));
            }
        }
        // Slack columns for inequality rows.
        let mut slack_col: Vec<Option<usize>> = vec![None; mi];
        for i in 0..mi {
            let mut col = vec![0.0; m];
            col[me + i] = 1.0;
            slack_col[i] = Some(cols.len());
            cols.push(col);
            cost.push(0.0);
            var_of_col.push(VarTag::Slack);
        }
        // Condition rhs ≥ 0 by negating rows.
        for r in 0..m {
            if b[r] < 0.0 {
                b[r] = -b[r];
                row_flip[r] = -1.0;
                for col in cols.iter_mut() {
                    col[r] = -col[r];
                }
            }
        }

        Simplex {
            tol,
            rule,
            m,
            cols,
            cost,
            b,
            row_scale,
            row_flip,
            var_of_col,
            slack_col,
            first_artificial: usize::MAX,
            basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            pivots_since_refactor: 0,
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpResult> {
        let me = lp.eq_lhs.len();
        let mi = lp.ineq_lhs.len();

        // Initial basis: un-negated inequality rows start on their slack;
        // everything else gets an artificial.
        self.first_artificial = self.cols.len();
        let mut needs_artificial = Vec::new();
        self.basis = vec![usize::MAX; self.m];
        for r in 0..self.m {
            let slack_ok = r >= me && self.row_flip[r] > 0.0;
            if slack_ok {
                self.basis[r] = self.slack_col[r - me].unwrap();
            } else {
                needs_artificial.push(r);
            }
        }
        for &r in &needs_artificial {
            let mut col = vec![0.0; self.m];
            col[r] = 1.0;
            self.basis[r] = self.cols.len();
            self.cols.push(col);
            self.cost.push(0.0);
            self.var_of_col.push(VarTag::Artificial);
        }
        self.refactor()?;

        // Phase 1: minimize the sum of artificials.
        if !needs_artificial.is_empty() {
            let phase1_cost: Vec<f64> = self
                .var_of_col
                .iter()
                .map(|t| if matches!(t, VarTag::Artificial) { 1.0 } else { 0.0 })
                .collect();
            let outcome = self.iterate(&phase1_cost, true)?;
            debug_assert!(matches!(outcome, IterateOutcome::Optimal), "phase 1 is bounded below");
            let infeas: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .filter(|(&c, _)| matches!(self.var_of_col[c], VarTag::Artificial))
                .map(|(_, &x)| x.max(0.0))
                .sum();
            if infeas > 10.0 * self.tol * (1.0 + norm_inf(&self.b)) {
                return Ok(LpResult {
                    status: LpStatus::Infeasible,
                    value: 0.0,
                    primal: Vec::new(),
                    ray: None,
                    duals: Vec::new(),
                    basis: Vec::new(),
                });
            }
        }

        // Phase 2 on the real costs; artificials stay parked at zero.
        let cost = self.cost.clone();
        let outcome = self.iterate(&cost, false)?;
        self.refactor()?;
        self.refine_xb();

        match outcome {
            IterateOutcome::Optimal => {}
            IterateOutcome::Unbounded { entering } => {
                let (primal, _) = self.extract_primal(lp);
                let ray = self.extract_ray(lp, entering);
                let value = match lp.sense {
                    Sense::Maximize => f64::INFINITY,
                    Sense::Minimize => f64::NEG_INFINITY,
                };
                return Ok(LpResult {
                    status: LpStatus::Unbounded,
                    value,
                    primal,
                    ray: Some(ray),
                    duals: Vec::new(),
                    basis: Vec::new(),
                });
            }
        }

        let (primal, value) = self.extract_primal(lp);
        let y = self.dual_multipliers(&cost);
        // Map standard-form multipliers back: undo row negation/scaling,
        // then the Min(−c) detour for maximization problems.
        let sense_flip = match lp.sense {
            Sense::Maximize => -1.0,
            Sense::Minimize => 1.0,
        };
        let duals: Vec<f64> = (0..self.m)
            .map(|r| sense_flip * self.row_flip[r] * y[r] / self.row_scale[r])
            .collect();
        let mut basis_rows: Vec<RowId> = (0..me).map(RowId::Eq).collect();
        let in_basis: std::collections::HashSet<usize> = self.basis.iter().copied().collect();
        for i in 0..mi {
            if let Some(sc) = self.slack_col[i] {
                if !in_basis.contains(&sc) {
                    basis_rows.push(RowId::Ineq(i));
                }
            }
        }
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            if nn {
                let col = self
                    .var_of_col
                    .iter()
                    .position(|t| matches!(t, VarTag::Plain(v) if *v == j))
                    .expect("plain column exists");
                if !in_basis.contains(&col) {
                    basis_rows.push(RowId::Bound(j));
                }
            }
        }

        Ok(LpResult {
            status: LpStatus::Optimal,
            value,
            primal,
            ray: None,
            duals,
            basis: basis_rows,
        })
    }

    /// Runs simplex iterations under the given cost vector.  During phase 1
    /// (`allow_artificials`) artificial columns may price; afterwards they
    /// are barred from entering.  Basic artificials parked at zero leave
    /// degenerately the moment a pivot column touches their row.
    fn iterate(&mut self, cost: &[f64], allow_artificials: bool) -> Result<IterateOutcome> {
        let price_tol = self.tol * (1.0 + norm_inf(cost));
        let cap = 2000 + 200 * (self.m + self.cols.len());
        let mut bland = matches!(self.rule, PivotRule::Bland);
        let mut stall = 0usize;
        let mut last_obj = f64::INFINITY;
        for _ in 0..cap {
            // Incremental x_B updates drift on ill-conditioned bases (nearly
            // parallel cut rows) and a drifted ratio test walks the method
            // out of the feasible region.  One O(m²) resolve per iteration
            // keeps x_B consistent with B⁻¹.
            self.xb = self.mat_vec(&self.b);
            self.refine_xb();
            for x in &mut self.xb {
                if *x < 0.0 && *x > -100.0 * self.tol {
                    *x = 0.0;
                }
            }
            let y = self.btran(cost);
            // Pricing.
            let mut entering: Option<usize> = None;
            let mut best = -price_tol;
            for j in 0..self.cols.len() {
                if self.basis.contains(&j) {
                    continue;
                }
                if !allow_artificials && matches!(self.var_of_col[j], VarTag::Artificial) {
                    continue;
                }
                // The mate of a basic split column never enters: its column
                // is the exact negation of one already in B, so its true
                // reduced cost is 0 — a favorable price is B⁻¹ drift, and
                // admitting it would make the basis singular.
                if let Some(mate) = self.mate_col(j) {
                    if self.basis.contains(&mate) {
                        continue;
                    }
                }
                let d = cost[j] - dot(&y, &self.cols[j]);
                if d < best {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    best = d;
                    entering = Some(j);
                }
            }
            let Some(j) = entering else {
                return Ok(IterateOutcome::Optimal);
            };

            let w = self.ftran(&self.cols[j].clone());

            // Degenerate exit of a parked artificial whose row the pivot
            // column touches — keeps them at zero forever after.
            let artificial_leave = (0..self.m).find(|&r| {
                matches!(self.var_of_col[self.basis[r]], VarTag::Artificial)
                    && self.xb[r].abs() <= self.tol
                    && w[r].abs() > self.tol
                    && !allow_artificials
            });

            let leave = if let Some(r) = artificial_leave {
                Some(r)
            } else {
                // Two-pass (Harris) ratio test.  Pass 1 bounds the step with
                // a feasibility slack so rows with tiny positive w still
                // block large steps instead of being driven negative; pass 2
                // picks the numerically largest pivot among qualifying rows,
                // smallest basis column on near-ties.
                let piv_eps = 0.01 * self.tol;
                let feas_slack = self.tol * (1.0 + norm_inf(&self.b));
                let mut step_bound = f64::INFINITY;
                for r in 0..self.m {
                    if w[r] > piv_eps {
                        step_bound = step_bound.min((self.xb[r].max(0.0) + feas_slack) / w[r]);
                    }
                }
                let mut leave: Option<usize> = None;
                if step_bound.is_finite() {
                    let qualifies =
                        |r: usize| w[r] > piv_eps && self.xb[r].max(0.0) / w[r] <= step_bound;
                    let w_max = (0..self.m)
                        .filter(|&r| qualifies(r))
                        .map(|r| w[r])
                        .fold(0.0f64, f64::max);
                    leave = (0..self.m)
                        .filter(|&r| qualifies(r) && w[r] >= 0.5 * w_max)
                        .min_by_key(|&r| self.basis[r]);
                }
                leave
            };

            let Some(r) = leave else {
                return Ok(IterateOutcome::Unbounded { entering: j });
            };

            self.pivot(r, j, &w)?;

            // Largest-coefficient mode: monitor the objective and switch to
            // Bland if a long degenerate stretch suggests cycling.
            if !bland {
                let obj = dot_indexed(cost, &self.basis, &self.xb);
                if obj < last_obj - price_tol {
                    stall = 0;
                } else {
                    stall += 1;
                    if stall > 4 * (self.m + 1) {
                        bland = true;
                    }
                }
                last_obj = obj;
            }
        }
        Err(Error::NumericalBreakdown(format!("simplex iteration cap {cap} exceeded")))
    }

    /// The other half of a split free variable (built adjacently), if any.
    fn mate_col(&self, j: usize) -> Option<usize> {
        match self.var_of_col[j] {
            VarTag::Pos(_) => Some(j + 1),
            VarTag::Neg(_) => Some(j - 1),
            _ => None,
        }
    }

    fn pivot(&mut self, r: usize, j: usize, w: &[f64]) -> Result<()> {
        let piv = w[r];
        if piv.abs() <= self.tol {
            return Err(Error::NumericalBreakdown("vanishing pivot element".into()));
        }
        let ratio = self.xb[r].max(0.0) / piv;
        for i in 0..self.m {
            if i != r {
                self.xb[i] -= w[i] * ratio;
                if self.xb[i] < 0.0 && self.xb[i] > -10.0 * self.tol {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = ratio;
        let pivot_row = std::mem::take(&mut self.binv[r]);
        let scaled: Vec<f64> = pivot_row.iter().map(|x| x / piv).collect();
        for i in 0..self.m {
            if i != r && w[i] != 0.0 {
                let f = w[i];
                for (bi, s) in self.binv[i].iter_mut().zip(&scaled) {
                    *bi -= f * s;
                }
            }
        }
        self.binv[r] = scaled;
        self.basis[r] = j;
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= 64 {
            self.refactor()?;
        }
        Ok(())
    }

    /// Rebuilds B⁻¹ and x_B from scratch off the current basis.
    fn refactor(&mut self) -> Result<()> {
        if self.m == 0 {
            self.binv = Vec::new();
            self.xb = Vec::new();
            return Ok(());
        }
        let bmat: Vec<Vec<f64>> = (0..self.m)
            .map(|r| (0..self.m).map(|c| self.cols[self.basis[c]][r]).collect())
            .collect();
        self.binv = crate::linalg::invert(&bmat)
            .ok_or_else(|| Error::NumericalBreakdown("singular basis on refactorization".into()))?;
        self.xb = self.mat_vec(&self.b);
        for x in &mut self.xb {
            if *x < 0.0 && *x > -100.0 * self.tol {
                *x = 0.0;
            }
        }
        self.pivots_since_refactor = 0;
        Ok(())
    }

    /// One step of iterative refinement on B x_B = b.
    fn refine_xb(&mut self) {
        if self.m == 0 {
            return;
        }
        let mut res = self.b.clone();
        for (c, &col_idx) in self.basis.iter().enumerate() {
            let col = &self.cols[col_idx];
            let x = self.xb[c];
            if x != 0.0 {
                for r in 0..self.m {
                    res[r] -= col[r] * x;
                }
            }
        }
        let corr = self.mat_vec(&res);
        for (x, c) in self.xb.iter_mut().zip(&corr) {
            *x += c;
        }
    }

    /// y = B⁻ᵀ c_B, refined once — the row multipliers of the scaled system.
    fn dual_multipliers(&self, cost: &[f64]) -> Vec<f64> {
        if self.m == 0 {
            return Vec::new();
        }
        let cb: Vec<f64> = self.basis.iter().map(|&c| cost[c]).collect();
        let mut y = self.btran_vec(&cb);
        // Refinement: r = c_B − Bᵀ y, y += B⁻ᵀ r.
        let res: Vec<f64> = (0..self.m)
            .map(|c| cb[c] - dot(&self.cols[self.basis[c]], &y))
            .collect();
        let corr = self.btran_vec(&res);
        for (yi, c) in y.iter_mut().zip(&corr) {
            *yi += c;
        }
        y
    }

    fn btran(&self, cost: &[f64]) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&c| cost[c]).collect();
        self.btran_vec(&cb)
    }

    /// yᵀ = cbᵀ B⁻¹ (i.e. y = B⁻ᵀ cb).
    fn btran_vec(&self, cb: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (r, &cbr) in cb.iter().enumerate() {
            if cbr != 0.0 {
                for (yc, bi) in y.iter_mut().zip(&self.binv[r]) {
                    *yc += cbr * bi;
                }
            }
        }
        y
    }

    /// w = B⁻¹ a.
    fn ftran(&self, a: &[f64]) -> Vec<f64> {
        self.mat_vec(a)
    }

    fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        self.binv.iter().map(|row| dot(row, v)).collect()
    }

    /// Maps the standard-form basic solution back to original variables.
    fn extract_primal(&self, lp: &LinearProgram) -> (Vec<f64>, f64) {
        let n = lp.objective.len();
        let mut x = vec![0.0; n];
        for (r, &c) in self.basis.iter().enumerate() {
            match self.var_of_col[c] {
                VarTag::Plain(j) | VarTag::Pos(j) => x[j] += self.xb[r],
                VarTag::Neg(j) => x[j] -= self.xb[r],
                VarTag::Slack | VarTag::Artificial => {}
            }
        }
        let value = dot(&lp.objective, &x);
        (x, value)
    }

    /// The improving ray for an unbounded program: entering column moves
    /// +1, basic variables move −w.
    fn extract_ray(&self, lp: &LinearProgram, entering: usize) -> Vec<f64> {
        let n = lp.objective.len();
        let mut ray = vec![0.0; n];
        match self.var_of_col[entering] {
            VarTag::Plain(j) | VarTag::Pos(j) => ray[j] += 1.0,
            VarTag::Neg(j) => ray[j] -= 1.0,
            _ => {}
        }
        let w = self.binv.iter().map(|row| dot(row, &self.cols[entering])).collect::<Vec<_>>();
        for (r, &c) in self.basis.iter().enumerate() {
            match self.var_of_col[c] {
                VarTag::Plain(j) | VarTag::Pos(j) => ray[j] -= w[r],
                VarTag::Neg(j) => ray[j] += w[r],
                VarTag::Slack | VarTag::Artificial => {}
            }
        }
        ray
    }
}

enum IterateOutcome {
    Optimal,
    Unbounded { entering: usize },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_indexed(cost: &[f64], basis: &[usize], xb: &[f64]) -> f64 {
    basis.iter().zip(xb).map(|(&c, &x)| cost[c] * x).sum()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-9;

    fn lp(sense: Sense, objective: Vec<f64>, nonneg: Vec<bool>) -> LinearProgram {
        LinearProgram {
            sense,
            objective,
            eq_lhs: vec![],
            eq_rhs: vec![],
            ineq_lhs: vec![],
            ineq_rhs: vec![],
            nonneg,
        }
    }

    #[test]
    fn bounded_single_variable() {
        // max x s.t. x ≤ 1, x ≥ 0.
        let mut p = lp(Sense::Maximize, vec![1.0], vec![true]);
        p.ineq_lhs = vec![vec![1.0]];
        p.ineq_rhs = vec![1.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.primal[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        assert_eq!(r.basis, vec![RowId::Ineq(0)]);
        // Stationarity c = λ·row and value = duals·rhs.
        assert_abs_diff_eq!(r.duals[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn unconstrained_direction_is_unbounded() {
        let p = lp(Sense::Maximize, vec![1.0], vec![true]);
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let ray = r.ray.unwrap();
        assert_abs_diff_eq!(ray[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        // x ≤ 0 together with x ≥ 1.
        let mut p = lp(Sense::Maximize, vec![1.0], vec![false]);
        p.ineq_lhs = vec![vec![1.0], vec![-1.0]];
        p.ineq_rhs = vec![0.0, -1.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_system_with_free_variables() {
        // min x + y s.t. x + 2y = 4, x − y = 1 → (2, 1), value 3.
        let mut p = lp(Sense::Minimize, vec![1.0, 1.0], vec![false, false]);
        p.eq_lhs = vec![vec![1.0, 2.0], vec![1.0, -1.0]];
        p.eq_rhs = vec![4.0, 1.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.primal[0], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.primal[1], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.value, 3.0, epsilon = 1e-10);
        // duals·rhs = value even with free variables.
        let dv: f64 = r.duals.iter().zip(&[4.0, 1.0]).map(|(d, b)| d * b).sum();
        assert_abs_diff_eq!(dv, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn duals_satisfy_stationarity_and_sign() {
        // max 2x + y s.t. x + y ≤ 3, x ≤ 2; x, y ≥ 0 → (2, 1), value 5.
        let mut p = lp(Sense::Maximize, vec![2.0, 1.0], vec![true, true]);
        p.ineq_lhs = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        p.ineq_rhs = vec![3.0, 2.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 5.0, epsilon = 1e-10);
        // c = λ₁(1,1) + λ₂(1,0) → λ = (1, 1), both ≥ 0 (maximization).
        assert_abs_diff_eq!(r.duals[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.duals[1], 1.0, epsilon = 1e-9);
        let dv: f64 = r.duals.iter().zip(&[3.0, 2.0]).map(|(d, b)| d * b).sum();
        assert_abs_diff_eq!(dv, r.value, epsilon = 1e-9);
    }

    #[test]
    fn minimization_duals_are_nonpositive() {
        // min x s.t. −x ≤ −1 → x = 1, λ = −1.
        let mut p = lp(Sense::Minimize, vec![1.0], vec![true]);
        p.ineq_lhs = vec![vec![-1.0]];
        p.ineq_rhs = vec![-1.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.duals[0], -1.0, epsilon = 1e-9);
    }

    #[test]
    fn redundant_equality_rows_are_tolerated() {
        // x + y = 2 stated twice; min x → (0, 2).
        let mut p = lp(Sense::Minimize, vec![1.0, 0.0], vec![true, true]);
        p.eq_lhs = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        p.eq_rhs = vec![2.0, 2.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.primal[1], 2.0, epsilon = 1e-10);
        let dv: f64 = r.duals.iter().zip(&[2.0, 2.0]).map(|(d, b)| d * b).sum();
        assert_abs_diff_eq!(dv, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn badly_scaled_rows_are_normalized() {
        // 10⁶(x + y) = 2·10⁶ alongside x − y = 0 → (1, 1).
        let mut p = lp(Sense::Minimize, vec![1.0, 1.0], vec![true, true]);
        p.eq_lhs = vec![vec![1e6, 1e6], vec![1.0, -1.0]];
        p.eq_rhs = vec![2e6, 0.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.primal[0], 1.0, epsilon = 1e-9);
        let dv: f64 = r.duals.iter().zip(&[2e6, 0.0]).map(|(d, b)| d * b).sum();
        assert_abs_diff_eq!(dv, r.value, epsilon = 1e-6);
    }

    #[test]
    fn noise_null_rows_stay_inert() {
        // The third row is pure rounding noise (a sine evaluated at a
        // multiple of π).  Normalizing it up to O(1) would read it as
        // x = 0 and declare the system infeasible; left below the noise
        // floor it must not disturb x = y = 2π².
        let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        let mut p = lp(Sense::Minimize, vec![1.0, 1.0], vec![true, true]);
        p.eq_lhs = vec![
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
            vec![-f64::sin(-std::f64::consts::PI), 0.0],
        ];
        p.eq_rhs = vec![0.0, -2.0 * two_pi_sq, 0.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.primal[0], two_pi_sq, epsilon = 1e-8);
        assert_abs_diff_eq!(r.primal[1], two_pi_sq, epsilon = 1e-8);
        // A null row with a meaningful rhs is a real contradiction, not
        // noise — that one must still come back infeasible.
        p.eq_rhs[2] = 1.0;
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn pivot_rules_agree_on_the_optimum() {
        let mut p = lp(Sense::Maximize, vec![3.0, 1.0, 2.0], vec![true, true, true]);
        p.ineq_lhs = vec![
            vec![1.0, 1.0, 3.0],
            vec![2.0, 2.0, 5.0],
            vec![4.0, 1.0, 2.0],
        ];
        p.ineq_rhs = vec![30.0, 24.0, 36.0];
        let a = solve_with(&p, TOL, PivotRule::Bland).unwrap();
        let b = solve_with(&p, TOL, PivotRule::LargestCoefficient).unwrap();
        assert_eq!(a.status, LpStatus::Optimal);
        assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-9);
        assert_abs_diff_eq!(a.value, 28.0, epsilon = 1e-9); // classic LP, optimum 28
    }

    #[test]
    fn degenerate_vertex_terminates_under_bland() {
        // Three planes through one vertex; Bland must not cycle.
        let mut p = lp(Sense::Maximize, vec![1.0, 1.0], vec![true, true]);
        p.ineq_lhs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        p.ineq_rhs = vec![1.0, 1.0, 2.0];
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn empty_program_is_optimal_at_zero() {
        let p = lp(Sense::Minimize, vec![1.0], vec![true]);
        let r = solve(&p, TOL).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 0.0);
        assert_eq!(r.basis, vec![RowId::Bound(0)]);
    }
}
