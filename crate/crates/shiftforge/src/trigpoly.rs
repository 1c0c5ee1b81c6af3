//! Real trigonometric polynomials over a frequency set.
//!
//! Writing b_ξ = (x_ξ + i y_ξ)/2 for the canonical half Ξ⁺ turns
//! f(a) = Σ_{ξ∈Ξ} b_ξ e^{2πi ξ·a} into the real *sine–cosine form*
//!
//! > f(a) = c₀ + Σ_{ξ∈Ξ⁺} x_ξ cos(2π ξ·a) − y_ξ sin(2π ξ·a),
//!
//! which is the coordinate system the dual linear programs optimize in.
//! Differentiation acts on each harmonic as multiplication by
//! (2πi ξ)^α = ∏_j (2πi ξ_j)^{α_j}, a rotate-and-scale of (x_ξ, y_ξ).

use crate::error::{Error, Result};
use crate::freqset::{ratio_to_f64, FrequencySet};
use crate::linalg;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Real and imaginary parts of (2πi ξ)^α.
///
/// With k = |α| = Σ α_j the factor is (2π)ᵏ ∏_j ξ_j^{α_j} · iᵏ, so the
/// result lands on an axis: k ≡ 0 (mod 4) → (+m, 0), k ≡ 1 → (0, +m),
/// k ≡ 2 → (−m, 0), k ≡ 3 → (0, −m).
pub fn phase_factor(xi: &[f64], alpha: &[u32]) -> (f64, f64) {
    debug_assert_eq!(xi.len(), alpha.len());
    let order: u32 = alpha.iter().sum();
    let mut m = (2.0 * PI).powi(order as i32);
    for (&x, &a) in xi.iter().zip(alpha) {
        m *= x.powi(a as i32);
    }
    match order % 4 {
        0 => (m, 0.0),
        1 => (0.0, m),
        2 => (-m, 0.0),
        _ => (0.0, -m),
    }
}

/// A differentiation order α together with the per-frequency targets
/// (c_ξ, s_ξ) = (Re, Im) of (2πi ξ)^α over a frequency set's canonical
/// half.  These are the right-hand sides of the shift-rule equations
/// φ̂(ξ) = (2πi ξ)^α; the implicit target at ξ = 0 is 0, which becomes the
/// Σ_a u_a = 0 row.
#[derive(Debug, Clone)]
pub struct DerivativeTarget {
    alpha: Vec<u32>,
    targets: Vec<(f64, f64)>,
}

impl DerivativeTarget {
    /// Builds the target for ∂^α over `freqs`.  Every α_j must be ≥ 1 (a
    /// coordinate not being differentiated should not be a coordinate of
    /// the problem) and α must match the set's dimension.
    pub fn new(freqs: &FrequencySet, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != freqs.dim() {
            return Err(Error::DimensionMismatch { expected: freqs.dim(), got: alpha.len() });
        }
        if alpha.iter().any(|&a| a == 0) {
            return Err(Error::InvalidInput(
                "every component of alpha must be >= 1; drop unused coordinates instead".into(),
            ));
        }
        let targets = freqs
            .xi_plus_f64()
            .iter()
            .map(|xi| phase_factor(xi, alpha))
            .collect();
        Ok(DerivativeTarget { alpha: alpha.to_vec(), targets })
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// |α| — the total differentiation order.
    pub fn order(&self) -> u32 {
        self.alpha.iter().sum()
    }

    /// (c_ξ, s_ξ) aligned with the `xi_plus` order of the frequency set
    /// this target was built from.
    pub fn targets(&self) -> &[(f64, f64)] {
        &self.targets
    }
}

/// Controls for the certified global-extrema search.
#[derive(Debug, Clone)]
pub struct ExtremaConfig {
    /// Multiplies the base grid density 32·M_j + 17 per axis; the solver
    /// doubles this when a separation step stalls.
    pub grid_multiplier: u32,
    /// Newton iteration cap per candidate.
    pub newton_steps: usize,
    /// How many best grid minima/maxima are polished by Newton.
    pub candidates: usize,
    /// Gradient norm at which Newton declares convergence.
    pub grad_tol: f64,
}

impl Default for ExtremaConfig {
    fn default() -> Self {
        ExtremaConfig { grid_multiplier: 1, newton_steps: 50, candidates: 5, grad_tol: 1e-12 }
    }
}

/// Outcome of a global-extrema search over the period cell [−1/2, 1/2)ᵈ.
#[derive(Debug, Clone)]
pub struct ExtremaReport {
    pub argmin: Vec<f64>,
    pub minval: f64,
    pub argmax: Vec<f64>,
    pub maxval: f64,
    /// Largest per-axis grid point count used for the scan.
    pub grid_resolution: usize,
    /// Whether the reported extrema came out of a converged Newton polish
    /// (rather than raw grid points).
    pub refined: bool,
}

/// A real trigonometric polynomial in sine–cosine form over a fixed
/// frequency set.  Immutable; all operations return new values.
#[derive(Debug, Clone)]
pub struct TrigPoly {
    freqs: FrequencySet,
    c0: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    xi: Vec<Vec<f64>>, // xi_plus as f64, cached for evaluation
}

impl TrigPoly {
    /// Builds f = c₀ + Σ x_ξ cos(2π ξ·a) − y_ξ sin(2π ξ·a) with
    /// coefficient vectors aligned to `freqs.xi_plus()`.
    pub fn new(freqs: FrequencySet, c0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        let n = freqs.xi_plus().len();
        if cos_coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: cos_coeffs.len() });
        }
        if sin_coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sin_coeffs.len() });
        }
        let xi = freqs.xi_plus_f64();
        Ok(TrigPoly { freqs, c0, xs: cos_coeffs, ys: sin_coeffs, xi })
    }

    pub fn zero(freqs: FrequencySet) -> Self {
        Self::constant(freqs, 0.0)
    }

    pub fn constant(freqs: FrequencySet, c0: f64) -> Self {
        let n = freqs.xi_plus().len();
        TrigPoly::new(freqs, c0, vec![0.0; n], vec![0.0; n]).expect("lengths match by construction")
    }

    /// Draws Gaussian coefficients with the given seed and rescales so the
    /// sup norm equals `sup_bound` — the generator behind randomized
    /// duality experiments.  Requires dim ≤ 3 (the sup norm is measured).
    pub fn random_in_space(freqs: &FrequencySet, seed: u64, sup_bound: f64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = freqs.xi_plus().len();
        let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
        let c0 = draw();
        let xs: Vec<f64> = (0..n).map(|_| draw()).collect();
        let ys: Vec<f64> = (0..n).map(|_| draw()).collect();
        let f = TrigPoly::new(freqs.clone(), c0, xs, ys)?;
        let m = f.sup_norm(&ExtremaConfig::default())?;
        if m == 0.0 {
            return Ok(f);
        }
        let k = sup_bound / m;
        TrigPoly::new(freqs.clone(), f.c0 * k, scale(&f.xs, k), scale(&f.ys, k))
    }

    pub fn freqs(&self) -> &FrequencySet {
        &self.freqs
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.xs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.ys
    }

    /// Evaluates f at a point of matching dimension.
    pub fn eval(&self, a: &[f64]) -> Result<f64> {
        if a.len() != self.freqs.dim() {
            return Err(Error::DimensionMismatch { expected: self.freqs.dim(), got: a.len() });
        }
        Ok(self.eval_unchecked(a))
    }

    pub(crate) fn eval_unchecked(&self, a: &[f64]) -> f64 {
        let mut v = self.c0;
        for (k, xi) in self.xi.iter().enumerate() {
            let t = 2.0 * PI * dot(xi, a);
            v += self.xs[k] * t.cos() - self.ys[k] * t.sin();
        }
        v
    }

    /// ∂^α f as a polynomial over the same frequency set.  Each harmonic's
    /// b_ξ picks up the factor (2πi ξ)^α, i.e. (x, y) ↦ (cx − sy, sx + cy)
    /// with (c, s) = phase_factor(ξ, α).  Zeros in α are allowed here (a
    /// plain partial in one coordinate of a multivariate f).
    pub fn derivative(&self, alpha: &[u32]) -> Result<TrigPoly> {
        if alpha.len() != self.freqs.dim() {
            return Err(Error::DimensionMismatch { expected: self.freqs.dim(), got: alpha.len() });
        }
        let order: u32 = alpha.iter().sum();
        let mut xs = Vec::with_capacity(self.xs.len());
        let mut ys = Vec::with_capacity(self.ys.len());
        for (k, xi) in self.xi.iter().enumerate() {
            let (c, s) = phase_factor(xi, alpha);
            xs.push(c * self.xs[k] - s * self.ys[k]);
            ys.push(s * self.xs[k] + c * self.ys[k]);
        }
        let c0 = if order == 0 { self.c0 } else { 0.0 };
        TrigPoly::new(self.freqs.clone(), c0, xs, ys)
    }

    /// (−∂)^α f(0) = Σ_{ξ∈Ξ⁺} c_ξ x_ξ + s_ξ y_ξ — the objective the dual
    /// problem maximizes.  Computed from this polynomial's own frequencies
    /// and the target's α, so it is valid whichever set `t` was built from.
    pub fn neg_deriv_at_zero(&self, t: &DerivativeTarget) -> Result<f64> {
        if t.alpha().len() != self.freqs.dim() {
            return Err(Error::DimensionMismatch { expected: self.freqs.dim(), got: t.alpha().len() });
        }
        let mut v = 0.0;
        for (k, xi) in self.xi.iter().enumerate() {
            let (c, s) = phase_factor(xi, t.alpha());
            v += c * self.xs[k] + s * self.ys[k];
        }
        Ok(v)
    }

    /// max(|minval|, |maxval|) over the period cell.
    pub fn sup_norm(&self, cfg: &ExtremaConfig) -> Result<f64> {
        let rep = self.global_extrema_any(cfg)?;
        Ok(rep.minval.abs().max(rep.maxval.abs()))
    }

    /// Certified global extrema over the period cell [−1/2, 1/2)ᵈ:
    /// dense-grid scan (32·M_j + 17 points per axis, scaled by the config
    /// multiplier) followed by damped Newton polish of the best candidates.
    ///
    /// Requires an integral frequency set — rescale first — and dim ≤ 3.
    pub fn global_extrema(&self, cfg: &ExtremaConfig) -> Result<ExtremaReport> {
        if !self.freqs.is_integral() {
            return Err(Error::NonIntegralFrequencies);
        }
        self.global_extrema_any(cfg)
    }

    /// Extrema for possibly non-integral sets, used where the caller holds
    /// a rational set: values are invariant under coordinate rescaling, so
    /// the scan runs on the integral form and arguments map back.
    fn global_extrema_any(&self, cfg: &ExtremaConfig) -> Result<ExtremaReport> {
        let d = self.freqs.dim();
        if d > 3 {
            return Err(Error::UnsupportedDimension { dim: d });
        }
        if self.freqs.is_integral() {
            return Ok(self.extrema_integral(cfg));
        }
        let (scaled, map) = self.freqs.scale_to_integers();
        let g = TrigPoly::new(scaled, self.c0, self.xs.clone(), self.ys.clone())?;
        let mut rep = g.extrema_integral(cfg);
        // g(y) = f(s ∘ y): same value range, arguments map back via a = s ∘ y.
        for j in 0..d {
            rep.argmin[j] *= map.factor_f64(j);
            rep.argmax[j] *= map.factor_f64(j);
        }
        Ok(rep)
    }

    fn extrema_integral(&self, cfg: &ExtremaConfig) -> ExtremaReport {
        let d = self.freqs.dim();
        let mult = cfg.grid_multiplier.max(1) as usize;
        let counts: Vec<usize> = (0..d)
            .map(|j| {
                let m = ratio_to_f64(&self.freqs.max_coord(j)).round() as usize;
                32 * mult * m + 17
            })
            .collect();
        let mut lo = CandidateHeap::new(cfg.candidates, false);
        let mut hi = CandidateHeap::new(cfg.candidates, true);
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0; d];
        loop {
            for j in 0..d {
                point[j] = -0.5 + idx[j] as f64 / counts[j] as f64;
            }
            let v = self.eval_unchecked(&point);
            lo.offer(v, &point);
            hi.offer(v, &point);
            // Odometer over the tensor grid.
            let mut j = d;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < counts[j] {
                    break;
                }
                idx[j] = 0;
                if j == 0 {
                    j = usize::MAX;
                    break;
                }
            }
            if j == usize::MAX {
                break;
            }
        }
        let (minval, argmin, min_refined) = self.polish(&lo, -1.0, cfg);
        let (maxval, argmax, max_refined) = self.polish(&hi, 1.0, cfg);
        ExtremaReport {
            argmin,
            minval,
            argmax,
            maxval,
            grid_resolution: counts.iter().copied().max().unwrap_or(0),
            refined: min_refined || max_refined,
        }
    }

    /// Newton-polishes the candidate list; `sigma` = +1 maximizes, −1
    /// minimizes.  Returns (value, argument, came-from-converged-Newton).
    fn polish(&self, cands: &CandidateHeap, sigma: f64, cfg: &ExtremaConfig) -> (f64, Vec<f64>, bool) {
        let mut best_v = f64::NEG_INFINITY;
        let mut best_a = Vec::new();
        let mut best_refined = false;
        for (v0, a0) in &cands.items {
            let mut a = a0.clone();
            let mut v = *v0;
            let mut converged = false;
            for _ in 0..cfg.newton_steps {
                let (_, g, h) = self.eval_with_derivs(&a);
                let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if gnorm <= cfg.grad_tol {
                    converged = true;
                    break;
                }
                let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
                let Some(step) = linalg::solve_square(&h, &rhs) else { break };
                // Damp until the step improves σ·f; give up below 2⁻²⁰.
                let mut lambda = 1.0;
                let mut moved = false;
                while lambda > 1e-6 {
                    let trial: Vec<f64> = a.iter().zip(&step).map(|(ai, si)| ai + lambda * si).collect();
                    let tv = self.eval_unchecked(&trial);
                    if sigma * tv > sigma * v {
                        a = trial;
                        v = tv;
                        moved = true;
                        break;
                    }
                    lambda *= 0.5;
                }
                if !moved {
                    // Stationary to float precision counts as converged.
                    converged = gnorm <= 1e-8 * (1.0 + v.abs());
                    break;
                }
            }
            if sigma * v > sigma * best_v || best_a.is_empty() {
                best_v = v;
                best_a = a.iter().map(|&ai| wrap_half(ai)).collect();
                best_refined = converged && sigma * v > sigma * *v0;
            }
        }
        (best_v, best_a, best_refined)
    }

    /// One-pass value, gradient, and Hessian.
    pub(crate) fn eval_with_derivs(&self, a: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let d = a.len();
        let mut v = self.c0;
        let mut g = vec![0.0; d];
        let mut h = vec![vec![0.0; d]; d];
        let tau = 2.0 * PI;
        for (k, xi) in self.xi.iter().enumerate() {
            let t = tau * dot(xi, a);
            let (s, c) = t.sin_cos();
            let even = self.xs[k] * c - self.ys[k] * s; // contributes to f, −h
            let odd = self.xs[k] * s + self.ys[k] * c; // contributes to −g
            v += even;
            for j in 0..d {
                g[j] -= tau * xi[j] * odd;
                for l in 0..d {
                    h[j][l] -= tau * tau * xi[j] * xi[l] * even;
                }
            }
        }
        (v, g, h)
    }
}

/// Keeps the `cap` best (value, point) pairs seen; `take_max` keeps the
/// largest values, otherwise the smallest.
struct CandidateHeap {
    cap: usize,
    take_max: bool,
    items: Vec<(f64, Vec<f64>)>, // best first
}

impl CandidateHeap {
    fn new(cap: usize, take_max: bool) -> Self {
        CandidateHeap { cap: cap.max(1), take_max, items: Vec::new() }
    }

    fn offer(&mut self, v: f64, point: &[f64]) {
        let better = |a: f64, b: f64| if self.take_max { a > b } else { a < b };
        if self.items.len() == self.cap && !better(v, self.items[self.cap - 1].0) {
            return;
        }
        let pos = self.items.iter().position(|(w, _)| better(v, *w)).unwrap_or(self.items.len());
        self.items.insert(pos, (v, point.to_vec()));
        self.items.truncate(self.cap);
    }
}

/// Wraps into the canonical period cell [−1/2, 1/2).
fn wrap_half(a: f64) -> f64 {
    let w = a - a.round();
    if w >= 0.5 {
        w - 1.0
    } else if w < -0.5 {
        w + 1.0
    } else {
        w
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scale(v: &[f64], k: f64) -> Vec<f64> {
    v.iter().map(|x| x * k).collect()
}
