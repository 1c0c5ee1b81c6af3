//! Dense quantum-expectation simulator.
//!
//! Builds expectation-value functions f(x) = tr(μ ℰ(x)(ρ₀)) of small
//! parameterized circuits as exact trigonometric polynomials.  Each layer
//! evolves by U_j(x_j) = e^{2πi x_j H_j}; spectral decomposition of H_j
//! turns the conjugation into a finite sum of harmonics,
//!
//! >  Σ_{λ,λ'} e^{2πi(λ'−λ)x_j} · P_λ M P_{λ'},
//!
//! so chaining layers yields coefficients tagged by frequency vectors
//! ν ∈ ∏_j Diff Spec(H_j).  Eigenvalue differences are snapped to small
//! rationals (test Hamiltonians have rational spectra; snapping absorbs
//! eigensolver noise), which makes the result a [`TrigPoly`] over an exact
//! rational frequency set — the same objects the optimizer consumes.
//!
//! The module also provides the shot-noise Monte Carlo that backs the
//! "cost = worst-case standard deviation" reading of Σ|u_a|: every circuit
//! query returns ±1 with mean f(y), shots are allocated across the rule's
//! support ∝ |u_a|·σ_a, and the empirical spread over repetitions is
//! compared against cost/√N.

use crate::error::{Error, Result};
use crate::freqset::{FrequencySet, Rational};
use crate::shiftrule::ShiftRule;
use crate::trigpoly::{ExtremaConfig, TrigPoly};
use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use std::collections::BTreeMap;

/// Hard cap on operator dimension; the simulator is a desk-scale oracle,
/// not a statevector engine.
pub const DIM_LIMIT: usize = 16;

/// Largest denominator accepted when snapping eigenvalue differences.
pub const SNAP_MAX_DEN: i64 = 64;

/// Number of independent repetitions behind `shot_noise_estimate`'s
/// empirical standard deviation.
pub const REPETITIONS: usize = 200;

type CMat = Vec<Vec<Complex64>>;

/// A dense Hermitian operator (Hamiltonian, observable, or density
/// matrix, depending on role).
#[derive(Debug, Clone)]
pub struct HermitianOp {
    dim: usize,
    entries: CMat,
}

impl HermitianOp {
    /// Validates squareness, the dimension cap, and conjugate symmetry
    /// (tolerance 1e−12 relative to the largest entry).
    pub fn new(entries: CMat) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty operator".into()));
        }
        if dim > DIM_LIMIT {
            return Err(Error::DimTooLarge { dim, limit: DIM_LIMIT });
        }
        if entries.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: entries.iter().map(|r| r.len()).find(|&l| l != dim).unwrap_or(dim),
            });
        }
        let scale = entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        for i in 0..dim {
            for j in 0..dim {
                if (entries[i][j] - entries[j][i].conj()).norm() > 1e-12 * scale {
                    return Err(Error::InvalidInput(format!(
                        "operator is not Hermitian at entry ({i}, {j})"
                    )));
                }
            }
        }
        Ok(HermitianOp { dim, entries })
    }

    /// Real diagonal matrix diag(d₀, …) — the usual way tests build
    /// Hamiltonians with prescribed spectra.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Complex64::new(diag[i], 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect()
            })
            .collect();
        HermitianOp::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    /// Eigen-decomposition by cyclic complex Jacobi rotations: returns
    /// eigenvalues (ascending) with matching orthonormal eigenvector
    /// columns.  At n ≤ 16 this converges in a handful of sweeps.
    pub fn eigen_decomposition(&self) -> (Vec<f64>, CMat) {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut v = identity(n);
        let scale = a
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(a[p][q].norm());
                }
            }
            if off <= 1e-14 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q, scale);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i].re).collect();
        let mut vectors = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                vectors[r][new_col] = v[r][old_col];
            }
        }
        (eigenvalues, vectors)
    }

    /// Groups the spectrum into (rational level offset, projector) pairs:
    /// eigenvalues are taken relative to λ_min, snapped to rationals with
    /// denominator ≤ 64 (tolerance 1e−9), and equal levels merge into one
    /// spectral projector P = Σ v v†.
    pub fn rational_levels(&self) -> Result<Vec<(Rational, CMat)>> {
        let n = self.dim;
        let (eigenvalues, vectors) = self.eigen_decomposition();
        let base = eigenvalues[0];
        let mut levels: Vec<(Rational, CMat)> = Vec::new();
        for k in 0..n {
            let offset = eigenvalues[k] - base;
            let r = snap_to_rational(offset, SNAP_MAX_DEN, 1e-9)
                .ok_or(Error::IrrationalSpectrum { value: offset, max_den: SNAP_MAX_DEN })?;
            let column: Vec<Complex64> = (0..n).map(|row| vectors[row][k]).collect();
            match levels.iter_mut().find(|(level, _)| *level == r) {
                Some((_, p)) => accumulate_outer(p, &column),
                None => {
                    let mut p = vec![vec![Complex64::new(0.0, 0.0); n]; n];
                    accumulate_outer(&mut p, &column);
                    levels.push((r, p));
                }
            }
        }
        Ok(levels)
    }
}

/// One parameterized layer: evolution by e^{2πi x H}, optionally followed
/// by a fixed unitary.
#[derive(Debug, Clone)]
pub struct Layer {
    pub hamiltonian: HermitianOp,
    pub channel: Option<CMat>,
}

/// A d-layer circuit: ρ₀ → layers (one parameter each) → measure μ.
#[derive(Debug, Clone)]
pub struct CircuitSpec {
    layers: Vec<Layer>,
    rho0: HermitianOp,
    observable: HermitianOp,
}

impl CircuitSpec {
    /// Validates dimension agreement, tr ρ₀ = 1 (1e−10), ρ₀ ⪰ −1e−10, and
    /// unitarity of every fixed channel.
    pub fn new(layers: Vec<Layer>, rho0: HermitianOp, observable: HermitianOp) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidInput("circuit needs at least one layer".into()));
        }
        let n = rho0.dim();
        if observable.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: observable.dim() });
        }
        for layer in &layers {
            if layer.hamiltonian.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: layer.hamiltonian.dim() });
            }
            if let Some(u) = &layer.channel {
                if u.len() != n || u.iter().any(|row| row.len() != n) {
                    return Err(Error::DimensionMismatch { expected: n, got: u.len() });
                }
                let utu = matmul(&dagger(u), u);
                let id = identity(n);
                let err = frobenius_distance(&utu, &id);
                if err > 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "channel is not unitary: |U*U - I| = {err:.3e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..n).map(|i| rho0.entries[i][i]).sum();
        if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidInput(format!("density matrix trace {} is not 1", trace.re)));
        }
        let (rho_eigs, _) = rho0.eigen_decomposition();
        if rho_eigs.iter().any(|&e| e < -1e-10) {
            return Err(Error::InvalidInput("density matrix has a negative eigenvalue".into()));
        }
        Ok(CircuitSpec { layers, rho0, observable })
    }

    pub fn dim(&self) -> usize {
        self.layers.len()
    }

    pub fn operator_dim(&self) -> usize {
        self.rho0.dim()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn rho0(&self) -> &HermitianOp {
        &self.rho0
    }

    pub fn observable(&self) -> &HermitianOp {
        &self.observable
    }
}

/// Expands tr(μ ℰ(x)(ρ₀)) into its exact harmonic coefficients.
///
/// Internally a map ν ↦ M_ν of matrix-valued Fourier coefficients is
/// threaded through the layers: layer j splits each term over the spectral
/// pairs of H_j (appending ν_j = λ' − λ to the tag, M ↦ P_λ M P_{λ'}),
/// then a fixed channel conjugates every term.  Finally b_ν = tr(μ M_ν),
/// and conjugate symmetry b_{−ν} = b̄_ν folds into real sine–cosine
/// coefficients x_ξ = 2 Re b_ξ, y_ξ = 2 Im b_ξ over Ξ⁺.
pub fn expectation_trigpoly(spec: &CircuitSpec) -> Result<TrigPoly> {
    let d = spec.dim();
    let mut terms: BTreeMap<Vec<Rational>, CMat> = BTreeMap::new();
    terms.insert(Vec::new(), spec.rho0.entries.clone());

    for layer in &spec.layers {
        let levels = layer.hamiltonian.rational_levels()?;
        let mut next: BTreeMap<Vec<Rational>, CMat> = BTreeMap::new();
        for (tag, m) in &terms {
            for (lam, p_left) in &levels {
                let left = matmul(p_left, m);
                for (lam_prime, p_right) in &levels {
                    let mut tagged = tag.clone();
                    tagged.push(lam_prime - lam);
                    let term = matmul(&left, p_right);
                    match next.get_mut(&tagged) {
                        Some(acc) => add_into(acc, &term),
                        None => {
                            next.insert(tagged, term);
                        }
                    }
                }
            }
        }
        if let Some(u) = &layer.channel {
            let ud = dagger(u);
            for m in next.values_mut() {
                *m = matmul(&matmul(u, m), &ud);
            }
        }
        terms = next;
    }

    let mut coeffs: BTreeMap<Vec<Rational>, Complex64> = BTreeMap::new();
    for (tag, m) in &terms {
        let b = trace_product(&spec.observable.entries, m);
        *coeffs.entry(tag.clone()).or_insert(Complex64::new(0.0, 0.0)) += b;
    }

    let points: Vec<Vec<Rational>> = coeffs.keys().cloned().collect();
    let freqs = FrequencySet::from_points(d, &points, true)?;
    let zero_tag = vec![Ratio::new(0, 1); d];
    let c0 = coeffs.get(&zero_tag).map(|b| b.re).unwrap_or(0.0);
    let mut xs = Vec::with_capacity(freqs.xi_plus().len());
    let mut ys = Vec::with_capacity(freqs.xi_plus().len());
    for xi in freqs.xi_plus() {
        let b = coeffs.get(xi).copied().unwrap_or(Complex64::new(0.0, 0.0));
        let mirror: Vec<Rational> = xi.iter().map(|c| -c).collect();
        let b_neg = coeffs.get(&mirror).copied().unwrap_or(Complex64::new(0.0, 0.0));
        // Realness check: the pair must be conjugate to numerical noise.
        if (b - b_neg.conj()).norm() > 1e-10 {
            return Err(Error::NumericalBreakdown(
                "expectation expansion is not conjugate-symmetric".into(),
            ));
        }
        xs.push(2.0 * b.re);
        ys.push(2.0 * b.im);
    }
    TrigPoly::new(freqs, c0, xs, ys)
}

/// Monte-Carlo estimate of (∂^α-type) rule application under projective
/// ±1 sampling: each of the N shots queries one support point y = x − a
/// and returns ±1 with mean f(y); shots are allocated ∝ |u_a|·√(1−f(x−a)²)
/// (min 1 per point).  Returns (mean estimate over 200 repetitions,
/// sample standard deviation of the per-repetition estimates).
pub fn shot_noise_estimate(
    f: &TrigPoly,
    rule: &ShiftRule,
    x: &[f64],
    total_shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if rule.support_size() == 0 {
        return Ok((0.0, 0.0));
    }
    if x.len() != rule.dim() {
        return Err(Error::DimensionMismatch { expected: rule.dim(), got: x.len() });
    }
    let norm = f.sup_norm(&ExtremaConfig::default())?;
    if norm > 1.0 + 1e-6 {
        return Err(Error::NormExceeded { norm });
    }
    if total_shots < 10 * rule.support_size() as u64 {
        return Err(Error::InvalidInput(format!(
            "shot budget {total_shots} is below 10 per support point"
        )));
    }

    // Per-atom Bernoulli means p_a = f(x − a), clamped against rounding.
    let mut means = Vec::with_capacity(rule.support_size());
    for (a, _) in rule.atoms() {
        let y: Vec<f64> = x.iter().zip(a).map(|(xj, aj)| xj - aj).collect();
        means.push(f.eval(&y)?.clamp(-1.0, 1.0));
    }
    let weights: Vec<f64> = rule
        .atoms()
        .iter()
        .zip(&means)
        .map(|((_, u), p)| u.abs() * (1.0 - p * p).max(0.0).sqrt())
        .collect();
    let shots = allocate_shots(total_shots, &weights, rule);

    let mut estimates = Vec::with_capacity(REPETITIONS);
    for rep in 0..REPETITIONS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep as u64);
        let mut acc = 0.0;
        for ((atom, p), &n_a) in rule.atoms().iter().zip(&means).zip(&shots) {
            let dist = Binomial::new(n_a, ((1.0 + p) / 2.0).clamp(0.0, 1.0))
                .map_err(|e| Error::InvalidInput(format!("binomial parameters: {e}")))?;
            let k = dist.sample(&mut rng) as f64;
            let sample_mean = (2.0 * k - n_a as f64) / n_a as f64;
            acc += atom.1 * sample_mean;
        }
        estimates.push(acc);
    }
    let mean = estimates.iter().sum::<f64>() / REPETITIONS as f64;
    let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (REPETITIONS as f64 - 1.0);
    Ok((mean, var.sqrt()))
}

/// Largest-remainder apportionment of `total` shots by `weights`, with
/// every point receiving at least one shot (taken from the largest
/// allocations so the total is preserved).
fn allocate_shots(total: u64, weights: &[f64], rule: &ShiftRule) -> Vec<u64> {
    let wsum: f64 = weights.iter().sum();
    let effective: Vec<f64> = if wsum > 0.0 {
        weights.to_vec()
    } else {
        // All sample points are deterministic (f = ±1): allocation shape
        // no longer matters for variance; fall back to |u_a|.
        rule.atoms().iter().map(|(_, u)| u.abs()).collect()
    };
    let esum: f64 = effective.iter().sum();
    let ideal: Vec<f64> = effective.iter().map(|w| total as f64 * w / esum).collect();
    let mut shots: Vec<u64> = ideal.iter().map(|w| w.floor() as u64).collect();
    let assigned: u64 = shots.iter().sum();
    let mut order: Vec<usize> = (0..shots.len()).collect();
    order.sort_by(|&i, &j| {
        (ideal[j] - ideal[j].floor()).total_cmp(&(ideal[i] - ideal[i].floor()))
    });
    for k in 0..(total - assigned) as usize {
        shots[order[k % order.len()]] += 1;
    }
    for i in 0..shots.len() {
        while shots[i] == 0 {
            let donor = (0..shots.len()).max_by_key(|&j| shots[j]).expect("nonempty");
            if shots[donor] <= 1 {
                shots[i] = 1;
                break;
            }
            shots[donor] -= 1;
            shots[i] += 1;
        }
    }
    shots
}

/// Best rational approximation p/q with q ≤ max_den within tol, smallest
/// denominator first.
pub(crate) fn snap_to_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    for q in 1..=max_den {
        let p = (x * q as f64).round();
        if p.abs() > i64::MAX as f64 / 2.0 {
            return None;
        }
        if (x - p / q as f64).abs() <= tol {
            return Some(Ratio::new(p as i64, q));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// small dense complex-matrix helpers (n ≤ 16 throughout)

fn identity(n: usize) -> CMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn dagger(a: &CMat) -> CMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn add_into(acc: &mut CMat, term: &CMat) {
    for (ra, rt) in acc.iter_mut().zip(term) {
        for (ea, et) in ra.iter_mut().zip(rt) {
            *ea += et;
        }
    }
}

/// tr(A · B).
fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.len();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            t += a[i][k] * b[k][i];
        }
    }
    t
}

fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// P += v v†.
fn accumulate_outer(p: &mut CMat, v: &[Complex64]) {
    let n = v.len();
    for i in 0..n {
        for j in 0..n {
            p[i][j] += v[i] * v[j].conj();
        }
    }
}

/// One complex Jacobi rotation zeroing A[p][q]: the phase of the pivot is
/// absorbed first (diag(1, e^{−iφ})), reducing to the real symmetric
/// 2×2 Schur rotation.
fn jacobi_rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize, scale: f64) {
    let apq = a[p][q];
    let r = apq.norm();
    if r <= 1e-300 || r <= 1e-16 * scale {
        return;
    }
    let phase = apq / r;
    let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = I except U[p][p] = c, U[p][q] = s·e^{iφ̄}-style entries below;
    // columns p and q of A and V mix, then rows p and q of A.
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = Complex64::new(-s, 0.0) * phase.conj();
    let uqq = Complex64::new(c, 0.0) * phase.conj();
    let n = a.len();
    // A ← A · U on columns p, q.
    for i in 0..n {
        let aip = a[i][p];
        let aiq = a[i][q];
        a[i][p] = aip * upp + aiq * uqp;
        a[i][q] = aip * upq + aiq * uqq;
    }
    // A ← U† · A on rows p, q.
    for j in 0..n {
        let apj = a[p][j];
        let aqj = a[q][j];
        a[p][j] = upp.conj() * apj + uqp.conj() * aqj;
        a[q][j] = upq.conj() * apj + uqq.conj() * aqj;
    }
    // Exact zeros on the pivot pair keep the off-diagonal monotone.
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let vip = v[i][p];
        let viq = v[i][q];
        v[i][p] = vip * upp + viq * uqp;
        v[i][q] = vip * upq + viq * uqq;
    }
}
