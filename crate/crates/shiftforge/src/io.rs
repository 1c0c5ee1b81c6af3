//! Text formats: instance files, support lists, rule files, circuit
//! files, and the CSV emitters.
//!
//! Everything is line-oriented, human-readable, and diff-friendly:
//! key–value headers (`key = value`, `#` comments), exact rationals for
//! frequencies ("3/2"), and decimal floats serialized with 17 significant
//! digits so every `f64` round-trips bit-exactly.  Unknown keys are
//! rejected rather than ignored — silent typos in solver overrides would
//! otherwise change results without a trace.

use crate::error::{Error, Result};
use crate::freqset::{parse_rational, FrequencySet, Rational};
use crate::optimize::{IterationTrace, SolverConfig};
use crate::pqcsim::{CircuitSpec, HermitianOp, Layer};
use crate::shiftrule::ShiftRule;
use crate::trigpoly::{DerivativeTarget, TrigPoly};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

/// A parsed problem instance: frequency set, derivative target, and the
/// solver configuration after applying any per-file overrides.
#[derive(Debug, Clone)]
pub struct Instance {
    pub freqs: FrequencySet,
    pub target: DerivativeTarget,
    pub config: SolverConfig,
}

/// 17-significant-digit scientific notation; the round-trip format used
/// for every float in every file this crate writes.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

// ---------------------------------------------------------------------------
// instance files

/// Parses an instance file.
///
/// ```text
/// # harmonic chain
/// dim = 1
/// xi_plus = 1, 3/2        # one point per ';', coordinates per ','
/// alpha = 1
/// epsilon = 1e-8          # any SolverConfig field may be overridden
/// ```
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut dim: Option<usize> = None;
    let mut xi_raw: Option<(usize, String)> = None;
    let mut alpha_raw: Option<(usize, String)> = None;
    let mut config = SolverConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_key_value(line, line_no)?;
        match key {
            "dim" => dim = Some(parse_num(value, line_no, "dim")?),
            "xi_plus" => xi_raw = Some((line_no, value.to_string())),
            "alpha" => alpha_raw = Some((line_no, value.to_string())),
            "delta" => config.delta = parse_num(value, line_no, "delta")?,
            "epsilon" => config.epsilon = parse_num(value, line_no, "epsilon")?,
            "extrema_tol" => config.extrema_tol = parse_num(value, line_no, "extrema_tol")?,
            "lp_tol" => config.lp_tol = parse_num(value, line_no, "lp_tol")?,
            "max_iterations" => {
                config.max_iterations = parse_num(value, line_no, "max_iterations")?
            }
            "initial_grid" => config.initial_grid = parse_num(value, line_no, "initial_grid")?,
            "seed" => config.seed = parse_num(value, line_no, "seed")?,
            "feas_tol" => config.feas_tol = parse_num(value, line_no, "feas_tol")?,
            "slack_tol" => config.slack_tol = parse_num(value, line_no, "slack_tol")?,
            other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::parse(0, "missing `dim`"))?;
    let (xi_line, xi_text) = xi_raw.ok_or_else(|| Error::parse(0, "missing `xi_plus`"))?;
    let (alpha_line, alpha_text) = alpha_raw.ok_or_else(|| Error::parse(0, "missing `alpha`"))?;

    let points = parse_xi_points(&xi_text, dim, xi_line)?;
    let freqs = FrequencySet::from_points(dim, &points, true)?;

    let alpha: Vec<u32> = alpha_text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(alpha_line, format!("bad alpha component `{}`", c.trim())))
        })
        .collect::<Result<_>>()?;
    if alpha.len() != dim {
        return Err(Error::parse(
            alpha_line,
            format!("alpha has {} components, expected {dim}", alpha.len()),
        ));
    }
    let target = DerivativeTarget::new(&freqs, &alpha)?;
    config.validate()?;
    Ok(Instance { freqs, target, config })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Splits an `xi_plus` value into rational points.  Points are separated
/// by ';' and coordinates by ','; in one dimension a comma also separates
/// points, so frequency lists read naturally ("1, 3/2").
pub fn parse_xi_points(text: &str, dim: usize, line_no: usize) -> Result<Vec<Vec<Rational>>> {
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let chunks: Vec<&str> = if dim == 1 {
        text.split([';', ',']).collect()
    } else {
        text.split(';').collect()
    };
    for chunk in chunks {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let coords: Vec<Rational> = chunk
            .split(',')
            .map(|c| {
                parse_rational(c.trim())
                    .ok_or_else(|| Error::parse(line_no, format!("bad rational `{}`", c.trim())))
            })
            .collect::<Result<_>>()?;
        if coords.len() != dim {
            return Err(Error::parse(
                line_no,
                format!("point has {} coordinates, expected {dim}", coords.len()),
            ));
        }
        points.push(coords);
    }
    Ok(points)
}

// ---------------------------------------------------------------------------
// support files

/// One point per line, coordinates comma-separated; `#` comments.
pub fn parse_support(text: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let coords: Vec<f64> = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("bad coordinate `{}`", c.trim())))
            })
            .collect::<Result<_>>()?;
        if coords.len() != dim {
            return Err(Error::parse(
                line_no,
                format!("point has {} coordinates, expected {dim}", coords.len()),
            ));
        }
        points.push(coords);
    }
    if points.is_empty() {
        return Err(Error::parse(0, "support file contains no points"));
    }
    Ok(points)
}

pub fn read_support(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    parse_support(&std::fs::read_to_string(path)?, dim)
}

// ---------------------------------------------------------------------------
// rule files

/// A rule file: the rule itself plus the instance metadata it was solved
/// against (enough to re-verify feasibility from the file alone).
#[derive(Debug, Clone)]
pub struct RuleFile {
    pub dim: usize,
    pub xi_plus: Vec<Vec<Rational>>,
    pub alpha: Vec<u32>,
    pub cost: f64,
    pub residual: f64,
    pub rule: ShiftRule,
}

impl RuleFile {
    /// Rebuilds the (symmetrized) frequency set and target recorded in the
    /// metadata.
    pub fn instance(&self) -> Result<(FrequencySet, DerivativeTarget)> {
        let freqs = FrequencySet::from_points(self.dim, &self.xi_plus, true)?;
        let target = DerivativeTarget::new(&freqs, &self.alpha)?;
        Ok((freqs, target))
    }
}

/// Serializes a rule with its instance metadata.
pub fn format_rule(
    rule: &ShiftRule,
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    residual: f64,
) -> String {
    let mut out = String::new();
    out.push_str("# shift rule: `point coordinates... coefficient` per atom line\n");
    let _ = writeln!(out, "dim = {}", rule.dim());
    let xi: Vec<String> = freqs
        .xi_plus()
        .iter()
        .map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
        .collect();
    let _ = writeln!(out, "xi_plus = {}", xi.join("; "));
    let alpha: Vec<String> = t.alpha().iter().map(|a| a.to_string()).collect();
    let _ = writeln!(out, "alpha = {}", alpha.join(", "));
    let _ = writeln!(out, "cost = {}", fmt_f64(rule.cost()));
    let _ = writeln!(out, "residual = {}", fmt_f64(residual));
    let _ = writeln!(out, "atoms = {}", rule.support_size());
    for (a, u) in rule.atoms() {
        let coords: Vec<String> = a.iter().map(|&c| fmt_f64(c)).collect();
        let _ = writeln!(out, "{} {}", coords.join(" "), fmt_f64(*u));
    }
    out
}

pub fn write_rule(
    path: &Path,
    rule: &ShiftRule,
    freqs: &FrequencySet,
    t: &DerivativeTarget,
    residual: f64,
) -> Result<()> {
    std::fs::write(path, format_rule(rule, freqs, t, residual))?;
    Ok(())
}

pub fn parse_rule(text: &str) -> Result<RuleFile> {
    let mut dim: Option<usize> = None;
    let mut xi_plus: Vec<Vec<Rational>> = Vec::new();
    let mut alpha: Vec<u32> = Vec::new();
    let mut cost: Option<f64> = None;
    let mut residual: Option<f64> = None;
    let mut atom_count: Option<usize> = None;
    let mut atoms: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut in_atoms = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if !in_atoms {
            let (key, value) = split_key_value(line, line_no)?;
            match key {
                "dim" => dim = Some(parse_num(value, line_no, "dim")?),
                "xi_plus" => {
                    let d = dim.ok_or_else(|| Error::parse(line_no, "`dim` must come first"))?;
                    xi_plus = parse_xi_points(value, d, line_no)?;
                }
                "alpha" => {
                    alpha = value
                        .split(',')
                        .map(|c| {
                            c.trim().parse::<u32>().map_err(|_| {
                                Error::parse(line_no, format!("bad alpha component `{}`", c.trim()))
                            })
                        })
                        .collect::<Result<_>>()?;
                }
                "cost" => cost = Some(parse_num(value, line_no, "cost")?),
                "residual" => residual = Some(parse_num(value, line_no, "residual")?),
                "atoms" => {
                    atom_count = Some(parse_num(value, line_no, "atoms")?);
                    in_atoms = true;
                }
                other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
            }
        } else {
            let d = dim.ok_or_else(|| Error::parse(line_no, "`dim` missing before atoms"))?;
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::parse(line_no, format!("bad number `{c}`")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != d + 1 {
                return Err(Error::parse(
                    line_no,
                    format!("atom line has {} numbers, expected {}", nums.len(), d + 1),
                ));
            }
            atoms.push((nums[..d].to_vec(), nums[d]));
        }
    }
    let dim = dim.ok_or_else(|| Error::parse(0, "missing `dim`"))?;
    let expected = atom_count.ok_or_else(|| Error::parse(0, "missing `atoms` count"))?;
    if atoms.len() != expected {
        return Err(Error::parse(0, format!("expected {expected} atoms, found {}", atoms.len())));
    }
    if xi_plus.is_empty() {
        return Err(Error::parse(0, "missing `xi_plus`"));
    }
    if alpha.len() != dim {
        return Err(Error::parse(0, "missing or mis-sized `alpha`"));
    }
    let rule = ShiftRule::new(dim, atoms)?;
    Ok(RuleFile {
        dim,
        xi_plus,
        alpha,
        cost: cost.ok_or_else(|| Error::parse(0, "missing `cost`"))?,
        residual: residual.ok_or_else(|| Error::parse(0, "missing `residual`"))?,
        rule,
    })
}

pub fn read_rule(path: &Path) -> Result<RuleFile> {
    parse_rule(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// circuit files

/// Parses a circuit file: a header (`dim` = operator dimension, `layers`),
/// then role-tagged dense complex matrices, row-major with `re im` pairs.
///
/// ```text
/// dim = 2
/// layers = 1
/// [hamiltonian 1]
/// 0 0  0 0
/// 0 0  1 0
/// [rho]
/// 0.5 0  0.5 0
/// 0.5 0  0.5 0
/// [observable]
/// 0 0  1 0
/// 1 0  0 0
/// ```
///
/// A `[channel k]` section (unitary applied after layer k) is optional.
pub fn parse_circuit(text: &str) -> Result<CircuitSpec> {
    let mut n: Option<usize> = None;
    let mut layer_count: Option<usize> = None;
    let mut hams: Vec<Option<Vec<Vec<Complex64>>>> = Vec::new();
    let mut channels: Vec<Option<Vec<Vec<Complex64>>>> = Vec::new();
    let mut rho: Option<Vec<Vec<Complex64>>> = None;
    let mut obs: Option<Vec<Vec<Complex64>>> = None;
    let mut section: Option<(String, usize)> = None;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();

    fn commit(
        section: &Option<(String, usize)>,
        rows: &mut Vec<Vec<Complex64>>,
        hams: &mut Vec<Option<Vec<Vec<Complex64>>>>,
        channels: &mut Vec<Option<Vec<Vec<Complex64>>>>,
        rho: &mut Option<Vec<Vec<Complex64>>>,
        obs: &mut Option<Vec<Vec<Complex64>>>,
    ) -> Result<()> {
        if let Some((tag, line_no)) = section {
            if rows.is_empty() {
                return Err(Error::parse(*line_no, format!("section `{tag}` has no rows")));
            }
            let matrix = std::mem::take(rows);
            let mut parts = tag.split_whitespace();
            let role = parts.next().unwrap_or("");
            match role {
                "hamiltonian" | "channel" => {
                    let k: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::parse(*line_no, "missing layer index"))?;
                    if k == 0 {
                        return Err(Error::parse(*line_no, "layer indices start at 1"));
                    }
                    let store = if role == "hamiltonian" { hams } else { channels };
                    if store.len() < k {
                        store.resize(k, None);
                    }
                    if store[k - 1].is_some() {
                        return Err(Error::parse(*line_no, format!("duplicate `{tag}`")));
                    }
                    store[k - 1] = Some(matrix);
                }
                "rho" => {
                    if rho.is_some() {
                        return Err(Error::parse(*line_no, "duplicate `rho`"));
                    }
                    *rho = Some(matrix);
                }
                "observable" => {
                    if obs.is_some() {
                        return Err(Error::parse(*line_no, "duplicate `observable`"));
                    }
                    *obs = Some(matrix);
                }
                other => {
                    return Err(Error::parse(*line_no, format!("unknown section `{other}`")))
                }
            }
        } else if !rows.is_empty() {
            return Err(Error::parse(0, "matrix rows before any section tag"));
        }
        Ok(())
    }

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(tag) = line.strip_prefix('[') {
            let tag = tag
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(line_no, "unterminated section tag"))?
                .trim()
                .to_string();
            commit(&section, &mut rows, &mut hams, &mut channels, &mut rho, &mut obs)?;
            section = Some((tag, line_no));
        } else if section.is_none() {
            let (key, value) = split_key_value(line, line_no)?;
            match key {
                "dim" => n = Some(parse_num(value, line_no, "dim")?),
                "layers" => layer_count = Some(parse_num(value, line_no, "layers")?),
                other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
            }
        } else {
            let n = n.ok_or_else(|| Error::parse(line_no, "`dim` must precede sections"))?;
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::parse(line_no, format!("bad number `{c}`")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 * n {
                return Err(Error::parse(
                    line_no,
                    format!("matrix row has {} numbers, expected {}", nums.len(), 2 * n),
                ));
            }
            rows.push(nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
        }
    }
    commit(&section, &mut rows, &mut hams, &mut channels, &mut rho, &mut obs)?;

    let layer_count = layer_count.ok_or_else(|| Error::parse(0, "missing `layers`"))?;
    if hams.len() != layer_count || hams.iter().any(|h| h.is_none()) {
        return Err(Error::parse(
            0,
            format!("expected hamiltonians 1..={layer_count}, found {}", hams.len()),
        ));
    }
    if channels.len() > layer_count {
        return Err(Error::parse(0, "channel index exceeds layer count"));
    }
    channels.resize(layer_count, None);
    let layers: Vec<Layer> = hams
        .into_iter()
        .zip(channels)
        .map(|(h, c)| {
            Ok(Layer { hamiltonian: HermitianOp::new(h.expect("checked above"))?, channel: c })
        })
        .collect::<Result<_>>()?;
    let rho = HermitianOp::new(rho.ok_or_else(|| Error::parse(0, "missing `[rho]`"))?)?;
    let obs = HermitianOp::new(obs.ok_or_else(|| Error::parse(0, "missing `[observable]`"))?)?;
    CircuitSpec::new(layers, rho, obs)
}

pub fn read_circuit(path: &Path) -> Result<CircuitSpec> {
    parse_circuit(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// polynomial serialization and CSV emitters

/// The (c0, [(ξ, x_ξ, y_ξ)]) block for report output.
pub fn format_trigpoly(f: &TrigPoly) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c0 = {}", fmt_f64(f.c0()));
    for ((xi, x), y) in f.freqs().xi_plus().iter().zip(f.cos_coeffs()).zip(f.sin_coeffs()) {
        let coords: Vec<String> = xi.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "harmonic = {} : {} : {}", coords.join(", "), fmt_f64(*x), fmt_f64(*y));
    }
    out
}

/// (a, f(a)) samples on a uniform grid over the period cell, 1024 points
/// per axis, as CSV with a header row.  Supported for d ≤ 2 (a d = 3
/// tensor grid at this resolution would be gigabytes).
pub fn fstar_csv(f: &TrigPoly) -> Result<String> {
    let d = f.freqs().dim();
    let per_axis = 1024usize;
    let mut out = String::new();
    match d {
        1 => {
            out.push_str("a,f\n");
            for k in 0..per_axis {
                let a = -0.5 + k as f64 / per_axis as f64;
                let _ = writeln!(out, "{},{}", fmt_f64(a), fmt_f64(f.eval_unchecked(&[a])));
            }
        }
        2 => {
            out.push_str("a1,a2,f\n");
            for k1 in 0..per_axis {
                let a1 = -0.5 + k1 as f64 / per_axis as f64;
                for k2 in 0..per_axis {
                    let a2 = -0.5 + k2 as f64 / per_axis as f64;
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        fmt_f64(a1),
                        fmt_f64(a2),
                        fmt_f64(f.eval_unchecked(&[a1, a2]))
                    );
                }
            }
        }
        d => {
            return Err(Error::InvalidInput(format!("plot output supports dim <= 2, got {d}")));
        }
    }
    Ok(out)
}

/// Cutting-plane progress as CSV (the `SHIFTFORGE_LOG=trace` stream).
pub fn trace_csv(trace: &[IterationTrace]) -> String {
    let mut out = String::from("iteration,points,lp_value,max_violation\n");
    for t in trace {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            t.iteration,
            t.points,
            fmt_f64(t.lp_value),
            fmt_f64(t.max_violation)
        );
    }
    out
}

// ---------------------------------------------------------------------------
// shared line helpers

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

fn split_key_value(line: &str, line_no: usize) -> Result<(&str, &str)> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| Error::parse(line_no, format!("expected `key = value`, got `{line}`")))?;
    Ok((k.trim(), v.trim()))
}

fn parse_num<T: std::str::FromStr>(value: &str, line_no: usize, key: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::parse(line_no, format!("bad value `{value}` for `{key}`")))
}
