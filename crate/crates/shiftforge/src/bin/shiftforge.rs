//! Command-line front end: solve rule coefficients on fixed supports,
//! run the cutting-plane dual optimizer, take the closed-form sparse
//! route for pointy sets, and verify rule files — all over the text
//! formats in `shiftforge::io`.
//!
//! Exit codes are a stable contract: 0 ok, 1 parse/usage error,
//! 2 infeasible, 3 iteration limit, 4 not pointy, 5 verification failure.

use clap::{Args, Parser, Subcommand};
use shiftforge::io::{self, Instance};
use shiftforge::{
    optimize, pqcsim, shiftrule, Certificate, DerivativeTarget, Error, FrequencySet, ShiftRule,
    TrigPoly,
};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_ITERATION_LIMIT: u8 = 3;
const EXIT_NOT_POINTY: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "shiftforge",
    about = "Provably optimal parameter shift rules for prescribed Fourier spectra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for rule coefficients on a fixed support set.
    SolveForU {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Support points, one per line, coordinates comma-separated.
        #[arg(long)]
        support: PathBuf,
        /// Write the resulting rule file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cutting-plane dual optimization with primal recovery and certificate.
    DualOpt {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Write (a, f*(a)) CSV samples of the dual witness here.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Write the recovered rule file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form optimal rule for pointy frequency sets (no iteration).
    SparseOptimal {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Write the rule file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a rule file: residual, weak duality, optional circuit test.
    Verify {
        /// Rule file to verify.
        rule: PathBuf,
        /// Instance file; defaults to the metadata embedded in the rule file.
        instance: Option<PathBuf>,
        /// Cross-check against a circuit's expectation function.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
}

/// Instance source: a file, or inline --xi/--alpha (dimension inferred
/// from the first point).
#[derive(Args)]
struct InstanceArgs {
    /// Instance file (key = value; see README).
    instance: Option<PathBuf>,
    /// Inline positive frequencies: points ';'-separated, rational
    /// coordinates ','-separated (e.g. "1,0; 0,2").
    #[arg(long)]
    xi: Option<String>,
    /// Inline derivative multi-index, ','-separated (e.g. "1,1").
    #[arg(long)]
    alpha: Option<String>,
    /// Override: separation slack for accepting a dual iterate.
    #[arg(long)]
    delta: Option<f64>,
    /// Override: objective / certificate gap precision.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override: seed for randomized helpers.
    #[arg(long)]
    seed: Option<u64>,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance, Error> {
        let mut inst = match (&self.instance, &self.xi, &self.alpha) {
            (Some(path), _, _) => io::read_instance(path)?,
            (None, Some(xi), Some(alpha)) => parse_inline(xi, alpha)?,
            _ => {
                return Err(Error::InvalidInput(
                    "provide an instance file or both --xi and --alpha".into(),
                ))
            }
        };
        if let Some(d) = self.delta {
            inst.config.delta = d;
        }
        if let Some(e) = self.epsilon {
            inst.config.epsilon = e;
        }
        if let Some(s) = self.seed {
            inst.config.seed = s;
        }
        inst.config.validate()?;
        Ok(inst)
    }
}

fn parse_inline(xi: &str, alpha: &str) -> Result<Instance, Error> {
    // --alpha fixes the dimension (one component per axis), which in turn
    // disambiguates the --xi point syntax.
    let alpha: Vec<u32> = alpha
        .split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad --alpha component `{}`", c.trim())))
        })
        .collect::<Result<_, _>>()?;
    if alpha.is_empty() {
        return Err(Error::InvalidInput("--alpha is empty".into()));
    }
    let points = io::parse_xi_points(xi, alpha.len(), 0)?;
    if points.is_empty() {
        return Err(Error::InvalidInput("--xi contains no points".into()));
    }
    let freqs = FrequencySet::from_points(alpha.len(), &points, true)?;
    let target = DerivativeTarget::new(&freqs, &alpha)?;
    Ok(Instance { freqs, target, config: optimize::SolverConfig::default() })
}

fn trace_enabled() -> bool {
    std::env::var("SHIFTFORGE_LOG").map(|v| v.eq_ignore_ascii_case("trace")).unwrap_or(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::SolveForU { instance, support, out } => cmd_solve_for_u(&instance, &support, out),
        Command::DualOpt { instance, plot, out } => cmd_dual_opt(&instance, plot, out),
        Command::SparseOptimal { instance, out } => cmd_sparse_optimal(&instance, out),
        Command::Verify { rule, instance, circuit } => cmd_verify(&rule, instance, circuit),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::IterationLimit { .. } => EXIT_ITERATION_LIMIT,
        Error::NotPointy => EXIT_NOT_POINTY,
        _ => EXIT_ERROR,
    }
}

fn cmd_solve_for_u(
    args: &InstanceArgs,
    support: &PathBuf,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let inst = args.load()?;
    let points = io::read_support(support, inst.freqs.dim())?;
    let solve = shiftrule::solve_fixed_support(
        &inst.freqs,
        &inst.target,
        &points,
        inst.config.lp_tol,
        inst.config.feas_tol,
    )?;
    println!("feasible = {}", solve.feasible);
    println!("cost = {}", io::fmt_f64(solve.rule.cost()));
    let residual = solve.rule.residual(&inst.freqs, &inst.target)?;
    println!("residual = {}", io::fmt_f64(residual));
    println!("l2_gap = {}", io::fmt_f64(solve.l2_gap));
    println!("support = {}", solve.rule.support_size());
    if let Some(path) = out {
        io::write_rule(&path, &solve.rule, &inst.freqs, &inst.target, residual)?;
    }
    Ok(if solve.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_dual_opt(args: &InstanceArgs, plot: Option<PathBuf>, out: Option<PathBuf>) -> Result<u8, Error> {
    let inst = args.load()?;
    let dual = match optimize::solve_dual(&inst.freqs, &inst.target, &inst.config) {
        Ok(d) => d,
        Err(Error::IterationLimit { limit, best }) => {
            // Emit the best-so-far artifacts before signalling the limit.
            eprintln!("iteration limit of {limit} reached; reporting best iterate");
            if trace_enabled() {
                eprint!("{}", io::trace_csv(&best.trace));
            }
            println!("value = {}", io::fmt_f64(best.value));
            println!("iterations = {}", best.iterations);
            println!("verdict = ITERATION_LIMIT");
            print!("{}", io::format_trigpoly(&best.f_star));
            if let Some(path) = plot {
                std::fs::write(&path, io::fstar_csv(&best.f_star)?)?;
            }
            return Ok(EXIT_ITERATION_LIMIT);
        }
        Err(e) => return Err(e),
    };
    if trace_enabled() {
        eprint!("{}", io::trace_csv(&dual.trace));
    }
    let rule = optimize::recover_from_basis(&inst.freqs, &inst.target, &dual, &inst.config)?;
    let cert = optimize::certify(&rule, &inst.freqs, &inst.target, &dual, &inst.config)?;
    println!("value = {}", io::fmt_f64(cert.dual.value));
    println!("iterations = {}", cert.dual.iterations);
    print_certificate(&cert);
    if let Some(path) = plot {
        std::fs::write(&path, io::fstar_csv(&cert.dual.f_star)?)?;
    }
    if let Some(path) = out {
        io::write_rule(&path, &cert.rule, &inst.freqs, &inst.target, cert.feasibility_residual)?;
    }
    Ok(EXIT_OK)
}

fn cmd_sparse_optimal(args: &InstanceArgs, out: Option<PathBuf>) -> Result<u8, Error> {
    let inst = args.load()?;
    let (rule, cert) = match optimize::sparse_optimal(&inst.freqs, &inst.target, &inst.config) {
        Ok(pair) => pair,
        Err(Error::NotPointy) => {
            eprintln!(
                "error: the frequency set is not pointy; no closed-form witness exists. \
                 Use `shiftforge dual-opt` for the general cutting-plane path."
            );
            return Ok(EXIT_NOT_POINTY);
        }
        Err(e) => return Err(e),
    };
    println!("value = {}", io::fmt_f64(cert.dual.value));
    print_certificate(&cert);
    if inst.freqs.dim() == 1 {
        let bound = inst.freqs.len() - (inst.target.alpha()[0] % 2) as usize;
        println!("support_bound = {bound}");
        if rule.support_size() > bound {
            eprintln!(
                "warning: support {} exceeds the d=1 bound {bound}",
                rule.support_size()
            );
        }
    }
    if let Some(path) = out {
        io::write_rule(&path, &rule, &inst.freqs, &inst.target, cert.feasibility_residual)?;
    }
    Ok(EXIT_OK)
}

fn print_certificate(cert: &Certificate) {
    println!("cost = {}", io::fmt_f64(cert.rule.cost()));
    println!("gap = {}", io::fmt_f64(cert.gap));
    println!("support = {}", cert.rule.support_size());
    println!("residual = {}", io::fmt_f64(cert.feasibility_residual));
    for v in &cert.slackness_violations {
        println!(
            "slackness_violation = {:?} u={} f*={}",
            v.point,
            io::fmt_f64(v.coefficient),
            io::fmt_f64(v.witness_value)
        );
    }
    println!("verdict = {}", if cert.is_optimal() { "OPTIMAL" } else { "NOT_CERTIFIED" });
    println!("f_star:");
    print!("{}", io::format_trigpoly(&cert.dual.f_star));
}

fn cmd_verify(
    rule_path: &PathBuf,
    instance: Option<PathBuf>,
    circuit: Option<PathBuf>,
) -> Result<u8, Error> {
    let rule_file = io::read_rule(rule_path)?;
    let (freqs, target, config) = match instance {
        Some(path) => {
            let inst = io::read_instance(&path)?;
            (inst.freqs, inst.target, inst.config)
        }
        None => {
            let (freqs, target) = rule_file.instance()?;
            (freqs, target, optimize::SolverConfig::default())
        }
    };
    let rule = &rule_file.rule;
    let mut all_ok = true;

    let residual = rule.residual(&freqs, &target)?;
    let res_ok = residual <= config.feas_tol;
    all_ok &= res_ok;
    println!(
        "check residual: {} ({} <= {})",
        pass(res_ok),
        io::fmt_f64(residual),
        io::fmt_f64(config.feas_tol)
    );

    // Weak duality against the closed-form witness, when one exists.
    let (scaled, smap) = freqs.scale_to_integers();
    if scaled.is_pointy().is_some() {
        let t_scaled = DerivativeTarget::new(&scaled, target.alpha())?;
        let f_scaled = optimize::analytic_dual(&scaled, &t_scaled)?;
        let value = f_scaled.neg_deriv_at_zero(&t_scaled)? / smap.alpha_power(target.alpha());
        let tol = config.cert_tol(value);
        let dual_ok = rule.cost() >= value - tol;
        all_ok &= dual_ok;
        println!(
            "check weak-duality: {} (cost {} >= dual value {} - tol)",
            pass(dual_ok),
            io::fmt_f64(rule.cost()),
            io::fmt_f64(value)
        );
        println!("gap = {}", io::fmt_f64(rule.cost() - value));
    } else {
        println!("check weak-duality: SKIP (set is not pointy; no closed-form witness)");
    }

    if let Some(path) = circuit {
        let spec = io::read_circuit(&path)?;
        let f = pqcsim::expectation_trigpoly(&spec)?;
        let circuit_ok = check_circuit(&f, rule, &freqs, &target)?;
        all_ok &= circuit_ok;
    }

    println!("verdict = {}", if all_ok { "PASS" } else { "FAIL" });
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Circuit cross-check: the expectation function's spectrum must sit
/// inside Ξ, and applying the rule must reproduce a central finite
/// difference of ∂^α f at probe points.
fn check_circuit(
    f: &TrigPoly,
    rule: &ShiftRule,
    freqs: &FrequencySet,
    target: &DerivativeTarget,
) -> Result<bool, Error> {
    let mut ok = true;
    let mut outside = 0usize;
    for (xi, (x, y)) in f
        .freqs()
        .xi_plus()
        .iter()
        .zip(f.cos_coeffs().iter().zip(f.sin_coeffs()))
    {
        let active = x.abs() > 1e-12 || y.abs() > 1e-12;
        if active && !freqs.contains(xi) {
            outside += 1;
        }
    }
    if outside > 0 {
        ok = false;
        println!("check spectrum: FAIL ({outside} active frequencies outside the instance set)");
    } else {
        println!("check spectrum: PASS");
    }

    let d = freqs.dim();
    let order_max = target.alpha().iter().copied().max().unwrap_or(1);
    // Step size and tolerance degrade with the derivative order: central
    // differences above first order lose ~h² accuracy per extra order.
    let (h, tol_rel) = if order_max == 1 { (1e-5, 1e-5) } else { (1e-2, 1e-3) };
    let mut max_rel = 0.0f64;
    for probe in 0..20 {
        let x: Vec<f64> = (0..d).map(|j| 0.05 + 0.9 * frac_hash(probe, j)).collect();
        let via_rule = rule.apply(f, &x)?;
        let via_fd = finite_difference(f, &x, target.alpha(), h)?;
        let scale = via_fd.abs().max(via_rule.abs()).max(1.0);
        max_rel = max_rel.max((via_rule - via_fd).abs() / scale);
    }
    let fd_ok = max_rel <= tol_rel;
    ok &= fd_ok;
    println!(
        "check finite-difference: {} (max relative deviation {})",
        pass(fd_ok),
        io::fmt_f64(max_rel)
    );
    Ok(ok)
}

/// Deterministic quasi-random probe coordinates in (0, 1).
fn frac_hash(i: usize, j: usize) -> f64 {
    let mut state = (i as u64).wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(j as u64);
    state ^= state >> 30;
    state = state.wrapping_mul(0xbf58476d1ce4e5b9);
    state ^= state >> 27;
    (state % 10_000) as f64 / 10_000.0
}

/// Central finite difference for ∂^α f(x), applied axis by axis.
fn finite_difference(f: &TrigPoly, x: &[f64], alpha: &[u32], h: f64) -> Result<f64, Error> {
    fn stencil(order: u32) -> Vec<(f64, f64)> {
        // (offset multiple of h, weight multiple of h^{-order})
        match order {
            1 => vec![(-1.0, -0.5), (1.0, 0.5)],
            2 => vec![(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
            3 => vec![(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
            4 => vec![(-2.0, 1.0), (-1.0, -4.0), (0.0, 6.0), (1.0, -4.0), (2.0, 1.0)],
            n => {
                // Compose: d^n = d^(n-1) ∘ d; accuracy degrades but this
                // path only serves diagnostics beyond fourth order.
                let inner = stencil(n - 1);
                let outer = stencil(1);
                let mut out: Vec<(f64, f64)> = Vec::new();
                for (o1, w1) in &outer {
                    for (o2, w2) in &inner {
                        match out.iter_mut().find(|(o, _)| (*o - (o1 + o2)).abs() < 1e-9) {
                            Some((_, w)) => *w += w1 * w2,
                            None => out.push((o1 + o2, w1 * w2)),
                        }
                    }
                }
                out
            }
        }
    }

    // Tensor-product application over the axes.
    let mut terms: Vec<(Vec<f64>, f64)> = vec![(x.to_vec(), 1.0)];
    for (j, &aj) in alpha.iter().enumerate() {
        let st = stencil(aj);
        let mut next = Vec::with_capacity(terms.len() * st.len());
        for (pt, w) in &terms {
            for (off, sw) in &st {
                let mut p = pt.clone();
                p[j] += off * h;
                next.push((p, w * sw / h.powi(aj as i32)));
            }
        }
        terms = next;
    }
    let mut acc = 0.0;
    for (pt, w) in &terms {
        acc += w * f.eval(pt)?;
    }
    Ok(acc)
}
