//! From a parameterized circuit to its trigonometric polynomial.
//!
//! Expectation values f(x) = tr(μ ℰ(x)(ρ₀)) of circuits whose layers
//! evolve by e^{2πi x_j H_j} are trigonometric polynomials over the
//! product of the Hamiltonians' difference spectra.  The simulator
//! extracts the exact harmonic coefficients, which connects the optimizer
//! to its intended application: the frequency set comes from the circuit,
//! the rule from the optimizer, and applying the rule to shifted circuit
//! evaluations differentiates the expectation exactly.
//!
//! The flagship instance: H = diag(0, 1), ρ₀ = |+⟩⟨+|, observable X gives
//! f(x) = cos(2πx) on the nose.
//!
//! ```bash
//! cargo run --example simulator
//! ```

use num_complex::Complex64;
use shiftforge::pqcsim::{expectation_trigpoly, CircuitSpec, HermitianOp, Layer};
use shiftforge::shiftrule::classic_two_point;
use shiftforge::DerivativeTarget;
use std::f64::consts::PI;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() -> Result<(), shiftforge::Error> {
    // One layer: H = diag(0, 1), ρ₀ = |+⟩⟨+|, μ = X.
    let h = HermitianOp::diagonal(&[0.0, 1.0])?;
    let rho = HermitianOp::new(vec![vec![c(0.5), c(0.5)], vec![c(0.5), c(0.5)]])?;
    let x_obs = HermitianOp::new(vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]])?;
    let spec = CircuitSpec::new(vec![Layer { hamiltonian: h, channel: None }], rho, x_obs)?;

    let f = expectation_trigpoly(&spec)?;
    println!("H = diag(0, 1), ρ₀ = |+⟩⟨+|, μ = X:");
    println!("  spectrum Ξ⁺ (from eigenvalue differences): {:?}", f.freqs().xi_plus_f64());
    println!("  c₀ = {:+.2e}", f.c0());
    for (k, xi) in f.freqs().xi_plus_f64().iter().enumerate() {
        println!(
            "  ξ = {:?}: cos coefficient {:+.12}, sin coefficient {:+.2e}",
            xi, f.cos_coeffs()[k], f.sin_coeffs()[k]
        );
    }
    println!("  → f(x) = cos(2πx) exactly\n");

    // Differentiate the circuit by shifted evaluations.  Every query below
    // is a full expectation value of the same circuit at a shifted
    // parameter — nothing about f beyond its spectrum is used by the rule.
    let rule = classic_two_point();
    let t = DerivativeTarget::new(f.freqs(), &[1])?;
    println!("two-point rule applied to shifted circuit evaluations:");
    println!("  (rule residual on the circuit's spectrum: {:.2e})", rule.residual(f.freqs(), &t)?);
    println!("  {:>6} {:>14} {:>14}", "x", "rule", "−2π sin(2πx)");
    for k in 0..4 {
        let x = 0.15 * k as f64;
        let by_rule = rule.apply(&f, &[x])?;
        let exact = -2.0 * PI * (2.0 * PI * x).sin();
        println!("  {x:>6.2} {by_rule:>14.9} {exact:>14.9}");
    }

    // Two parameters: a Hadamard between two diagonal layers couples
    // them, and the expectation picks up mixed harmonics — here
    // f(x₁, x₂) = sin(2πx₁)sin(2πx₂), i.e. cosine coefficients ±1/2 at
    // ξ = (1, ∓1).
    let hadamard = {
        let s = 1.0 / 2.0f64.sqrt();
        vec![vec![c(s), c(s)], vec![c(s), c(-s)]]
    };
    let spec2 = CircuitSpec::new(
        vec![
            Layer { hamiltonian: HermitianOp::diagonal(&[0.0, 1.0])?, channel: Some(hadamard) },
            Layer { hamiltonian: HermitianOp::diagonal(&[0.0, 1.0])?, channel: None },
        ],
        HermitianOp::new(vec![vec![c(0.5), c(0.5)], vec![c(0.5), c(0.5)]])?,
        HermitianOp::new(vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]])?,
    )?;
    let g = expectation_trigpoly(&spec2)?;
    println!("\ntwo layers with a Hadamard in between (ρ₀ = |+⟩⟨+|, μ = X):");
    println!("  c₀ = {:+.6}", g.c0());
    for (k, xi) in g.freqs().xi_plus_f64().iter().enumerate() {
        println!(
            "  ξ = ({:+.0}, {:+.0}):  x_ξ = {:+.6}   y_ξ = {:+.6}",
            xi[0], xi[1], g.cos_coeffs()[k], g.sin_coeffs()[k]
        );
    }

    Ok(())
}
