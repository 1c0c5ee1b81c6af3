//! Closed-form witnesses and equispaced sparse rules.
//!
//! When Ξ is *pointy* — some corner of its bounding box lies in Ξ — the
//! dual optimum is available in closed form: the single harmonic at the
//! corner frequency, e.g. f★(a) = −sin(2πMa) for the band {1, …, M} with
//! α = 1.  Its touching sets are equispaced grids, and solving the
//! equality system on them yields the optimal rule with no iterative
//! optimization anywhere:
//!
//! * α odd  → atoms among the half-odd quarters (2k+1)/(4M), never at 0,
//! * α even → atoms among the halves k/(2M), with 0 carrying weight.
//!
//! For the full band every grid point carries weight (2M atoms); gapped
//! spectra shed some, so the support never exceeds |Ξ| − 1 for odd α and
//! |Ξ| for even.  The pipeline handles rational sets by rescaling to the
//! integer lattice and back, and pointy products in d ≤ 3 coordinate-wise.
//!
//! ```bash
//! cargo run --example sparse_rule
//! ```

use shiftforge::freqset::rat;
use shiftforge::optimize::sparse_optimal;
use shiftforge::{DerivativeTarget, FrequencySet, ShiftRule, SolverConfig};
use std::f64::consts::PI;

fn report(label: &str, rule: &ShiftRule, value: f64, optimal: bool) {
    println!("{label}");
    for (a, u) in rule.atoms() {
        let coords: Vec<String> = a.iter().map(|c| format!("{c:+.6}")).collect();
        println!("  a = ({})   u = {:+.6}", coords.join(", "), u);
    }
    println!(
        "  support {}, cost {:.10}, certified value {:.10}, optimal: {}",
        rule.support_size(),
        rule.cost(),
        value,
        optimal
    );
}

fn main() -> Result<(), shiftforge::Error> {
    let config = SolverConfig::default();

    // Band {1, ..., 4}, first derivative: 8 atoms on the odd grid
    // (2k+1)/16, none at 0, cost (2π·4)¹ = 8π.
    let band4 = FrequencySet::from_points(
        1,
        &(1..=4).map(|k| vec![rat(k, 1)]).collect::<Vec<_>>(),
        true,
    )?;
    let t1 = DerivativeTarget::new(&band4, &[1])?;
    let (rule, cert) = sparse_optimal(&band4, &t1, &config)?;
    report("Ξ⁺ = {1, 2, 3, 4}, α = 1  (odd grid (2k+1)/16):", &rule, cert.dual.value, cert.is_optimal());
    println!("  closed form (2π·4)¹ = {:.10}\n", 8.0 * PI);

    // Same band, second derivative: the witness flips to −cos(2πMa), the
    // grid to halves k/8 — now a = 0 carries an atom (the one negative
    // coefficient balancing the row Σu = 0).
    let t2 = DerivativeTarget::new(&band4, &[2])?;
    let (rule, cert) = sparse_optimal(&band4, &t2, &config)?;
    report("Ξ⁺ = {1, 2, 3, 4}, α = 2  (even grid k/8):", &rule, cert.dual.value, cert.is_optimal());
    println!("  closed form (2π·4)² = {:.10}\n", (8.0 * PI).powi(2));

    // Rational frequencies ride the same machinery through the lattice
    // rescaling: {1/3, 2/3} stretches by s = 3 onto {1, 2}, solves there,
    // and the atoms come back dilated by s with coefficients shrunk by
    // s^|α| — slower oscillation means longer shifts and a cheaper rule.
    let thirds = FrequencySet::from_points(1, &[vec![rat(1, 3)], vec![rat(2, 3)]], true)?;
    let t1 = DerivativeTarget::new(&thirds, &[1])?;
    let (rule, cert) = sparse_optimal(&thirds, &t1, &config)?;
    report("Ξ⁺ = {1/3, 2/3}, α = 1  (rescaled lattice):", &rule, cert.dual.value, cert.is_optimal());
    println!("  closed form 2π·(2/3) = {:.10}\n", 4.0 * PI / 3.0);

    // A pointy product in two dimensions: Ξ = {0, ±1} × {0, ±2} with the
    // mixed derivative α = (1, 1).  The witness is the product of the
    // one-dimensional ones and the rule the tensor of the two-point rules,
    // cost (2π·1)(2π·2) = 8π².
    let a = FrequencySet::from_points(1, &[vec![rat(1, 1)]], true)?;
    let b = FrequencySet::from_points(1, &[vec![rat(2, 1)]], true)?;
    let grid = FrequencySet::product(&[a, b])?;
    let t11 = DerivativeTarget::new(&grid, &[1, 1])?;
    let (rule, cert) = sparse_optimal(&grid, &t11, &config)?;
    report("Ξ = {0, ±1} × {0, ±2}, α = (1, 1):", &rule, cert.dual.value, cert.is_optimal());
    println!("  closed form (2π)(4π) = {:.10}", 8.0 * PI * PI);

    Ok(())
}
