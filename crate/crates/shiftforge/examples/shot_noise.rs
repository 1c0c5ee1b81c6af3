//! Why the coefficient 1-norm is the right objective.
//!
//! Estimating ∂f(x) through a rule Σ u_a f(x − a) from shot-limited
//! evaluations (each query returns ±1 with mean f) propagates the per-query
//! noise through the coefficients: with N shots allocated optimally across
//! the support, the standard deviation approaches
//!
//! >  σ ≈ (Σ_a |u_a| σ_a) / √N  ≤  cost(rule) / √N,
//!
//! with equality as f → flat (σ_a → 1).  So minimizing Σ|u_a| minimizes
//! the worst-case estimator noise — the whole reason the optimizer targets
//! that norm.  This walkthrough measures the spread empirically over 200
//! repetitions on a near-flat band member and watches it track cost/√N
//! across three shot budgets.
//!
//! ```bash
//! cargo run --example shot_noise    # a few seconds; samples 200·N shots per row
//! ```

use shiftforge::freqset::rat;
use shiftforge::pqcsim::shot_noise_estimate;
use shiftforge::shiftrule::classic_two_point;
use shiftforge::{FrequencySet, TrigPoly};
use std::f64::consts::PI;

fn main() -> Result<(), shiftforge::Error> {
    // Near-flat band member f(x) = 10⁻³·cos(2πx): per-query variance is
    // 1 − f² ≈ 1 at every point, so the bound is essentially tight.
    let freqs = FrequencySet::from_points(1, &[vec![rat(1, 1)]], true)?;
    let f = TrigPoly::new(freqs, 0.0, vec![1e-3], vec![0.0])?;
    let rule = classic_two_point();

    println!("estimating f′(0) = 0 of f(x) = 10⁻³·cos(2πx) with the two-point rule");
    println!("(200 repetitions per budget; bound = cost/√N = 2π/√N)\n");
    println!("  {:>9} {:>14} {:>13} {:>13} {:>8}", "shots N", "mean estimate", "measured σ", "2π/√N", "ratio");
    for &shots in &[10_000u64, 100_000, 1_000_000] {
        let (mean, std) = shot_noise_estimate(&f, &rule, &[0.0], shots, 42)?;
        let bound = 2.0 * PI / (shots as f64).sqrt();
        println!(
            "  {shots:>9} {mean:>+14.6e} {std:>13.4e} {bound:>13.4e} {:>8.3}",
            std / bound
        );
    }

    println!("\nthe measured spread sits at the bound (ratio ≈ 1) and falls");
    println!("as 1/√N — a rule of smaller cost would shift the whole column down.");

    Ok(())
}
