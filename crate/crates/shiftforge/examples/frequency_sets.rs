//! Building frequency sets Ξ.
//!
//! Everything downstream — polynomials, rules, dual witnesses — is anchored
//! to a finite symmetric Ξ ⊂ ℚᵈ.  This walkthrough builds such sets the
//! four ways they usually arise:
//!
//! 1. directly from points (symmetrized, 0 always included),
//! 2. as the difference spectrum {λ′ − λ} of Hamiltonian eigenvalues,
//! 3. as a product across independent circuit parameters,
//! 4. as the image under an integer reparameterization x ↦ Mᵀx,
//!
//! and finishes with `scale_to_integers`, the rational → integer-lattice
//! rescaling that the sparse solver and the extrema search operate on.
//!
//! ```bash
//! cargo run --example frequency_sets
//! ```

use shiftforge::freqset::rat;
use shiftforge::{FrequencySet, Rational};

fn show(label: &str, set: &FrequencySet) {
    let pts: Vec<String> = set
        .xi_plus()
        .iter()
        .map(|p| {
            let coords: Vec<String> = p.iter().map(Rational::to_string).collect();
            if coords.len() == 1 { coords.join("") } else { format!("({})", coords.join(", ")) }
        })
        .collect();
    println!("{label}");
    println!("  dim = {}, |Ξ| = {}, Ξ⁺ = {{{}}}", set.dim(), set.len(), pts.join(", "));
    println!(
        "  integral: {:5}, pointy: {}",
        set.is_integral(),
        match set.is_pointy() {
            Some(eps) => format!("yes, corner signs {eps:?}"),
            None => "no".into(),
        }
    );
}

fn main() -> Result<(), shiftforge::Error> {
    // 1. From points.  Only half the spectrum needs listing: Ξ is closed
    //    under negation, and 0 joins automatically.
    let band = FrequencySet::from_points(1, &[vec![rat(1, 1)], vec![rat(2, 1)]], true)?;
    show("band Ξ⁺ = {1, 2} from explicit points", &band);

    let thirds = FrequencySet::from_points(1, &[vec![rat(1, 3)], vec![rat(2, 3)]], true)?;
    show("\nrational set Ξ⁺ = {1/3, 2/3}", &thirds);

    // 2. From a Hamiltonian spectrum: evolution by e^{2πixH} with
    //    eigenvalues {0, 1/2, 1} produces harmonics at all differences.
    let diffs = FrequencySet::diff_spectrum(&[rat(0, 1), rat(1, 2), rat(1, 1)])?;
    show("\ndifference spectrum of eigenvalues {0, 1/2, 1}", &diffs);

    // 3. Product: independent parameters concatenate coordinates, so a
    //    two-layer circuit with per-layer spectra {0, ±1} and {0, ±2}
    //    lives on the 2-d grid below.  Products of pointy factors stay
    //    pointy — the corner (1, 2) dominates coordinate-wise.
    let a = FrequencySet::from_points(1, &[vec![rat(1, 1)]], true)?;
    let b = FrequencySet::from_points(1, &[vec![rat(2, 1)]], true)?;
    let grid = FrequencySet::product(&[a, b])?;
    show("\nproduct {0, ±1} × {0, ±2}", &grid);

    // 4. Linear image: substituting x ↦ Mᵀx maps each frequency ξ ↦ Mξ.
    //    M = [[1, −1], [1, 1]] ties both parameters to both layers; the
    //    rotated set is no longer pointy — its bounding box has no corner
    //    inside Ξ, so the closed-form witness below does not apply to it.
    let m = vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(1, 1), rat(1, 1)]];
    let mixed = grid.linear_image(&m)?;
    show("\nimage of the grid under M = [[1, −1], [1, 1]]", &mixed);

    // Rescaling a rational set onto the integer lattice: coordinate j is
    // multiplied by a positive factor s_j so that s ∘ Ξ ⊂ ℤᵈ with content
    // 1.  Shifts and derivatives transform along (rules rescale back with
    // the inverse factors; see ShiftRule::rescale).
    let (scaled, smap) = thirds.scale_to_integers();
    let factors: Vec<String> = smap.factors().iter().map(Rational::to_string).collect();
    println!("\nrescaling {{1/3, 2/3}} with s = ({})", factors.join(", "));
    show("scaled set", &scaled);

    Ok(())
}
