//! Exact rational frequency sets.
//!
//! A frequency set Ξ ⊂ ℚᵈ describes the spectrum of a real trigonometric
//! polynomial f(x) = Σ_{ξ∈Ξ} b_ξ e^{2πi ξ·x}.  Reality of f forces the
//! spectrum to be symmetric, Ξ = −Ξ, and we always include 0 (a constant
//! offset costs nothing and the shift-rule equations need the ξ = 0 row).
//!
//! Coordinates are exact rationals so that rescaling a set onto the integer
//! lattice — the normal form every period-cell computation works in — is
//! lossless and canonical.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Exact rational scalar used for frequencies and scaling factors.
pub type Rational = Ratio<i64>;

/// Convenience constructor for `n/d`.  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a rational.
/// Returns `None` for malformed input or a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        }
        None => s.parse::<i64>().ok().map(Ratio::from_integer),
    }
}

/// A finite symmetric frequency set Ξ ⊂ ℚᵈ with 0 ∈ Ξ.
///
/// Alongside the full point set, the canonical positive half Ξ⁺ is kept:
/// one representative per pair {ξ, −ξ}, chosen so its first nonzero
/// coordinate is positive, sorted lexicographically.  All coefficient
/// vectors elsewhere in the crate are indexed against this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    dim: usize,
    points: BTreeSet<Vec<Rational>>,
    xi_plus: Vec<Vec<Rational>>,
}

/// Positive per-coordinate factors s with (s ∘ Ξ)_j = s_j ξ_j.
///
/// Produced by [`FrequencySet::scale_to_integers`]; consumed by
/// [`crate::shiftrule::ShiftRule::rescale`] and by the solver when it maps
/// results on the integer lattice back to the original frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingMap {
    factors: Vec<Rational>,
}

impl ScalingMap {
    /// Builds a scaling map from per-coordinate factors; all must be > 0.
    pub fn new(factors: Vec<Rational>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("scaling map needs at least one factor".into()));
        }
        if let Some(f) = factors.iter().find(|f| !f.is_positive()) {
            return Err(Error::InvalidInput(format!("scaling factor {f} is not positive")));
        }
        Ok(ScalingMap { factors })
    }

    /// The identity map in dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        ScalingMap { factors: vec![Rational::one(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Rational] {
        &self.factors
    }

    pub fn factor_f64(&self, j: usize) -> f64 {
        ratio_to_f64(&self.factors[j])
    }

    /// ∏_j s_j^{α_j} — the factor by which ∂^α and rule coefficients scale.
    pub fn alpha_power(&self, alpha: &[u32]) -> f64 {
        self.factors
            .iter()
            .zip(alpha)
            .map(|(s, &a)| ratio_to_f64(s).powi(a as i32))
            .product()
    }
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl FrequencySet {
    /// Builds a set from raw points.
    ///
    /// With `auto_symmetrize` the mirror −ξ of every point is added; without
    /// it, input missing a mirror is rejected as [`Error::AsymmetricInput`].
    /// 0 is always included and duplicates collapse.
    pub fn from_points(dim: usize, raw: &[Vec<Rational>], auto_symmetrize: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("frequency sets need dimension >= 1".into()));
        }
        if raw.is_empty() {
            return Err(Error::InvalidInput("frequency set needs at least one point".into()));
        }
        let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for p in raw {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            points.insert(p.clone());
            if auto_symmetrize {
                points.insert(negate(p));
            }
        }
        if !auto_symmetrize {
            for p in &points {
                if !points.contains(&negate(p)) {
                    return Err(Error::AsymmetricInput { point: format_point(p) });
                }
            }
        }
        points.insert(vec![Rational::zero(); dim]);
        let xi_plus = points.iter().filter(|p| is_canonical_positive(p)).cloned().collect();
        Ok(FrequencySet { dim, points, xi_plus })
    }

    /// The difference spectrum {λ − μ : λ, μ eigenvalues} of a Hamiltonian
    /// with the given (exact) eigenvalues — the 1-dimensional frequency set
    /// of x ↦ tr(M e^{−2πiHx} ρ e^{2πiHx}).
    pub fn diff_spectrum(eigenvalues: &[Rational]) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidInput("difference spectrum needs at least one eigenvalue".into()));
        }
        let mut points = Vec::new();
        for a in eigenvalues {
            for b in eigenvalues {
                points.push(vec![a - b]);
            }
        }
        FrequencySet::from_points(1, &points, false)
    }

    /// Cartesian product of 1-dimensional factors: the spectrum of a
    /// multi-parameter function whose parameters enter independent layers.
    pub fn product(factors: &[FrequencySet]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("product needs at least one factor".into()));
        }
        for f in factors {
            if f.dim != 1 {
                return Err(Error::DimensionMismatch { expected: 1, got: f.dim });
            }
        }
        let mut points: Vec<Vec<Rational>> = vec![vec![]];
        for f in factors {
            let mut next = Vec::with_capacity(points.len() * f.points.len());
            for stem in &points {
                for coord in &f.points {
                    let mut p = stem.clone();
                    p.push(coord[0]);
                    next.push(p);
                }
            }
            points = next;
        }
        FrequencySet::from_points(factors.len(), &points, false)
    }

    /// Image {Mξ : ξ ∈ Ξ} under a rational e×d matrix `m` (rows of length
    /// d = `self.dim()`), e.g. for circuits that tie one parameter to
    /// several layers.  The result lives in dimension e.
    pub fn linear_image(&self, m: &[Vec<Rational>]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidInput("linear image needs at least one matrix row".into()));
        }
        for row in m {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: row.len() });
            }
        }
        let points: Vec<Vec<Rational>> = self
            .points
            .iter()
            .map(|xi| {
                m.iter()
                    .map(|row| row.iter().zip(xi).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        // The image of a symmetric set is symmetric, so this cannot fail.
        FrequencySet::from_points(m.len(), &points, false)
    }

    /// Rescales onto the integer lattice: returns (s ∘ Ξ, s) where
    /// s_j = lcm(denominators)/gcd(numerators) of the nonzero |ξ_j|.  The
    /// result is the coarsest integral form: the nonzero entries of each
    /// coordinate have overall gcd 1.  Coordinates that are zero throughout
    /// get factor 1.
    pub fn scale_to_integers(&self) -> (FrequencySet, ScalingMap) {
        let mut factors = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut denom_lcm: i64 = 1;
            let mut numer_gcd: i64 = 0;
            for p in &self.points {
                let c = p[j];
                if !c.is_zero() {
                    denom_lcm = denom_lcm.lcm(c.denom());
                    numer_gcd = numer_gcd.gcd(&c.numer().abs());
                }
            }
            if numer_gcd == 0 {
                factors.push(Rational::one());
            } else {
                factors.push(Ratio::new(denom_lcm, numer_gcd));
            }
        }
        let s = ScalingMap { factors };
        let scaled_points: Vec<Vec<Rational>> = self
            .points
            .iter()
            .map(|p| p.iter().zip(&s.factors).map(|(c, f)| c * f).collect())
            .collect();
        let scaled = FrequencySet::from_points(self.dim, &scaled_points, false)
            .expect("rescaling preserves symmetry");
        (scaled, s)
    }

    /// Tests whether Ξ is *pointy*: some corner ε ∘ M of its bounding box,
    /// ε ∈ {±1}ᵈ and M_j = max pr_j(Ξ), lies in Ξ.  Returns the first such
    /// sign vector (corners enumerated with +1 before −1, last coordinate
    /// fastest), or `None`.  Pointy sets admit closed-form dual witnesses.
    pub fn is_pointy(&self) -> Option<Vec<i8>> {
        let m: Vec<Rational> = (0..self.dim).map(|j| self.max_coord(j)).collect();
        for mask in 0u32..(1 << self.dim) {
            let eps: Vec<i8> = (0..self.dim)
                .map(|j| if mask >> (self.dim - 1 - j) & 1 == 0 { 1 } else { -1 })
                .collect();
            let corner: Vec<Rational> = m
                .iter()
                .zip(&eps)
                .map(|(mj, &e)| if e > 0 { *mj } else { -mj })
                .collect();
            if self.points.contains(&corner) {
                return Some(eps);
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// |Ξ|, counting 0 and both members of every ± pair.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // 0 is always a member
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.points.iter()
    }

    /// The canonical positive half Ξ⁺, sorted; coefficient vectors across
    /// the crate are aligned with this order.
    pub fn xi_plus(&self) -> &[Vec<Rational>] {
        &self.xi_plus
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.points.contains(p)
    }

    /// max pr_j(Ξ) — by symmetry also max |ξ_j|.
    pub fn max_coord(&self, j: usize) -> Rational {
        self.points.iter().map(|p| p[j]).max().unwrap_or_else(Rational::zero)
    }

    /// True when every coordinate of every point is an integer.
    pub fn is_integral(&self) -> bool {
        self.points.iter().all(|p| p.iter().all(|c| c.denom() == &1))
    }

    /// Ξ⁺ as `f64` vectors, in canonical order.
    pub fn xi_plus_f64(&self) -> Vec<Vec<f64>> {
        self.xi_plus.iter().map(|p| p.iter().map(ratio_to_f64).collect()).collect()
    }
}

impl fmt::Display for FrequencySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0")?;
        for p in &self.xi_plus {
            write!(f, ", ±{}", format_point(p))?;
        }
        write!(f, "}}")
    }
}

fn negate(p: &[Rational]) -> Vec<Rational> {
    p.iter().map(|c| -c).collect()
}

fn is_canonical_positive(p: &[Rational]) -> bool {
    for c in p {
        if c.is_positive() {
            return true;
        }
        if c.is_negative() {
            return false;
        }
    }
    false // the zero vector
}

fn format_point(p: &[Rational]) -> String {
    if p.len() == 1 {
        p[0].to_string()
    } else {
        let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        format!("({})", coords.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set1(xi_plus: &[i64]) -> FrequencySet {
        let pts: Vec<Vec<Rational>> = xi_plus.iter().map(|&n| vec![Rational::from_integer(n)]).collect();
        FrequencySet::from_points(1, &pts, true).unwrap()
    }

    #[test]
    fn from_points_symmetrizes_and_adds_zero() {
        let s = set1(&[1, 3]);
        assert_eq!(s.len(), 5); // {0, ±1, ±3}
        assert_eq!(s.xi_plus(), &[vec![rat(1, 1)], vec![rat(3, 1)]]);
        assert!(s.contains(&[rat(-3, 1)]));
        assert!(s.contains(&[rat(0, 1)]));
    }

    #[test]
    fn from_points_rejects_asymmetric_without_flag() {
        let pts = vec![vec![rat(1, 1)], vec![rat(-1, 1)], vec![rat(3, 1)]];
        let err = FrequencySet::from_points(1, &pts, false).unwrap_err();
        assert!(matches!(err, Error::AsymmetricInput { .. }));
    }

    #[test]
    fn from_points_checks_dimensions() {
        let err = FrequencySet::from_points(2, &[vec![rat(1, 1)]], true).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn diff_spectrum_of_three_levels() {
        // Eigenvalues {0, 1/2, 1}: differences {0, ±1/2, ±1}.
        let s = FrequencySet::diff_spectrum(&[rat(0, 1), rat(1, 2), rat(1, 1)]).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.xi_plus(), &[vec![rat(1, 2)], vec![rat(1, 1)]]);
    }

    #[test]
    fn product_of_two_factors() {
        let a = set1(&[1]);
        let b = set1(&[1, 2]);
        let p = FrequencySet::product(&[a, b]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.len(), 15); // 3 × 5
        assert_eq!(p.xi_plus().len(), 7);
        assert!(p.contains(&[rat(1, 1), rat(-2, 1)]));
    }

    #[test]
    fn linear_image_onto_diagonal() {
        // One parameter driving two layers: ξ ↦ (ξ, ξ).
        let s = set1(&[1]);
        let img = s.linear_image(&[vec![rat(1, 1)], vec![rat(1, 1)]]).unwrap();
        assert_eq!(img.dim(), 2);
        assert_eq!(img.len(), 3); // {(0,0), ±(1,1)}
        assert!(img.contains(&[rat(1, 1), rat(1, 1)]));
        assert!(!img.contains(&[rat(1, 1), rat(-1, 1)]));
    }

    #[test]
    fn scale_to_integers_half_integer_set() {
        let pts = vec![vec![rat(1, 2)], vec![rat(3, 2)]];
        let s = FrequencySet::from_points(1, &pts, true).unwrap();
        let (scaled, map) = s.scale_to_integers();
        assert_eq!(map.factors(), &[rat(2, 1)]);
        assert!(scaled.is_integral());
        assert_eq!(scaled.xi_plus(), &[vec![rat(1, 1)], vec![rat(3, 1)]]);
    }

    #[test]
    fn scale_to_integers_reduces_common_factor() {
        let s = set1(&[4, 8]);
        let (scaled, map) = s.scale_to_integers();
        assert_eq!(map.factors(), &[rat(1, 4)]);
        assert_eq!(scaled.xi_plus(), &[vec![rat(1, 1)], vec![rat(2, 1)]]);
    }

    #[test]
    fn scale_to_integers_identity_on_zero_set() {
        let s = FrequencySet::from_points(1, &[vec![rat(0, 1)]], true).unwrap();
        let (scaled, map) = s.scale_to_integers();
        assert_eq!(map.factors(), &[rat(1, 1)]);
        assert_eq!(scaled.len(), 1);
    }

    #[test]
    fn pointy_product_and_non_pointy_cross() {
        let prod = FrequencySet::product(&[set1(&[1]), set1(&[1, 2])]).unwrap();
        assert_eq!(prod.is_pointy(), Some(vec![1, 1]));

        // Cross {(±1,0), (0,±1)}: bounding-box corners (±1,±1) are absent.
        let cross = FrequencySet::from_points(
            2,
            &[vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            true,
        )
        .unwrap();
        assert_eq!(cross.is_pointy(), None);
    }

    #[test]
    fn one_dimensional_sets_are_always_pointy() {
        assert_eq!(set1(&[1, 3, 7]).is_pointy(), Some(vec![1]));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3"), Some(rat(3, 1)));
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("3/-6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    proptest! {
        #[test]
        fn symmetrized_sets_are_symmetric_with_canonical_half(
            raw in proptest::collection::vec((-20i64..=20, 1i64..=6), 1..8)
        ) {
            let pts: Vec<Vec<Rational>> = raw.iter().map(|&(n, d)| vec![Ratio::new(n, d)]).collect();
            let s = FrequencySet::from_points(1, &pts, true).unwrap();
            for p in s.points() {
                prop_assert!(s.contains(&negate(p)));
            }
            // Ξ⁺ ∪ (−Ξ⁺) ∪ {0} recovers the whole set.
            prop_assert_eq!(s.len(), 2 * s.xi_plus().len() + 1);
        }

        #[test]
        fn rescaled_sets_are_integral_and_coprime(
            raw in proptest::collection::vec((-20i64..=20, 1i64..=6), 1..8)
        ) {
            let pts: Vec<Vec<Rational>> = raw.iter().map(|&(n, d)| vec![Ratio::new(n, d)]).collect();
            let s = FrequencySet::from_points(1, &pts, true).unwrap();
            let (scaled, _) = s.scale_to_integers();
            prop_assert!(scaled.is_integral());
            let g = scaled
                .points()
                .map(|p| p[0].numer().abs())
                .fold(0i64, |acc, n| acc.gcd(&n));
            // Zero-only sets have gcd 0; anything else must reduce to 1.
            prop_assert!(g <= 1);
        }
    }
}
