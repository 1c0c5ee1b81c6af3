//! Optimal finite-support shift rules for trigonometric polynomials.
//!
//! A function with finite Fourier spectrum Ξ ⊂ ℝᵈ,
//!
//! > f(x) = Σ_{ξ∈Ξ} b_ξ e^{2πi ξ·x},   b_{−ξ} = conj(b_ξ),
//!
//! has every partial derivative ∂^α f(x) expressible *exactly* as a finite
//! linear combination Σ_a u_a f(x − a) of shifted evaluations — a *shift
//! rule*.  The coefficient 1-norm Σ_a |u_a| governs the worst-case standard
//! deviation of the estimator built from noisy black-box evaluations of f
//! (e.g. expectation values of a parameterized quantum circuit sampled shot
//! by shot), so the rule of minimum 1-norm is the statistically optimal one.
//!
//! This crate computes such minimum-cost rules and *certifies* them: the
//! minimization over rules is an infinite-dimensional linear program whose
//! dual maximizes (−∂)^α f(0) over functions f with spectrum Ξ and
//! ‖f‖_∞ ≤ 1.  A feasible rule and a dual witness of matching value prove
//! each other optimal; complementary slackness pins the support of the rule
//! to the extreme points of the witness.
//!
//! Modules, bottom-up:
//!
//! * [`freqset`] — exact rational frequency sets Ξ and the operations that
//!   build them (difference spectra, products, linear images, rescaling to
//!   an integer lattice).
//! * [`trigpoly`] — real trigonometric polynomials over a frequency set:
//!   evaluation, differentiation, certified global extrema.
//! * [`lp`] — a dense two-phase simplex solver with Bland's rule, exposing
//!   dual multipliers and the final basis.
//! * [`shiftrule`] — finite signed atomic measures (the rules themselves):
//!   cost, Fourier transform, residuals, application, rescaling, and
//!   best-effort solves on a fixed support.
//! * [`optimize`] — the cutting-plane dual solver, primal recovery from the
//!   final basis, closed-form dual witnesses, sparse recovery from active
//!   sets, and optimality certification.
//! * [`pqcsim`] — a small dense simulator that maps parameterized-circuit
//!   expectation values to their exact trigonometric-polynomial form and
//!   simulates shot-noise estimation.
//! * [`io`] — plain-text instance / rule / circuit file formats and CSV
//!   emitters shared by the `shiftforge` command-line tool.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! examples/
//! ├── frequency_sets.rs   building Ξ: spectra, products, integer rescaling
//! ├── classic_rule.rs     the two-point rule for f(x) = μ + A cos(2πx + φ)
//! ├── dual_optimize.rs    cutting-plane solve + certificate for Ξ⁺ = {1,3}
//! ├── sparse_rule.rs      closed-form duals and equispaced sparse rules
//! ├── simulator.rs        circuit → trigonometric polynomial extraction
//! └── shot_noise.rs       estimator variance against the cost bound
//! ```

pub mod error;
pub mod freqset;
pub mod io;
mod linalg;
pub mod lp;
pub mod optimize;
pub mod pqcsim;
pub mod shiftrule;
pub mod trigpoly;

pub use error::Error;
pub use freqset::{FrequencySet, Rational, ScalingMap};
pub use optimize::{Certificate, DualSolution, SolverConfig};
pub use shiftrule::ShiftRule;
pub use trigpoly::{DerivativeTarget, ExtremaReport, TrigPoly};
