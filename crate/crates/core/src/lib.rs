//! Riemann–Liouville fractional calculus on time scales, and a Picard
//! fixed-point solver for the fractional nonlocal thermistor problem
//!
//! ```text
//!   D^{2α} u(t) = λ f(u) / (∫_{t0}^{T} f(u) Δx)²,   t ∈ (t0, T),
//!   I^β u(t0) = 0 for all β ∈ (0, 1),
//! ```
//!
//! posed on an arbitrary compact time scale (finite union of closed
//! intervals and isolated points).
//!
//! Layout:
//! - [`timescale`]: time scales, jump operators, grids and the Δ-integral.
//! - [`frac`]: Euler gamma, fractional integral/derivative by product integration.
//! - [`conductivity`]: bounded Lipschitz conductivity models `f` with certified constants.
//! - [`thermistor`]: the integral operator `K`, its contraction constant, the
//!   uniqueness threshold on `λ`, a priori bounds and the Picard solver.
//! - [`oracle`]: independent closed-form and brute-force references.
//! - [`cli`]: the `solve`/`threshold`/`sweep`/`verify` commands.

pub mod cli;
pub mod conductivity;
pub mod error;
pub mod frac;
pub mod oracle;
pub mod thermistor;
pub mod timescale;

pub use conductivity::ConductivityModel;
pub use error::{Error, Result};
pub use frac::{frac_derivative, frac_integral, gamma_fn, verify_composition, FracOrder};
pub use thermistor::{picard_solve, ProblemSpec, SolveReport};
pub use timescale::{build_grid, delta_integral, Grid, GridFunction, TimeScale};

/// Absolute tolerance used when matching a real number to a time-scale
/// endpoint or a grid node.
pub const SNAP_TOL: f64 = 1e-12;
