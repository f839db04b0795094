//! The fractional nonlocal thermistor problem in its integral form
//!
//! ```text
//! u(t) = λ/Γ(2α) ∫_{t0}^{t} (t − s)^{2α−1} f(u(s)) Δs / (∫_{t0}^{T} f(u) Δx)²,
//! ```
//!
//! for `0 < α < 1/2`, solved by Picard iteration on the operator `K`
//! defined by the right-hand side.
//!
//! Only differences `t − s` and the span `T − t0` enter the computation,
//! so a problem posed on `[t0, T]` behaves exactly as its translate to
//! `[0, T − t0]`.

mod bounds;
mod diagnostics;
mod problem;
mod solver;

pub use bounds::{
    contraction_constant, contraction_terms, equicontinuity_modulus, sup_bound, uniqueness_threshold,
    ContractionTerms,
};
pub use diagnostics::{existence_diagnostics, Check, ExistenceDiagnostics};
pub use problem::{ProblemSpec, DEFAULT_MAX_ITER, DEFAULT_THETA, DEFAULT_TOL};
pub use solver::{apply_k, denominator, picard_solve, SolveReport, ThermistorOperator};

/// JSON has no infinity; non-finite values are written as the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub mod json_float {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}
