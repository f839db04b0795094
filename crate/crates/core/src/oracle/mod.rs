//! Reference computations that share no quadrature code with
//! [`crate::frac`] or [`crate::timescale`]: closed forms, brute-force
//! scattered sums, and an independent real-line integral of the step
//! extension of a sampled function.
//!
//! The gamma function here comes from `statrs`, not from
//! [`crate::frac::gamma_fn`]. All sums run in ascending order.

mod cases;

pub use cases::{
    builtin_studies, load_suites, run_case, run_suite, CaseInput, CaseOutcome, Expected, OracleCase, SampleFn,
    Suite,
};

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::timescale::{GridFunction, TimeScale};

/// `Γ(β+1)/Γ(β+α+1) · t^{β+α}`, the fractional integral of `s^β` on `[0, t]`.
pub fn closed_form_power_integral(alpha: f64, beta: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    gamma(beta + 1.0) / gamma(beta + alpha + 1.0) * t.powf(beta + alpha)
}

/// `Σ_{s < t} (t − s)^{α−1} g(s) μ(s) / Γ(α)` on a purely discrete time
/// scale; `g` holds one sample per point.
pub fn brute_force_discrete(ts: &TimeScale, g: &[f64], alpha: f64, t: f64) -> Result<f64> {
    if !ts.is_discrete() {
        return Err(Error::Domain("brute_force_discrete needs a purely discrete time scale".into()));
    }
    let points: Vec<f64> = ts.components().iter().map(|c| c[0]).collect();
    if g.len() != points.len() {
        return Err(Error::param("g", "needs one sample per point"));
    }
    let end = points
        .iter()
        .position(|&p| (p - t).abs() <= crate::SNAP_TOL)
        .ok_or(Error::NotInTimeScale { t })?;
    let mut sum = 0.0;
    for i in 0..end {
        let mu = points[i + 1] - points[i];
        sum += (t - points[i]).powf(alpha - 1.0) * g[i] * mu;
    }
    Ok(sum / gamma(alpha))
}

/// `λ t^{2α} / (c T² Γ(2α+1))`, the solution for constant conductivity `c`
/// on `[0, T]`.
pub fn constant_f_solution(c: f64, lambda: f64, alpha: f64, end: f64, t: f64) -> f64 {
    if t == 0.0 || lambda == 0.0 {
        return 0.0;
    }
    lambda * t.powf(2.0 * alpha) / (c * end * end * gamma(2.0 * alpha + 1.0))
}

/// Both sides of the extension inequality for a sampled function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionCheck {
    /// `∫_{t0}^{T} g Δt` as computed by the library.
    pub delta: f64,
    /// `∫_{t0}^{T} G(t) dt` for the step extension `G`.
    pub real: f64,
    pub holds: bool,
}

/// Compares the Δ-integral of a nondecreasing sampled `g` against the real
/// integral of its extension `G`, which equals the piecewise-linear
/// interpolant on intervals and holds `g(t)` on each gap `(t, σ(t))`.
pub fn extension_inequality_check(g: &GridFunction, tolerance: f64) -> Result<ExtensionCheck> {
    let vals = g.values();
    if let Some(i) = vals.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::Domain(format!("g is not increasing between nodes {i} and {}", i + 1)));
    }
    let grid = g.grid();
    let nodes = grid.nodes();
    let delta = crate::timescale::delta_integral(g, nodes[0], nodes[nodes.len() - 1])?;
    let real = step_extension_integral(grid.time_scale(), nodes, vals);
    Ok(ExtensionCheck { delta, real, holds: delta <= real + tolerance })
}

/// Integrates `G` over `[t0, T]` breakpoint by breakpoint with two-point
/// Gauss–Legendre, exact for the linear pieces.
fn step_extension_integral(ts: &TimeScale, nodes: &[f64], vals: &[f64]) -> f64 {
    let extension = |s: f64| -> f64 {
        let j = nodes.partition_point(|&x| x <= s).saturating_sub(1);
        if j + 1 >= nodes.len() {
            return vals[nodes.len() - 1];
        }
        let in_interval = ts.components().iter().any(|&[l, u]| l < u && l <= nodes[j] && nodes[j + 1] <= u);
        if in_interval {
            let w = (s - nodes[j]) / (nodes[j + 1] - nodes[j]);
            vals[j] + w * (vals[j + 1] - vals[j])
        } else {
            vals[j]
        }
    };
    let x = 0.5 / 3f64.sqrt();
    let mut sum = 0.0;
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (mid, h) = (0.5 * (a + b), b - a);
        sum += 0.5 * h * (extension(mid - x * h) + extension(mid + x * h));
    }
    sum
}
