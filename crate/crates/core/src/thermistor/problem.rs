use serde::{Deserialize, Serialize};

use crate::conductivity::ConductivityModel;
use crate::error::{Error, Result};
use crate::timescale::{build_grid, Grid, TimeScale};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_THETA: f64 = 1.0;
/// Default `h_max` is the span divided by this many cells.
pub const DEFAULT_CELLS: f64 = 512.0;

/// One instance of the nonlocal thermistor problem together with its
/// discretization and iteration controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblemSpec")]
pub struct ProblemSpec {
    pub time_scale: TimeScale,
    /// Half the derivative order; the equation uses `D^{2α}`.
    pub alpha: f64,
    pub lambda: f64,
    pub model: ConductivityModel,
    pub h_max: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Damping `θ ∈ (0, 1]` in `u ← (1 − θ)u + θ·Ku`.
    pub theta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblemSpec {
    time_scale: TimeScale,
    alpha: f64,
    lambda: f64,
    model: ConductivityModel,
    h_max: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    theta: Option<f64>,
}

impl TryFrom<RawProblemSpec> for ProblemSpec {
    type Error = Error;

    fn try_from(raw: RawProblemSpec) -> Result<Self> {
        let h_max = raw.h_max.unwrap_or(raw.time_scale.span() / DEFAULT_CELLS);
        let spec = ProblemSpec {
            time_scale: raw.time_scale,
            alpha: raw.alpha,
            lambda: raw.lambda,
            model: raw.model,
            h_max,
            tol: raw.tol.unwrap_or(DEFAULT_TOL),
            max_iter: raw.max_iter.unwrap_or(DEFAULT_MAX_ITER),
            theta: raw.theta.unwrap_or(DEFAULT_THETA),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl ProblemSpec {
    /// A problem with default discretization and iteration controls.
    pub fn new(time_scale: TimeScale, alpha: f64, lambda: f64, model: ConductivityModel) -> Result<Self> {
        let h_max = time_scale.span() / DEFAULT_CELLS;
        let spec = ProblemSpec {
            time_scale,
            alpha,
            lambda,
            model,
            h_max,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            theta: DEFAULT_THETA,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_h_max(mut self, h_max: f64) -> Result<Self> {
        self.h_max = h_max;
        self.validate().map(|_| self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate().map(|_| self)
    }

    pub fn with_iteration(mut self, tol: f64, max_iter: usize, theta: f64) -> Result<Self> {
        self.tol = tol;
        self.max_iter = max_iter;
        self.theta = theta;
        self.validate().map(|_| self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::param("alpha", "must lie in (0, 0.5)"));
        }
        // λ = 0 is admitted as the degenerate case with the zero solution
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param("lambda", "must be a finite number >= 0"));
        }
        if !(self.h_max > 0.0 && self.h_max.is_finite()) {
            return Err(Error::param("h_max", "must be a positive finite number"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if self.max_iter < 1 {
            return Err(Error::param("max_iter", "must be at least 1"));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::param("theta", "must lie in (0, 1]"));
        }
        self.model.validate()
    }

    pub fn t0(&self) -> f64 {
        self.time_scale.t0()
    }

    /// `T` after translating `t0` to the origin.
    pub fn span(&self) -> f64 {
        self.time_scale.span()
    }

    /// Order `2α` of the fractional operator in the integral equation.
    pub fn kernel_order(&self) -> f64 {
        2.0 * self.alpha
    }

    pub fn grid(&self) -> Result<Grid> {
        build_grid(&self.time_scale, self.h_max)
    }
}
