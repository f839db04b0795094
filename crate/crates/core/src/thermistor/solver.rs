use std::sync::Arc;

use serde::Serialize;

use super::bounds::{contraction_constant, sup_bound, uniqueness_threshold};
use super::{json_float, ProblemSpec};
use crate::error::{Error, Result};
use crate::frac::{FracIntegralOperator, FracOrder};
use crate::timescale::{delta_integral, Grid, GridFunction};

/// The fixed-point operator
///
/// ```text
/// Ku(t) = λ/Γ(2α) ∫_{t0}^{t} (t − s)^{2α−1} f(u(s)) Δs / (∫_{t0}^{T} f(u) Δx)²
/// ```
///
/// with its product-integration weight table built once per grid.
#[derive(Debug, Clone)]
pub struct ThermistorOperator {
    spec: ProblemSpec,
    integral: FracIntegralOperator,
}

impl ThermistorOperator {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let grid = Arc::new(spec.grid()?);
        let order = FracOrder::new(spec.kernel_order())?;
        Ok(ThermistorOperator {
            spec: spec.clone(),
            integral: FracIntegralOperator::new(grid, order),
        })
    }

    /// Same grid and weight table, different `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Ok(ThermistorOperator {
            spec: self.spec.clone().with_lambda(lambda)?,
            integral: self.integral.clone(),
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.integral.grid()
    }

    fn check_grid(&self, u: &GridFunction) -> Result<()> {
        if u.grid().nodes() != self.grid().nodes() {
            return Err(Error::param("u", "is not defined on the problem grid"));
        }
        Ok(())
    }

    /// `(∫_{t0}^{T} f(u) Δx)²`.
    pub fn denominator(&self, u: &GridFunction) -> Result<f64> {
        self.check_grid(u)?;
        let fu = u.map(|v| self.spec.model.eval(v));
        let grid = self.grid();
        let mass = delta_integral(&fu, grid.nodes()[0], grid.nodes()[grid.len() - 1])?;
        Ok(mass * mass)
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        let denom = self.denominator(u)?;
        let fu: Vec<f64> = u.values().iter().map(|&v| self.spec.model.eval(v)).collect();
        let lambda = self.spec.lambda;
        let values = self
            .integral
            .apply_values(&fu)
            .into_iter()
            .map(|i| lambda * i / denom)
            .collect();
        Ok(GridFunction::from_parts_unchecked(Arc::clone(self.grid()), values))
    }

    pub fn solve(&self, u0: Option<GridFunction>) -> Result<SolveReport> {
        let mut u = match u0 {
            Some(u0) => {
                self.check_grid(&u0)?;
                u0
            }
            None => GridFunction::zeros(Arc::clone(self.grid())),
        };
        let spec = &self.spec;
        let theta = spec.theta;
        let mut trace = Vec::new();
        let mut converged = false;
        while trace.len() < spec.max_iter {
            let ku = self.apply(&u)?;
            let next = if theta == 1.0 {
                ku
            } else {
                let vals = u.values().iter().zip(ku.values()).map(|(a, b)| (1.0 - theta) * a + theta * b).collect();
                GridFunction::from_parts_unchecked(Arc::clone(self.grid()), vals)
            };
            let step = next.distance(&u);
            trace.push(step);
            u = next;
            if step <= spec.tol {
                converged = true;
                break;
            }
        }
        let residual = self.apply(&u)?.distance(&u);
        let q = contraction_constant(spec);
        let d_last = *trace.last().expect("max_iter >= 1");
        let apriori_bound = (q < 1.0).then(|| q * d_last / (1.0 - q));
        let positive = u.values().iter().all(|&v| v >= 0.0)
            && (spec.lambda == 0.0 || u.values()[1..].iter().all(|&v| v > 0.0));
        Ok(SolveReport {
            iterations: trace.len(),
            converged,
            trace,
            q,
            lambda_star: uniqueness_threshold(spec),
            residual,
            apriori_bound,
            sup_bound: sup_bound(spec),
            positive,
            solution: u,
        })
    }
}

/// `(∫_{t0}^{T} f(u) Δx)²` for `u` on the problem grid.
pub fn denominator(spec: &ProblemSpec, u: &GridFunction) -> Result<f64> {
    ThermistorOperator::new(spec)?.denominator(u)
}

/// `Ku` at every node of the problem grid; `Ku(t0) = 0`.
pub fn apply_k(spec: &ProblemSpec, u: &GridFunction) -> Result<GridFunction> {
    ThermistorOperator::new(spec)?.apply(u)
}

/// Picard iteration `u ← (1 − θ)u + θ·Ku` from `u0` (zero when `None`).
///
/// Stops once a step `‖u_{k+1} − u_k‖∞` falls to `tol`, or after
/// `max_iter` applications of `K`; non-convergence is reported through
/// [`SolveReport::converged`], not as an error.
pub fn picard_solve(spec: &ProblemSpec, u0: Option<GridFunction>) -> Result<SolveReport> {
    ThermistorOperator::new(spec)?.solve(u0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(serialize_with = "serialize_solution")]
    pub solution: GridFunction,
    /// Number of applications of `K`.
    pub iterations: usize,
    pub converged: bool,
    /// Step norms `d_k = ‖u_{k+1} − u_k‖∞`.
    pub trace: Vec<f64>,
    pub q: f64,
    #[serde(serialize_with = "json_float::serialize")]
    pub lambda_star: f64,
    /// `‖Ku − u‖∞` at the returned iterate.
    pub residual: f64,
    /// `q·d_last/(1 − q)`, only when `q < 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apriori_bound: Option<f64>,
    pub sup_bound: f64,
    pub positive: bool,
}

impl SolveReport {
    /// Largest observed ratio `d_{k+1}/d_k` over steps with `d_k > 0`.
    pub fn max_step_ratio(&self) -> Option<f64> {
        self.trace
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .reduce(f64::max)
    }
}

fn serialize_solution<S: serde::Serializer>(g: &GridFunction, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Samples<'a> {
        t: &'a [f64],
        u: &'a [f64],
    }
    Samples { t: g.grid().nodes(), u: g.values() }.serialize(s)
}
