//! Electrical conductivity models `f` that are bounded between positive
//! constants `c1 ≤ f ≤ c2` and Lipschitz with constant `L_f`.
//!
//! Every model is defined on `u ≥ 0`; negative arguments are evaluated at
//! `max(u, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConductivityModel {
    /// `f(u) = c`.
    Constant { c: f64 },
    /// `f(u) = clamp(base + slope·u, lo, hi)`.
    ClampedAffine { base: f64, slope: f64, lo: f64, hi: f64 },
    /// `f(u) = c1 + (c2 − c1)·scale/(scale + u)`, decreasing from `c2` at
    /// `u = 0` towards `c1`.
    BoundedRational { c1: f64, c2: f64, scale: f64 },
    /// Linear interpolation between breakpoints, constant beyond them.
    Table { breakpoints: Vec<f64>, values: Vec<f64> },
}

/// The certified constants `(c1, c2, L_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub lipschitz: f64,
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be positive and finite, got {v}")))
    }
}

impl ConductivityModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ConductivityModel::Constant { c } => positive("model.c", *c),
            ConductivityModel::ClampedAffine { base, slope, lo, hi } => {
                if !base.is_finite() || !slope.is_finite() {
                    return Err(Error::param("model.base/slope", "must be finite"));
                }
                positive("model.lo", *lo)?;
                positive("model.hi", *hi)?;
                if lo > hi {
                    return Err(Error::param("model.lo", "must not exceed model.hi"));
                }
                Ok(())
            }
            ConductivityModel::BoundedRational { c1, c2, scale } => {
                positive("model.c1", *c1)?;
                positive("model.c2", *c2)?;
                positive("model.scale", *scale)?;
                if c1 > c2 {
                    return Err(Error::param("model.c1", "must not exceed model.c2"));
                }
                Ok(())
            }
            ConductivityModel::Table { breakpoints, values } => {
                if breakpoints.is_empty() || breakpoints.len() != values.len() {
                    return Err(Error::param(
                        "model.breakpoints",
                        "must be nonempty and match model.values in length",
                    ));
                }
                if breakpoints.iter().any(|b| !b.is_finite())
                    || !breakpoints.windows(2).all(|w| w[0] < w[1])
                {
                    return Err(Error::param("model.breakpoints", "must be finite and strictly increasing"));
                }
                values.iter().try_for_each(|&v| positive("model.values", v))
            }
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let u = u.max(0.0);
        match self {
            ConductivityModel::Constant { c } => *c,
            ConductivityModel::ClampedAffine { base, slope, lo, hi } => (base + slope * u).clamp(*lo, *hi),
            ConductivityModel::BoundedRational { c1, c2, scale } => c1 + (c2 - c1) * scale / (scale + u),
            ConductivityModel::Table { breakpoints, values } => {
                let n = breakpoints.len();
                if u <= breakpoints[0] {
                    return values[0];
                }
                if u >= breakpoints[n - 1] {
                    return values[n - 1];
                }
                let i = breakpoints.partition_point(|&b| b <= u) - 1;
                let w = (u - breakpoints[i]) / (breakpoints[i + 1] - breakpoints[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    pub fn constants(&self) -> Constants {
        match self {
            ConductivityModel::Constant { c } => Constants { c1: *c, c2: *c, lipschitz: 0.0 },
            ConductivityModel::ClampedAffine { slope, lo, hi, .. } => Constants {
                c1: *lo,
                c2: *hi,
                lipschitz: slope.abs(),
            },
            ConductivityModel::BoundedRational { c1, c2, scale } => Constants {
                c1: *c1,
                c2: *c2,
                lipschitz: (c2 - c1) / scale,
            },
            ConductivityModel::Table { breakpoints, values } => {
                let lipschitz = breakpoints
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(b, v)| ((v[1] - v[0]) / (b[1] - b[0])).abs())
                    .fold(0.0, f64::max);
                Constants {
                    c1: values.iter().copied().fold(f64::INFINITY, f64::min),
                    c2: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    lipschitz,
                }
            }
        }
    }
}

/// `f(u)` for the model.
pub fn eval_f(m: &ConductivityModel, u: f64) -> f64 {
    m.eval(u)
}

/// `(c1, c2, L_f)` for the model.
pub fn constants(m: &ConductivityModel) -> (f64, f64, f64) {
    let c = m.constants();
    (c.c1, c.c2, c.lipschitz)
}
