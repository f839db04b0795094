//! Compact time scales, their jump operators, grids and the Δ-integral.
//!
//! A [`TimeScale`] is stored in canonical form: a sorted list of disjoint
//! closed intervals, where an isolated point `p` is the degenerate interval
//! `[p, p]`. On the wire it is a JSON array of `[l, u]` pairs.

mod grid;

pub use grid::{build_grid, delta_integral, CellKind, Grid, GridFunction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SNAP_TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TimeScale {
    components: Vec<[f64; 2]>,
}

impl TryFrom<Vec<[f64; 2]>> for TimeScale {
    type Error = Error;

    fn try_from(components: Vec<[f64; 2]>) -> Result<Self> {
        TimeScale::new(components)
    }
}

impl From<TimeScale> for Vec<[f64; 2]> {
    fn from(ts: TimeScale) -> Self {
        ts.components
    }
}

impl TimeScale {
    pub fn new(components: Vec<[f64; 2]>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidTimeScale("at least one component is required".into()));
        }
        for (i, &[l, u]) in components.iter().enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::InvalidTimeScale(format!("component {i} has a non-finite endpoint")));
            }
            if l > u {
                return Err(Error::InvalidTimeScale(format!("component {i} has l > u ({l} > {u})")));
            }
        }
        for (i, w) in components.windows(2).enumerate() {
            if !(w[0][1] < w[1][0]) {
                return Err(Error::InvalidTimeScale(format!(
                    "components {i} and {} overlap or are unsorted",
                    i + 1
                )));
            }
        }
        let ts = TimeScale { components };
        if !(ts.t0() < ts.end()) {
            return Err(Error::InvalidTimeScale("t0 must be strictly less than T".into()));
        }
        Ok(ts)
    }

    /// The real interval `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![[a, b]])
    }

    /// The integers in `[a, b]`.
    pub fn integers(a: i64, b: i64) -> Result<Self> {
        Self::new((a..=b).map(|k| [k as f64, k as f64]).collect())
    }

    /// A purely discrete time scale from sorted points.
    pub fn points(points: &[f64]) -> Result<Self> {
        Self::new(points.iter().map(|&p| [p, p]).collect())
    }

    pub fn components(&self) -> &[[f64; 2]] {
        &self.components
    }

    pub fn t0(&self) -> f64 {
        self.components[0][0]
    }

    /// Right endpoint `T`.
    pub fn end(&self) -> f64 {
        self.components[self.components.len() - 1][1]
    }

    /// `T − t0`, which is also the Δ-measure of `[t0, T)`.
    pub fn span(&self) -> f64 {
        self.end() - self.t0()
    }

    /// True when every component is a single point.
    pub fn is_discrete(&self) -> bool {
        self.components.iter().all(|&[l, u]| l == u)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// Index of the component holding `t`, with endpoint snapping.
    fn locate(&self, t: f64) -> Option<usize> {
        if !t.is_finite() {
            return None;
        }
        // first component whose right end is not left of t
        let i = self.components.partition_point(|c| c[1] < t - SNAP_TOL);
        let [l, _] = *self.components.get(i)?;
        (t >= l - SNAP_TOL).then_some(i)
    }

    /// Shifts every component by `shift`.
    pub fn translate(&self, shift: f64) -> TimeScale {
        TimeScale {
            components: self.components.iter().map(|&[l, u]| [l + shift, u + shift]).collect(),
        }
    }
}

/// Forward jump `σ(t) = inf{s ∈ 𝕋 : s > t}`, with `σ(T) = T`.
pub fn sigma(ts: &TimeScale, t: f64) -> Result<f64> {
    let i = ts.locate(t).ok_or(Error::NotInTimeScale { t })?;
    let [_, u] = ts.components[i];
    if (t - u).abs() > SNAP_TOL {
        return Ok(t);
    }
    Ok(match ts.components.get(i + 1) {
        Some(next) => next[0],
        None => u,
    })
}

/// Backward jump `ρ(t) = sup{s ∈ 𝕋 : s < t}`, with `ρ(t0) = t0`.
pub fn rho(ts: &TimeScale, t: f64) -> Result<f64> {
    let i = ts.locate(t).ok_or(Error::NotInTimeScale { t })?;
    let [l, _] = ts.components[i];
    if (t - l).abs() > SNAP_TOL {
        return Ok(t);
    }
    Ok(if i == 0 { l } else { ts.components[i - 1][1] })
}

/// Graininess `μ(t) = σ(t) − t`.
pub fn graininess(ts: &TimeScale, t: f64) -> Result<f64> {
    let s = sigma(ts, t)?;
    Ok((s - t).max(0.0))
}
