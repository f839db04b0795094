use std::sync::Arc;

use serde::Serialize;

use super::TimeScale;
use crate::error::{Error, Result};
use crate::SNAP_TOL;

/// How the cell `[nodes[j], nodes[j + 1])` is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    /// Both nodes lie in the same nondegenerate interval: `nodes[j]` is
    /// right-dense and the cell is integrated in the Riemann sense.
    Continuous,
    /// `nodes[j]` is right-scattered with `σ(nodes[j]) = nodes[j + 1]`.
    Jump,
}

/// Discretization nodes over a time scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    ts: TimeScale,
    nodes: Vec<f64>,
    cells: Vec<CellKind>,
    h_max: f64,
}

/// Builds a grid with every component endpoint as a node and a uniform
/// subdivision of each nondegenerate interval into cells no wider than `h_max`.
pub fn build_grid(ts: &TimeScale, h_max: f64) -> Result<Grid> {
    if !(h_max > 0.0 && h_max.is_finite()) {
        return Err(Error::param("h_max", "must be a positive finite number"));
    }
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    for (i, &[l, u]) in ts.components().iter().enumerate() {
        if i > 0 {
            cells.push(CellKind::Jump);
        }
        nodes.push(l);
        if u > l {
            // the small offset keeps exact ratios like 1/0.5 from rounding up
            let n = (((u - l) / h_max) - 1e-9).ceil().max(1.0) as usize;
            for k in 1..n {
                nodes.push(l + (u - l) * (k as f64) / (n as f64));
                cells.push(CellKind::Continuous);
            }
            nodes.push(u);
            cells.push(CellKind::Continuous);
        }
    }
    Ok(Grid {
        ts: ts.clone(),
        nodes,
        cells,
        h_max,
    })
}

impl Grid {
    pub fn time_scale(&self) -> &TimeScale {
        &self.ts
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    /// Widest continuous cell actually produced (at most `h_max`).
    pub fn max_continuous_step(&self) -> f64 {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == CellKind::Continuous)
            .map(|(j, _)| self.step(j))
            .fold(0.0, f64::max)
    }

    /// Kind of the cell starting at node `j`; `None` for the last node.
    pub fn cell(&self, j: usize) -> Option<CellKind> {
        self.cells.get(j).copied()
    }

    pub fn cells(&self) -> &[CellKind] {
        &self.cells
    }

    /// Width of the cell starting at node `j`.
    pub fn step(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    /// Index of the node equal to `t` up to the snap tolerance.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let i = self.nodes.partition_point(|&x| x < t - SNAP_TOL);
        match self.nodes.get(i) {
            Some(&x) if (x - t).abs() <= SNAP_TOL => Ok(i),
            _ => Err(Error::NotANode { t }),
        }
    }
}

/// Values sampled at every node of a grid; piecewise linear inside
/// continuous cells, pointwise at scattered nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(
                "values",
                format!("has length {} but the grid has {} nodes", values.len(), grid.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::param("values", format!("is not finite at node {i}")));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.len()];
        GridFunction { grid, values }
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖self − other‖∞`; both must live on the same grid.
    pub fn distance(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.nodes().iter().copied().zip(self.values.iter().copied())
    }
}

/// Δ-integral of `g` over `[a, b)`: `g(t)·μ(t)` summed over right-scattered
/// nodes plus the trapezoid rule on continuous cells, accumulated in
/// ascending node order.
pub fn delta_integral(g: &GridFunction, a: f64, b: f64) -> Result<f64> {
    let grid = g.grid();
    let ia = grid.index_of(a)?;
    let ib = grid.index_of(b)?;
    if ia > ib {
        return Err(Error::Domain(format!("delta_integral needs a <= b, got a = {a}, b = {b}")));
    }
    Ok(delta_integral_indices(g, ia, ib))
}

pub(crate) fn delta_integral_indices(g: &GridFunction, ia: usize, ib: usize) -> f64 {
    let grid = g.grid();
    let v = g.values();
    let mut sum = 0.0;
    for j in ia..ib {
        let h = grid.step(j);
        sum += match grid.cells[j] {
            CellKind::Continuous => 0.5 * (v[j] + v[j + 1]) * h,
            CellKind::Jump => v[j] * h,
        };
    }
    sum
}
