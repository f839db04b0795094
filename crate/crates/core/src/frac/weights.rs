use std::sync::Arc;

use rayon::prelude::*;

use super::{gamma::gamma_positive, FracOrder};
use crate::timescale::{CellKind, Grid, GridFunction};

/// Quadrature weights for `∫_{t0}^{t} (t − s)^{γ−1}/Γ(γ) g(s) Δs` at one
/// target node: the integral is `Σ_j weights[j] · g(nodes[j])`.
///
/// Only nodes up to and including the target carry weights. The target
/// node itself receives a weight only when the cell ending at it is
/// continuous, since the piecewise-linear interpolant of `g` on that cell
/// depends on `g(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights {
    pub target: f64,
    pub target_index: usize,
    pub weights: Vec<f64>,
}

impl KernelWeights {
    pub fn new(grid: &Grid, order: FracOrder, target_index: usize) -> Self {
        KernelWeights {
            target: grid.nodes()[target_index],
            target_index,
            weights: row(grid, order.value(), target_index),
        }
    }

    /// Applies the weights to node values, summing in ascending node order.
    pub fn apply(&self, values: &[f64]) -> f64 {
        dot(&self.weights, values)
    }
}

fn dot(weights: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (w, v) in weights.iter().zip(values) {
        acc += w * v;
    }
    acc
}

/// Product-integration weights: scattered nodes are exact point
/// evaluations `(t − s)^{γ−1} μ(s)`; on a continuous cell the kernel
/// moments against the two linear hat functions are taken in closed form.
fn row(grid: &Grid, gamma: f64, k: usize) -> Vec<f64> {
    let nodes = grid.nodes();
    let t = nodes[k];
    let scale = 1.0 / gamma_positive(gamma);
    let mut w = vec![0.0; k + 1];
    for j in 0..k {
        let a = t - nodes[j];
        let b = t - nodes[j + 1];
        let h = nodes[j + 1] - nodes[j];
        match grid.cells()[j] {
            CellKind::Jump => w[j] += a.powf(gamma - 1.0) * h * scale,
            CellKind::Continuous => {
                let (a_g, b_g) = (a.powf(gamma), b.powf(gamma));
                let m0 = (a_g - b_g) / gamma;
                let m1 = (a_g * a - b_g * b) / (gamma + 1.0);
                // hat for nodes[j] is (τ − b)/h, hat for nodes[j+1] is (a − τ)/h, τ = t − s
                w[j] += ((m1 - b * m0) / h).max(0.0) * scale;
                w[j + 1] += ((a * m0 - m1) / h).max(0.0) * scale;
            }
        }
    }
    w
}

/// Lower-triangular weight table for one grid and order, reused across
/// repeated applications (the Picard loop applies the same operator many
/// times). Immutable after construction.
#[derive(Debug, Clone)]
pub struct FracIntegralOperator {
    grid: Arc<Grid>,
    order: FracOrder,
    rows: Vec<Vec<f64>>,
}

impl FracIntegralOperator {
    pub fn new(grid: Arc<Grid>, order: FracOrder) -> Self {
        let rows = (0..grid.len())
            .into_par_iter()
            .map(|k| row(&grid, order.value(), k))
            .collect();
        FracIntegralOperator { grid, order, rows }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    /// Fractional integral of `values` at every node.
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.grid.len());
        self.rows.iter().map(|r| dot(r, values)).collect()
    }

    pub fn apply(&self, g: &GridFunction) -> GridFunction {
        GridFunction::from_parts_unchecked(Arc::clone(&self.grid), self.apply_values(g.values()))
    }
}
