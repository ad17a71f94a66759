//! Tensor Gauss-Legendre cubature on a graded cell partition of a cube.
//!
//! A cell of half-width `h` is split into `2^d` children while
//! `h > η · max(ρ, dist(cell, S))` for a set `S` of singular points, so cells
//! shrink linearly towards each point of `S` and grow linearly with distance.

use serde::{Deserialize, Serialize};

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Golub-Welsch free: Newton
/// iteration on the Legendre recurrence).
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 0 { 1.0 } else { p1 };
            let pm1 = p0;
            dp = order as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubatureSpec {
    /// Half-width of the integration cube.
    pub radius: f64,
    /// Grading ratio between cell half-width and distance to `S`.
    pub eta: f64,
    /// Distance below which cells stop shrinking.
    pub core: f64,
    /// Gauss-Legendre points per axis and cell.
    pub order: usize,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub centre: Vec<f64>,
    pub half: f64,
}

fn distance_to_cell(cell: &Cell, p: &[f64]) -> f64 {
    cell.centre
        .iter()
        .zip(p)
        .map(|(c, x)| ((x - c).abs() - cell.half).max(0.0).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// The graded partition of `[-R, R]^d`.
pub fn partition(dim: usize, spec: &CubatureSpec, singular: &[Vec<f64>]) -> Vec<Cell> {
    let mut out = Vec::new();
    let mut stack = vec![Cell {
        centre: vec![0.0; dim],
        half: spec.radius,
    }];
    while let Some(cell) = stack.pop() {
        let dist = singular
            .iter()
            .map(|p| distance_to_cell(&cell, p))
            .fold(f64::INFINITY, f64::min);
        if cell.half > spec.eta * dist.max(spec.core) {
            let h = cell.half / 2.0;
            for corner in 0..1usize << dim {
                let centre = cell
                    .centre
                    .iter()
                    .enumerate()
                    .map(|(axis, c)| if corner >> axis & 1 == 1 { c + h } else { c - h })
                    .collect();
                stack.push(Cell { centre, half: h });
            }
        } else {
            out.push(cell);
        }
    }
    out.sort_by(|a, b| a.centre.partial_cmp(&b.centre).unwrap().then(a.half.total_cmp(&b.half)));
    out
}

/// `∫ f` over the partition with an `order^d` tensor rule per cell.
pub fn integrate<T, F>(cells: &[Cell], order: usize, zero: T, f: F) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(&[f64]) -> T,
{
    let (nodes, weights) = gauss_legendre(order);
    let mut total = zero;
    for cell in cells {
        let dim = cell.centre.len();
        let jac = cell.half.powi(dim as i32);
        let mut idx = vec![0usize; dim];
        let mut x = vec![0.0; dim];
        let mut cell_sum = zero;
        loop {
            let mut w = jac;
            for axis in 0..dim {
                x[axis] = cell.centre[axis] + cell.half * nodes[idx[axis]];
                w *= weights[idx[axis]];
            }
            cell_sum = cell_sum + f(&x) * w;
            let mut axis = 0;
            loop {
                if axis == dim {
                    break;
                }
                idx[axis] += 1;
                if idx[axis] < order {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == dim {
                break;
            }
        }
        total = total + cell_sum;
    }
    total
}
