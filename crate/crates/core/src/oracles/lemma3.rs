use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordRep;
use crate::error::{Error, Result};
use crate::linalg::{self, ZERO};
use crate::oracles::quadrature::{gauss_legendre, partition, Cell, CubatureSpec};

/// Largest `|x_i|` accepted by the identity oracle.
pub const MAX_POINT_NORM: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Quadrature {
    pub cubature: CubatureSpec,
    /// Largest accepted relative size of the tail correction.
    pub tail_tolerance: f64,
}

impl Lemma3Quadrature {
    /// Defaults tuned for `n = 1` (cube half-width 24) and `n = 2`.
    pub fn for_n(n: usize) -> Self {
        let cubature = if n == 1 {
            CubatureSpec { radius: 24.0, eta: 0.25, core: 1e-3, order: 6 }
        } else {
            CubatureSpec { radius: 8.0, eta: 0.5, core: 0.25, order: 3 }
        };
        Lemma3Quadrature { cubature, tail_tolerance: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Value {
    /// Tail-corrected integral.
    pub value: Complex64,
    /// Error estimate for `value`.
    pub error: f64,
    /// Integral over the cube of half-width `R`.
    pub inner: Complex64,
    /// Integral over the cube of half-width `2R`.
    pub outer: Complex64,
    pub radius: f64,
    pub cells: usize,
    pub orientation: f64,
}

/// `x ↦ tr{γ_0 ∏_i (\hat{x_i+x} − \hat{x_{i+1}+x})·γ}` with `x_{2n+1} = 0`,
/// using flat `2^n × 2^n` buffers.
struct Integrand {
    d: usize,
    dim: usize,
    gammas: Vec<Vec<Complex64>>,
    gamma0: Vec<Complex64>,
    points: Vec<Vec<f64>>,
}

impl Integrand {
    fn new(rep: &CliffordRep, points: &[Vec<f64>]) -> Self {
        let flat = |m: &linalg::CMat| {
            let d = m.nrows();
            (0..d * d).map(|k| m[(k / d, k % d)]).collect::<Vec<_>>()
        };
        let mut pts = points.to_vec();
        pts.push(vec![0.0; 2 * rep.n()]);
        Integrand {
            d: rep.dim(),
            dim: 2 * rep.n(),
            gammas: rep.gammas().iter().map(flat).collect(),
            gamma0: flat(rep.gamma0()),
            points: pts,
        }
    }

    fn unit(&self, i: usize, x: &[f64], out: &mut [f64]) {
        let mut norm = 0.0;
        for a in 0..self.dim {
            out[a] = self.points[i][a] + x[a];
            norm += out[a] * out[a];
        }
        let norm = norm.sqrt();
        if norm > 0.0 {
            out.iter_mut().for_each(|v| *v /= norm);
        }
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let (d, dim) = (self.d, self.dim);
        let mut acc = self.gamma0.clone();
        let mut next = vec![ZERO; d * d];
        let mut slash = vec![ZERO; d * d];
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        for i in 0..dim {
            self.unit(i, x, &mut a);
            self.unit(i + 1, x, &mut b);
            slash.iter_mut().for_each(|z| *z = ZERO);
            for (axis, g) in self.gammas.iter().enumerate() {
                let c = a[axis] - b[axis];
                for (s, gv) in slash.iter_mut().zip(g) {
                    *s += gv * c;
                }
            }
            for r in 0..d {
                for c in 0..d {
                    let mut t = ZERO;
                    for k in 0..d {
                        t += acc[r * d + k] * slash[k * d + c];
                    }
                    next[r * d + c] = t;
                }
            }
            std::mem::swap(&mut acc, &mut next);
        }
        (0..d).map(|k| acc[k * d + k]).sum()
    }
}

fn check_points(rep: &CliffordRep, points: &[Vec<f64>]) -> Result<()> {
    let dim = 2 * rep.n();
    if rep.n() > 2 {
        return Err(Error::Dimension(format!("identity oracle supports n <= 2, got {}", rep.n())));
    }
    if points.len() != dim || points.iter().any(|p| p.len() != dim) {
        return Err(Error::Dimension(format!("expected {dim} points in R^{dim}")));
    }
    if let Some(p) = points.iter().find(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt() > MAX_POINT_NORM) {
        return Err(Error::Argument(format!("point {p:?} outside |x| <= {MAX_POINT_NORM}")));
    }
    Ok(())
}

fn cube_integral(f: &Integrand, spec: &CubatureSpec, singular: &[Vec<f64>]) -> (Complex64, usize) {
    let cells = partition(f.dim, spec, singular);
    let (nodes, weights) = gauss_legendre(spec.order);
    let per_cell: Vec<Complex64> = cells
        .par_iter()
        .map(|cell| cell_integral(f, cell, &nodes, &weights))
        .collect();
    (per_cell.into_iter().sum(), cells.len())
}

fn cell_integral(f: &Integrand, cell: &Cell, nodes: &[f64], weights: &[f64]) -> Complex64 {
    let dim = f.dim;
    let order = nodes.len();
    let total = order.pow(dim as u32);
    let jac = cell.half.powi(dim as i32);
    let mut x = vec![0.0; dim];
    let mut sum = ZERO;
    for flat in 0..total {
        let mut rest = flat;
        let mut w = jac;
        for axis in 0..dim {
            let k = rest % order;
            rest /= order;
            x[axis] = cell.centre[axis] + cell.half * nodes[k];
            w *= weights[k];
        }
        sum += f.eval(&x) * w;
    }
    sum
}

/// Left-hand side of the graded-trace integral identity.
///
/// The integrand decays like `|x|^{-(2n+1)}` with an odd leading term, so on
/// a centred cube the truncation error is `O(R^{-2})`; the integrals over
/// the cubes of half-width `R` and `2R` are combined by one Richardson step.
pub fn lemma3_lhs(rep: &CliffordRep, points: &[Vec<f64>], quad: &Lemma3Quadrature) -> Result<Lemma3Value> {
    check_points(rep, points)?;
    let f = Integrand::new(rep, points);
    let mut singular: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|v| -v).collect()).collect();
    singular.push(vec![0.0; f.dim]);
    let spec = quad.cubature;
    let (inner, cells_inner) = cube_integral(&f, &spec, &singular);
    let wide = CubatureSpec { radius: 2.0 * spec.radius, ..spec };
    let (outer, cells_outer) = cube_integral(&f, &wide, &singular);
    let correction = (outer - inner) / 3.0;
    let value = outer + correction;
    let scale = value.norm().max(1e-300);
    // Nothing to compare against when the integral itself vanishes.
    let degenerate = linalg::det_columns(points).abs() < 1e-12;
    if !degenerate && correction.norm() > quad.tail_tolerance * scale {
        return Err(Error::Precision {
            message: format!(
                "tail correction {:.3e} exceeds {} of |I| = {:.3e}",
                correction.norm(),
                quad.tail_tolerance,
                scale
            ),
            suggested_radius: 4.0 * spec.radius,
        });
    }
    Ok(Lemma3Value {
        value,
        error: correction.norm(),
        inner,
        outer,
        radius: spec.radius,
        cells: cells_inner + cells_outer,
        orientation: rep.orientation(),
    })
}

/// `s · (−(2π)^n / (i^n n!)) Σ_σ sign(σ) ∏_i x_i^{σ_i}`.
pub fn lemma3_rhs(rep: &CliffordRep, points: &[Vec<f64>]) -> Result<Complex64> {
    check_points(rep, points)?;
    let n = rep.n();
    let two_pi = 2.0 * std::f64::consts::PI;
    let i_n = Complex64::new(0.0, 1.0).powu(n as u32);
    let det = linalg::det_columns(points);
    Ok(-two_pi.powi(n as i32) / (i_n * linalg::factorial(n)) * det * rep.orientation())
}
