use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

const HERMITICITY_TOL: f64 = 1e-13;

/// Translation-invariant hopping matrices `t_u`, `u ∈ Z^d`, with `|u| < R`.
#[derive(Debug, Clone)]
pub struct HoppingModel {
    name: String,
    dim: usize,
    orbitals: usize,
    range: usize,
    hoppings: BTreeMap<Vec<i64>, CMat>,
}

fn norm(u: &[i64]) -> f64 {
    u.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()
}

impl HoppingModel {
    pub fn new(name: impl Into<String>, dim: usize, orbitals: usize, range: usize) -> Result<Self> {
        if dim == 0 || orbitals == 0 || range == 0 {
            return Err(Error::Dimension(format!(
                "hopping model needs positive d, Q and R (got {dim}, {orbitals}, {range})"
            )));
        }
        Ok(HoppingModel {
            name: name.into(),
            dim,
            orbitals,
            range,
            hoppings: BTreeMap::new(),
        })
    }

    /// Adds `t` to the hopping at displacement `u` and `t†` at `-u`.
    pub fn add_hopping(&mut self, u: &[i64], t: &CMat) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::Dimension(format!(
                "displacement {u:?} in a {}-dimensional model",
                self.dim
            )));
        }
        if t.nrows() != self.orbitals || t.ncols() != self.orbitals {
            return Err(Error::Dimension(format!(
                "{}x{} hopping block for Q = {}",
                t.nrows(),
                t.ncols(),
                self.orbitals
            )));
        }
        if norm(u) >= self.range as f64 {
            return Err(Error::Geometry(format!(
                "displacement {u:?} outside the hopping range R = {}",
                self.range
            )));
        }
        let q = self.orbitals;
        if u.iter().all(|&x| x == 0) {
            if linalg::hermiticity_error(t) > HERMITICITY_TOL {
                return Err(Error::Argument("on-site block is not Hermitian".into()));
            }
            let entry = self.hoppings.entry(u.to_vec()).or_insert_with(|| linalg::zeros(q, q));
            *entry = &*entry + t;
        } else {
            let minus: Vec<i64> = u.iter().map(|x| -x).collect();
            let entry = self.hoppings.entry(u.to_vec()).or_insert_with(|| linalg::zeros(q, q));
            *entry = &*entry + t;
            let entry = self.hoppings.entry(minus).or_insert_with(|| linalg::zeros(q, q));
            *entry = &*entry + t.adjoint();
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orbitals(&self) -> usize {
        self.orbitals
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn hoppings(&self) -> impl Iterator<Item = (&Vec<i64>, &CMat)> {
        self.hoppings.iter()
    }

    pub fn displacements(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.hoppings.keys()
    }

    pub fn hopping(&self, u: &[i64]) -> Option<&CMat> {
        self.hoppings.get(u)
    }

    /// `t_u ↦ t_u + δ t_u / ‖t_u‖`: every nonzero block moves by spectral norm
    /// `δ` along its own direction. Hermiticity is kept since `‖t†‖ = ‖t‖`.
    pub fn deformed(&self, delta: f64) -> HoppingModel {
        let mut out = self.clone();
        for t in out.hoppings.values_mut() {
            let norm = linalg::spectral_norm(t);
            if norm > 0.0 {
                *t = linalg::scale(t, Complex64::new(1.0 + delta / norm, 0.0));
            }
        }
        out
    }

    /// Bloch Hamiltonian `Ĥ_k = Σ_u t_u e^{-i k·u}`.
    pub fn bloch(&self, k: &[f64]) -> CMat {
        self.bloch_weighted(k, |_| Complex64::new(1.0, 0.0))
    }

    /// `∂Ĥ_k/∂k_axis = Σ_u (-i u_axis) t_u e^{-i k·u}`.
    pub fn bloch_derivative(&self, k: &[f64], axis: usize) -> CMat {
        self.bloch_weighted(k, |u| Complex64::new(0.0, -(u[axis] as f64)))
    }

    fn bloch_weighted(&self, k: &[f64], weight: impl Fn(&[i64]) -> Complex64) -> CMat {
        let q = self.orbitals;
        let mut h = linalg::zeros(q, q);
        for (u, t) in &self.hoppings {
            let phase: f64 = -k.iter().zip(u).map(|(a, &b)| a * b as f64).sum::<f64>();
            let w = weight(u) * Complex64::from_polar(1.0, phase);
            for j in 0..q {
                for i in 0..q {
                    h[(i, j)] += t[(i, j)] * w;
                }
            }
        }
        h
    }
}

/// Uniform magnetic field as a real antisymmetric `d × d` matrix `B̂`, entering
/// through the Peierls factor `e^{iπ(x, B̂ y)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticField {
    b: Vec<Vec<f64>>,
}

impl MagneticField {
    pub fn zero(dim: usize) -> Self {
        MagneticField {
            b: vec![vec![0.0; dim]; dim],
        }
    }

    pub fn new(b: Vec<Vec<f64>>) -> Result<Self> {
        let d = b.len();
        if b.iter().any(|row| row.len() != d) {
            return Err(Error::Dimension("magnetic tensor is not square".into()));
        }
        for i in 0..d {
            for j in 0..d {
                if b[i][j] != -b[j][i] {
                    return Err(Error::Argument(format!(
                        "magnetic tensor not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(MagneticField { b })
    }

    /// Field with a single flux `phi` in the `(i, j)` plane: `B̂_ij = -B̂_ji = phi`.
    pub fn planar(dim: usize, i: usize, j: usize, phi: f64) -> Result<Self> {
        if i >= dim || j >= dim || i == j {
            return Err(Error::Dimension(format!("plane ({i}, {j}) in dimension {dim}")));
        }
        let mut b = vec![vec![0.0; dim]; dim];
        b[i][j] = phi;
        b[j][i] = -phi;
        Ok(MagneticField { b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().flatten().all(|&x| x == 0.0)
    }

    /// `(x, B̂ y)`.
    pub fn form(&self, x: &[i64], y: &[i64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.b.iter().enumerate() {
            for (j, &bij) in row.iter().enumerate() {
                if bij != 0.0 {
                    s += x[i] as f64 * bij * y[j] as f64;
                }
            }
        }
        s
    }

    /// `e^{iπ(x, B̂ y)}`.
    pub fn peierls(&self, x: &[i64], y: &[i64]) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.form(x, y))
    }

    /// Checks that the Peierls phases are single valued on a periodic box of
    /// size `L`, i.e. that every `L · B̂_ij` is an even integer.
    pub fn check_commensurate(&self, size: usize) -> Result<()> {
        for (i, row) in self.b.iter().enumerate() {
            for (j, &bij) in row.iter().enumerate() {
                let lb = size as f64 * bij;
                let half = lb / 2.0;
                if (half - half.round()).abs() > 1e-9 {
                    return Err(Error::Flux {
                        row: i,
                        col: j,
                        value: bij,
                        size,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_partner_is_added() {
        let mut m = HoppingModel::new("t", 2, 2, 2).unwrap();
        let t = CMat::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64 + 1.0));
        m.add_hopping(&[1, 0], &t).unwrap();
        let back = m.hopping(&[-1, 0]).unwrap();
        assert_eq!(linalg::max_abs_diff(back, &t.adjoint().to_owned()), 0.0);
        assert!(m.add_hopping(&[2, 0], &t).is_err());
        assert!(m.add_hopping(&[1], &t).is_err());
    }

    #[test]
    fn bloch_matrix_is_hermitian() {
        let mut m = HoppingModel::new("t", 2, 2, 2).unwrap();
        let t = CMat::from_fn(2, 2, |i, j| Complex64::new(0.3 * (i + j) as f64, 0.7 * i as f64));
        m.add_hopping(&[0, 1], &t).unwrap();
        let h = m.bloch(&[0.3, -1.1]);
        assert!(linalg::hermiticity_error(&h) < 1e-14);
    }

    #[test]
    fn field_validation() {
        assert!(MagneticField::new(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).is_err());
        let b = MagneticField::planar(2, 0, 1, 0.25).unwrap();
        assert!(b.check_commensurate(8).is_ok());
        assert!(matches!(b.check_commensurate(4), Err(Error::Flux { .. })));
        assert_eq!(b.form(&[1, 0], &[0, 1]), 0.25);
    }
}
