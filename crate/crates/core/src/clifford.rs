//! Irreducible representations of the Euclidean Clifford algebra `Cl_{2n,0}`.
//!
//! Generators are built by tensor doubling from the Pauli matrices:
//!
//! ```text
//! γ_i^(n+1)    = γ_i^(n) ⊗ σ3      (i ≤ 2n)
//! γ_2n+1^(n+1) = 1      ⊗ σ1
//! γ_2n+2^(n+1) = 1      ⊗ σ2
//! ```
//!
//! The chirality element is `γ_0 = -i^{-n} γ_1 ⋯ γ_2n`. For this ordering the
//! graded trace `tr{γ_0 (y_1·γ)⋯(y_2n·γ)}` equals `s · (-i^{-n}) 2^n det(y)`
//! with a fixed orientation sign `s ∈ {±1}`, measured once at construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I, ONE, ZERO};

pub const MAX_HALF_DIMENSION: usize = 4;

#[derive(Debug, Clone)]
pub struct CliffordRep {
    n: usize,
    gammas: Vec<CMat>,
    gamma0: CMat,
    orientation: f64,
}

fn pauli() -> [CMat; 3] {
    let s1 = CMat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
    let s2 = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    });
    let s3 = linalg::from_real_diag(&[1.0, -1.0]);
    [s1, s2, s3]
}

/// `i^{-n}`.
fn inv_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => ONE,
        1 => -I,
        2 => -ONE,
        _ => I,
    }
}

/// Builds the `2^n`-dimensional irreducible representation for `1 ≤ n ≤ 4`.
pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    if n == 0 || n > MAX_HALF_DIMENSION {
        return Err(Error::Dimension(format!(
            "Clifford half-dimension n = {n} outside 1..={MAX_HALF_DIMENSION}"
        )));
    }
    let [s1, s2, s3] = pauli();
    let mut gammas: Vec<CMat> = Vec::new();
    let mut id = linalg::identity(1);
    for _ in 0..n {
        let mut next: Vec<CMat> = gammas.iter().map(|g| linalg::kron(g, &s3)).collect();
        next.push(linalg::kron(&id, &s1));
        next.push(linalg::kron(&id, &s2));
        gammas = next;
        id = linalg::identity(id.nrows() * 2);
    }
    let product = gammas.iter().skip(1).fold(gammas[0].clone(), |acc, g| &acc * g);
    let gamma0 = linalg::scale(&product, -inv_i_pow(n));

    let mut rep = CliffordRep {
        n,
        gammas,
        gamma0,
        orientation: 1.0,
    };
    let basis: Vec<Vec<f64>> = (0..2 * n)
        .map(|i| (0..2 * n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let measured = rep.graded_trace_unchecked(&basis) / rep.bb_prefactor();
    rep.orientation = measured.re.signum();
    Ok(rep)
}

impl CliffordRep {
    /// Half-dimension `n` (the algebra has `2n` generators).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spinor dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn gammas(&self) -> &[CMat] {
        &self.gammas
    }

    /// Generator `γ_i` for `i ∈ 0..2n` (zero-based).
    pub fn gamma(&self, i: usize) -> &CMat {
        &self.gammas[i]
    }

    /// The chirality (grading) element `γ_0`.
    pub fn gamma0(&self) -> &CMat {
        &self.gamma0
    }

    /// Orientation sign `s` relating the graded trace to `-i^{-n} 2^n det`.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// `-i^{-n} 2^n`, the determinant prefactor without orientation.
    pub fn bb_prefactor(&self) -> Complex64 {
        -inv_i_pow(self.n) * (self.dim() as f64)
    }

    /// `s · (-i^{-n}) 2^n`: graded trace divided by the determinant.
    pub fn graded_constant(&self) -> Complex64 {
        self.bb_prefactor() * self.orientation
    }

    /// `Σ_i v^i γ_i`.
    pub fn gamma_dot(&self, v: &[f64]) -> Result<CMat> {
        if v.len() != 2 * self.n {
            return Err(Error::Dimension(format!(
                "vector of length {} contracted with {} generators",
                v.len(),
                2 * self.n
            )));
        }
        Ok(self.gamma_dot_unchecked(v))
    }

    pub(crate) fn gamma_dot_unchecked(&self, v: &[f64]) -> CMat {
        let d = self.dim();
        CMat::from_fn(d, d, |r, c| {
            v.iter()
                .zip(&self.gammas)
                .map(|(&x, g)| g[(r, c)] * x)
                .sum()
        })
    }

    /// `tr{γ_0 (y_1·γ) ⋯ (y_2n·γ)}`.
    pub fn graded_trace(&self, vectors: &[Vec<f64>]) -> Result<Complex64> {
        if vectors.len() != 2 * self.n {
            return Err(Error::Dimension(format!(
                "graded trace needs {} vectors, got {}",
                2 * self.n,
                vectors.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != 2 * self.n) {
            return Err(Error::Dimension(format!(
                "vector of length {} in dimension {}",
                v.len(),
                2 * self.n
            )));
        }
        Ok(self.graded_trace_unchecked(vectors))
    }

    pub(crate) fn graded_trace_unchecked(&self, vectors: &[Vec<f64>]) -> Complex64 {
        let product = vectors
            .iter()
            .fold(self.gamma0.clone(), |acc, v| &acc * self.gamma_dot_unchecked(v));
        linalg::trace(&product)
    }
}

/// Free-function form of [`CliffordRep::gamma_dot`].
pub fn gamma_dot(rep: &CliffordRep, v: &[f64]) -> Result<CMat> {
    rep.gamma_dot(v)
}

/// Free-function form of [`CliffordRep::graded_trace`].
pub fn graded_trace(rep: &CliffordRep, vectors: &[Vec<f64>]) -> Result<Complex64> {
    rep.graded_trace(vectors)
}
