//! Seeded random hopping perturbations `λ ω_{x,y}^{αβ}`.
//!
//! One uniform variate in `[-1/2, 1/2]` is drawn per unordered bond-orbital
//! pair within the clean hopping range and mirrored onto its partner, so that
//! `ω_{x,y}^{αβ} = ω_{y,x}^{βα}` and the perturbed Hamiltonian stays Hermitian.
//!
//! Stream layout: the realization with seed `s` reads a ChaCha8 keystream
//! seeded by `s`. The bond `(x, y)` with `x - y = u` for `u` in the half set
//! `H⁺` (lexicographically positive displacements plus `0`) is anchored at its
//! column site `y`; its `(α, β)` entry is the `k`-th 64-bit word with
//! `k = ((y · |H⁺| + h(u)) · Q + α) · Q + β`, mapped to `(w >> 11) · 2⁻⁵³ - 1/2`.
//! Every value is therefore a fixed function of `(seed, site, bond, α, β)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Boundary, FiniteVolume, HoppingModel};

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    seed: u64,
    lambda: f64,
    volume: FiniteVolume,
    half: Vec<Vec<i64>>,
    values: Vec<f64>,
}

/// All `u` with `|u| < R`, in lexicographic order.
pub(crate) fn displacements_within(dim: usize, range: usize) -> Vec<Vec<i64>> {
    let r = range as i64;
    let mut out = Vec::new();
    let mut u = vec![-(r - 1).max(0); dim];
    if r == 0 {
        return out;
    }
    loop {
        if (u.iter().map(|x| x * x).sum::<i64>() as f64) < (range * range) as f64 {
            out.push(u.clone());
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if u[axis] < r - 1 {
                u[axis] += 1;
                break;
            }
            u[axis] = -(r - 1);
        }
    }
}

fn is_half(u: &[i64]) -> bool {
    match u.iter().find(|&&x| x != 0) {
        None => true,
        Some(&x) => x > 0,
    }
}

fn to_unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64) - 0.5
}

/// Draws one realization on `vol` for the bonds of `model`'s range.
pub fn sample_disorder(
    vol: &FiniteVolume,
    model: &HoppingModel,
    lambda: f64,
    seed: u64,
) -> Result<DisorderRealization> {
    if vol.dim() != model.dim() || vol.orbitals() != model.orbitals() {
        return Err(Error::Dimension(format!(
            "model (d={}, Q={}) does not match volume (d={}, Q={})",
            model.dim(),
            model.orbitals(),
            vol.dim(),
            vol.orbitals()
        )));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Argument(format!("disorder strength λ = {lambda} must be finite and ≥ 0")));
    }
    let half: Vec<Vec<i64>> = displacements_within(vol.dim(), model.range())
        .into_iter()
        .filter(|u| is_half(u))
        .collect();
    let q = vol.orbitals();
    let count = vol.num_sites() * half.len() * q * q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..count).map(|_| to_unit(rng.next_u64())).collect();
    Ok(DisorderRealization {
        seed,
        lambda,
        volume: vol.clone(),
        half,
        values,
    })
}

impl DisorderRealization {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn volume(&self) -> &FiniteVolume {
        &self.volume
    }

    /// Number of stored variates.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw variates in storage order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn index(&self, anchor: usize, h: usize, a: usize, b: usize) -> usize {
        let q = self.volume.orbitals();
        ((anchor * self.half.len() + h) * q + a) * q + b
    }

    /// `ω_{x,y}^{αβ}` for sites `x`, `y`, or `None` when the bond is out of range.
    pub fn omega_entry(&self, x: usize, y: usize, alpha: usize, beta: usize) -> Option<f64> {
        let u = self.volume.displacement(x, y);
        self.omega_at(y, &u, alpha, beta)
    }

    /// `ω_{y+u,y}^{αβ}`.
    pub(crate) fn omega_at(&self, y: usize, u: &[i64], alpha: usize, beta: usize) -> Option<f64> {
        if let Some(h) = self.half.iter().position(|v| v == u) {
            let (a, b) = if u.iter().all(|&c| c == 0) && alpha > beta {
                (beta, alpha)
            } else {
                (alpha, beta)
            };
            return Some(self.values[self.index(y, h, a, b)]);
        }
        let minus: Vec<i64> = u.iter().map(|c| -c).collect();
        let h = self.half.iter().position(|v| *v == minus)?;
        let x = self.volume.translate(y, u)?;
        Some(self.values[self.index(x, h, beta, alpha)])
    }

    /// The shifted configuration `𝔱_a ω` with `ω'_{x,y} = ω_{x-a,y-a}`; only
    /// defined on periodic volumes.
    pub fn translated(&self, a: &[i64]) -> Result<DisorderRealization> {
        if self.volume.boundary() != Boundary::Periodic {
            return Err(Error::Geometry("disorder translation needs a periodic volume".into()));
        }
        if a.len() != self.volume.dim() {
            return Err(Error::Dimension(format!("translation {a:?} in dimension {}", self.volume.dim())));
        }
        let block = self.half.len() * self.volume.orbitals() * self.volume.orbitals();
        let mut values = vec![0.0; self.values.len()];
        for site in 0..self.volume.num_sites() {
            let target = self.volume.translate(site, a).expect("periodic translation");
            values[target * block..(target + 1) * block]
                .copy_from_slice(&self.values[site * block..(site + 1) * block]);
        }
        Ok(DisorderRealization {
            values,
            ..self.clone()
        })
    }
}
