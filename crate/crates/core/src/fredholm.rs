//! The Dirac phase `D̂ = (X + x₀)·γ / |X + x₀|`, its grading `Γ = 1 ⊗ γ₀`, and
//! the truncated supertrace estimate of the Fredholm index of `P⁻ D̂ P⁺`.
//!
//! Spinor-augmented matrices use the index `state · 2^n + spinor`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordRep;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::{FermiProjector, FiniteVolume};

/// What `D̂` is set to on the site where `x + x₀ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Insertion {
    /// `(1/√(2n)) Σ_i γ_i`.
    Symmetric,
    /// `γ_1`.
    FirstAxis,
}

#[derive(Debug, Clone)]
pub struct DiracPhase {
    rep: CliffordRep,
    volume: FiniteVolume,
    x0: Vec<f64>,
    insertion: Insertion,
    blocks: Vec<CMat>,
    shifted: Vec<Vec<f64>>,
}

pub fn dirac_phase(vol: &FiniteVolume, rep: &CliffordRep, x0: &[f64], insertion: Insertion) -> Result<DiracPhase> {
    if vol.dim() != 2 * rep.n() {
        return Err(Error::Dimension(format!(
            "Clifford representation with n = {} on a {}-dimensional volume",
            rep.n(),
            vol.dim()
        )));
    }
    if x0.len() != vol.dim() {
        return Err(Error::Dimension(format!("offset {x0:?} in dimension {}", vol.dim())));
    }
    if x0.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Argument(format!("offset {x0:?} outside [0, 1]^d")));
    }
    let special = match insertion {
        Insertion::Symmetric => {
            let w = 1.0 / (vol.dim() as f64).sqrt();
            rep.gamma_dot_unchecked(&vec![w; vol.dim()])
        }
        Insertion::FirstAxis => rep.gamma(0).clone(),
    };
    let mut blocks = Vec::with_capacity(vol.num_sites());
    let mut shifted = Vec::with_capacity(vol.num_sites());
    for site in 0..vol.num_sites() {
        let v: Vec<f64> = vol.position(site).iter().zip(x0).map(|(&p, &o)| p as f64 + o).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        blocks.push(if norm == 0.0 {
            special.clone()
        } else {
            rep.gamma_dot_unchecked(&v.iter().map(|c| c / norm).collect::<Vec<_>>())
        });
        shifted.push(v);
    }
    Ok(DiracPhase {
        rep: rep.clone(),
        volume: vol.clone(),
        x0: x0.to_vec(),
        insertion,
        blocks,
        shifted,
    })
}

impl DiracPhase {
    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn insertion(&self) -> Insertion {
        self.insertion
    }

    /// Spinor block `D̂(x)` at a site.
    pub fn block(&self, site: usize) -> &CMat {
        &self.blocks[site]
    }

    /// `|x + x₀|` for a site.
    pub fn radius(&self, site: usize) -> f64 {
        self.shifted[site].iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Dimension of the augmented space `Q L^d 2^n`.
    pub fn dim(&self) -> usize {
        self.volume.num_states() * self.rep.dim()
    }

    /// Dense `D̂` on the augmented space.
    pub fn matrix(&self) -> CMat {
        let s = self.rep.dim();
        let q = self.volume.orbitals();
        let mut m = linalg::zeros(self.dim(), self.dim());
        for state in 0..self.volume.num_states() {
            let b = &self.blocks[state / q];
            for i in 0..s {
                for j in 0..s {
                    m[(state * s + i, state * s + j)] = b[(i, j)];
                }
            }
        }
        m
    }

    /// Dense grading `Γ = 1 ⊗ γ₀`.
    pub fn grading(&self) -> CMat {
        linalg::kron(&linalg::identity(self.volume.num_states()), self.rep.gamma0())
    }

    /// `K = [D̂, P ⊗ 1]`, entrywise `P_ab (D̂(x_a) - D̂(x_b))`.
    pub fn commutator(&self, p: &CMat) -> Result<CMat> {
        if p.nrows() != self.volume.num_states() || p.ncols() != self.volume.num_states() {
            return Err(Error::Dimension(format!(
                "{}x{} projector on a volume with {} states",
                p.nrows(),
                p.ncols(),
                self.volume.num_states()
            )));
        }
        let s = self.rep.dim();
        let q = self.volume.orbitals();
        Ok(CMat::from_fn(self.dim(), self.dim(), |i, j| {
            let (a, si) = (i / s, i % s);
            let (b, sj) = (j / s, j % s);
            let pab = p[(a, b)];
            if pab == Complex64::new(0.0, 0.0) {
                return pab;
            }
            pab * (self.blocks[a / q][(si, sj)] - self.blocks[b / q][(si, sj)])
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEstimate {
    pub radii: Vec<f64>,
    /// `½ Tr_R{Γ K^{2n+1} D̂}` for each radius (real part).
    pub values: Vec<f64>,
    pub imag: Vec<f64>,
    /// Limit of the least-squares fit `c + a/R` over the last three radii.
    pub extrapolated: f64,
    /// `None` when the sequence has not settled.
    pub nearest_integer: Option<i64>,
    pub distance: f64,
    pub x0: Vec<f64>,
    pub insertion: Insertion,
    pub orientation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Least-squares `c` in `v ≈ c + a/R`.
fn extrapolate(radii: &[f64], values: &[f64]) -> f64 {
    if radii.len() == 1 {
        return values[0];
    }
    let xs: Vec<f64> = radii.iter().map(|r| 1.0 / r).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, values.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    my - slope * mx
}

/// Truncated supertrace `½ Tr_R{Γ [D̂, P]^{2n+1} D̂}` over growing radii,
/// multiplied by the representation's orientation sign so that it is
/// directly comparable with the real-space Chern number.
pub fn index_estimate(p: &FermiProjector, phase: &DiracPhase, radii: &[f64]) -> Result<IndexEstimate> {
    index_estimate_matrix(&p.projector, phase, radii)
}

pub fn index_estimate_matrix(p: &CMat, phase: &DiracPhase, radii: &[f64]) -> Result<IndexEstimate> {
    let vol = &phase.volume;
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 {
        return Err(Error::Argument(format!("radii {radii:?} must be positive and increasing")));
    }
    let r_max = *radii.last().unwrap();
    if r_max + 1.0 > (vol.size() / 2) as f64 {
        return Err(Error::Argument(format!(
            "largest radius {r_max} does not fit inside a box of size {}",
            vol.size()
        )));
    }
    let k = phase.commutator(p)?;
    let s = phase.rep.dim();
    let q = vol.orbitals();
    let n = phase.rep.n();
    let sites: Vec<usize> = (0..vol.num_sites()).filter(|&x| phase.radius(x) <= r_max).collect();
    let rows: Vec<usize> = sites
        .iter()
        .flat_map(|&x| (0..q * s).map(move |i| x * q * s + i))
        .collect();
    // X = K^{2n}[rows, :]
    let mut x = linalg::select_rows(&k, &rows);
    for _ in 1..2 * n {
        x = &x * &k;
    }
    let gamma0 = phase.rep.gamma0();
    let mut per_site = Vec::with_capacity(sites.len());
    for (si, &site) in sites.iter().enumerate() {
        let d = phase.block(site);
        let mut total = Complex64::new(0.0, 0.0);
        for alpha in 0..q {
            let base = si * q * s + alpha * s;
            let col0 = (site * q + alpha) * s;
            // (K^{2n+1}) restricted to this state's spinor block.
            let kb = CMat::from_fn(s, s, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..x.ncols() {
                    acc += x[(base + i, l)] * k[(l, col0 + j)];
                }
                acc
            });
            total += linalg::trace(&(gamma0 * &kb * d));
        }
        per_site.push((phase.radius(site), total * 0.5));
    }
    let orientation = phase.rep.orientation();
    let mut values = Vec::with_capacity(radii.len());
    let mut imag = Vec::with_capacity(radii.len());
    for &r in radii {
        let v: Complex64 = per_site.iter().filter(|(rad, _)| *rad <= r).map(|(_, v)| v).sum();
        values.push(v.re * orientation);
        imag.push(v.im * orientation);
    }
    let tail = values.len().saturating_sub(3);
    let extrapolated = extrapolate(&radii[tail..], &values[tail..]);
    let settled = values.windows(2).last().is_none_or(|w| (w[1] - w[0]).abs() <= 0.5);
    let (nearest_integer, warning) = if settled {
        (Some(extrapolated.round() as i64), None)
    } else {
        (
            None,
            Some("index sequence has not converged at the largest radii; no integer claimed".to_string()),
        )
    };
    Ok(IndexEstimate {
        radii: radii.to_vec(),
        values,
        imag,
        extrapolated,
        nearest_integer,
        distance: (extrapolated - extrapolated.round()).abs(),
        x0: phase.x0.clone(),
        insertion: phase.insertion,
        orientation,
        warning,
    })
}

/// `(Σ_k s_k^q)^{1/q}` over the singular values of `[D̂, P ⊗ 1]` on the volume.
pub fn commutator_schatten(p: &FermiProjector, phase: &DiracPhase, q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Argument(format!("Schatten exponent q = {q} must be positive")));
    }
    let k = phase.commutator(&p.projector)?;
    // K is anti-Hermitian, so its singular values are |eig(iK)|.
    let ik = linalg::scale(&k, Complex64::new(0.0, 1.0));
    let values = linalg::hermitian_eigenvalues(&ik)?;
    Ok(values.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q))
}
