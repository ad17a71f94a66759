//! Finite-volume versions of the trace per unit volume, the derivations
//! `∂_i = i[X_i, ·]` and the `L^s` / Sobolev norms built from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::{Boundary, Core, FiniteVolume};

/// How `i[X_i, f]` is realized on a finite box.
///
/// * `OpenCommutator`: the literal commutator with the origin-centred
///   position operator.
/// * `PeriodicPhase`: `(L/2π)(e^{2πiX_i/L} f e^{-2πiX_i/L} - f)`, which has
///   entries `(L/2π)(e^{2πi(x-y)/L} - 1) f_xy` and tends to `i(x-y) f_xy`.
/// * `MinimalImage`: `i d_xy f_xy` with `d_xy` the minimal-image separation
///   along the axis, set to 0 for the ambiguous separation `L/2`.
///
/// The last two require a periodic volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivationScheme {
    OpenCommutator,
    PeriodicPhase,
    MinimalImage,
}

impl DerivationScheme {
    pub fn name(self) -> &'static str {
        match self {
            DerivationScheme::OpenCommutator => "open-commutator",
            DerivationScheme::PeriodicPhase => "periodic-phase",
            DerivationScheme::MinimalImage => "minimal-image",
        }
    }

    pub fn check(self, vol: &FiniteVolume) -> Result<()> {
        if self != DerivationScheme::OpenCommutator && vol.boundary() != Boundary::Periodic {
            return Err(Error::Scheme(format!("{} needs a periodic volume", self.name())));
        }
        Ok(())
    }
}

impl std::str::FromStr for DerivationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open-commutator" | "open" => Ok(DerivationScheme::OpenCommutator),
            "periodic-phase" | "phase" => Ok(DerivationScheme::PeriodicPhase),
            "minimal-image" => Ok(DerivationScheme::MinimalImage),
            other => Err(Error::Scheme(format!(
                "unknown derivation scheme `{other}` (open-commutator, periodic-phase, minimal-image)"
            ))),
        }
    }
}

/// Site-pair weights `w(x, y)` such that `(∂_i f)_{xα,yβ} = w(x, y) f_{xα,yβ}`,
/// stored row-major over sites.
pub fn derivation_weights(vol: &FiniteVolume, axis: usize, scheme: DerivationScheme) -> Result<Vec<Complex64>> {
    if axis >= vol.dim() {
        return Err(Error::Dimension(format!(
            "direction {axis} in a {}-dimensional volume",
            vol.dim()
        )));
    }
    scheme.check(vol)?;
    let sites = vol.num_sites();
    let pos: Vec<i64> = (0..sites).map(|s| vol.position(s)[axis]).collect();
    let l = vol.size() as i64;
    let mut w = vec![Complex64::new(0.0, 0.0); sites * sites];
    for x in 0..sites {
        for y in 0..sites {
            let d = pos[x] - pos[y];
            w[x * sites + y] = match scheme {
                DerivationScheme::OpenCommutator => Complex64::new(0.0, d as f64),
                DerivationScheme::PeriodicPhase => {
                    let lf = l as f64;
                    (Complex64::from_polar(1.0, 2.0 * PI * d as f64 / lf) - 1.0) * (lf / (2.0 * PI))
                }
                DerivationScheme::MinimalImage => {
                    let r = d.rem_euclid(l);
                    let m = if 2 * r == l {
                        0
                    } else if 2 * r > l {
                        r - l
                    } else {
                        r
                    };
                    Complex64::new(0.0, m as f64)
                }
            };
        }
    }
    Ok(w)
}

fn check_square(f: &CMat, vol: &FiniteVolume) -> Result<()> {
    if f.nrows() != vol.num_states() || f.ncols() != vol.num_states() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix on a volume with {} states",
            f.nrows(),
            f.ncols(),
            vol.num_states()
        )));
    }
    Ok(())
}

/// Multiplies `f` entrywise by precomputed site weights.
pub(crate) fn apply_weights(f: &CMat, vol: &FiniteVolume, w: &[Complex64]) -> CMat {
    let q = vol.orbitals();
    let sites = vol.num_sites();
    CMat::from_fn(f.nrows(), f.ncols(), |i, j| f[(i, j)] * w[(i / q) * sites + j / q])
}

/// `∂_i f` for direction `axis ∈ 0..d`.
pub fn derivation(f: &CMat, vol: &FiniteVolume, axis: usize, scheme: DerivationScheme) -> Result<CMat> {
    check_square(f, vol)?;
    let w = derivation_weights(vol, axis, scheme)?;
    Ok(apply_weights(f, vol, &w))
}

/// `(1/|core|) Σ_{x ∈ core} Σ_α ⟨x,α|f|x,α⟩`.
pub fn trace_per_volume(f: &CMat, vol: &FiniteVolume, core: &Core) -> Result<Complex64> {
    check_square(f, vol)?;
    if core.is_empty() {
        return Err(Error::Argument("empty core".into()));
    }
    let sum: Complex64 = core.states(vol).iter().map(|&s| f[(s, s)]).sum();
    Ok(sum / core.len() as f64)
}

/// `T(|f|^s)^{1/s}` with `|f| = (f f†)^{1/2}`.
///
/// `s = 2` and `s = 4` are evaluated from entries of `f` and `f f†`; other
/// exponents diagonalize `f f†` and clip roundoff negatives to zero.
pub fn ls_norm(f: &CMat, s: f64, vol: &FiniteVolume, core: &Core) -> Result<f64> {
    check_square(f, vol)?;
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::Argument(format!("L^s norm needs s ≥ 1 (got {s})")));
    }
    if core.is_empty() {
        return Err(Error::Argument("empty core".into()));
    }
    let rows = core.states(vol);
    let n = f.ncols();
    let total = if s == 2.0 {
        rows.iter()
            .map(|&r| (0..n).map(|j| f[(r, j)].norm_sqr()).sum::<f64>())
            .sum::<f64>()
    } else if s == 4.0 {
        let g = linalg::select_rows(f, &rows) * f.adjoint();
        (0..g.nrows())
            .map(|r| (0..n).map(|j| g[(r, j)].norm_sqr()).sum::<f64>())
            .sum::<f64>()
    } else {
        let ff = f * f.adjoint();
        let (values, vectors) = linalg::hermitian_eigen(&ff)?;
        let powers: Vec<f64> = values.iter().map(|&v| v.max(0.0).powf(s / 2.0)).collect();
        rows.iter()
            .map(|&r| (0..n).map(|k| vectors[(r, k)].norm_sqr() * powers[k]).sum::<f64>())
            .sum::<f64>()
    };
    Ok((total / core.len() as f64).powf(1.0 / s))
}

/// `‖f‖_W = ‖f‖_{L^{2n}} + Σ_i ‖∂_i f‖_{L^{2n}}`.
pub fn sobolev_norm(f: &CMat, n: usize, vol: &FiniteVolume, core: &Core, scheme: DerivationScheme) -> Result<f64> {
    if vol.dim() != 2 * n {
        return Err(Error::Dimension(format!(
            "Sobolev norm with n = {n} on a {}-dimensional volume",
            vol.dim()
        )));
    }
    let s = (2 * n) as f64;
    let mut total = ls_norm(f, s, vol, core)?;
    for axis in 0..vol.dim() {
        total += ls_norm(&derivation(f, vol, axis, scheme)?, s, vol, core)?;
    }
    Ok(total)
}
