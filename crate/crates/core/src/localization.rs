//! Localization diagnostics: the length `Λ_n`, fractional-moment decay of
//! the resolvent, and Sobolev continuity of the Fermi projector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::{
    build_hamiltonian, fermi_projector, sample_disorder, Core, FermiProjector, FiniteVolume, HoppingModel,
    MagneticField, Resolvent,
};
use crate::nctorus::{derivation, ls_norm, sobolev_norm, DerivationScheme};
use crate::parallel::Workers;

/// Default imaginary offset of the spectral parameter.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Minimum number of distances in a decay fit.
pub const MIN_FIT_DISTANCES: usize = 4;

/// `Λ_n = Σ_i ‖∂_i P‖_{L^{2n}}`, in units of the lattice spacing.
pub fn localization_length(
    p: &FermiProjector,
    vol: &FiniteVolume,
    n: usize,
    scheme: DerivationScheme,
    core: &Core,
) -> Result<f64> {
    localization_length_matrix(&p.projector, vol, n, scheme, core)
}

pub fn localization_length_matrix(
    p: &CMat,
    vol: &FiniteVolume,
    n: usize,
    scheme: DerivationScheme,
    core: &Core,
) -> Result<f64> {
    if n == 0 || vol.dim() != 2 * n {
        return Err(Error::Dimension(format!(
            "n = {n} on a {}-dimensional volume",
            vol.dim()
        )));
    }
    scheme.check(vol)?;
    let s = (2 * n) as f64;
    (0..vol.dim()).try_fold(0.0, |acc, axis| Ok(acc + ls_norm(&derivation(p, vol, axis, scheme)?, s, vol, core)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracMomentFit {
    pub s: f64,
    /// Decay rate in `E|G(0,x)|^s ≤ C_s e^{-sβ|x|}`.
    pub beta: f64,
    pub c_s: f64,
    /// RMS deviation of `ln moment` from the fitted line.
    pub residual: f64,
    pub delta: f64,
    pub fermi_energy: f64,
    pub lambda: f64,
    pub distances: Vec<usize>,
    pub moments: Vec<f64>,
    pub seeds: usize,
    /// No decay, or a decay length beyond half the system size.
    pub delocalized: bool,
}

/// Least-squares line `y = a + b t`, with the RMS residual.
fn fit_line(t: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let m = t.len() as f64;
    let mt = t.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let stt: f64 = t.iter().map(|v| (v - mt).powi(2)).sum();
    let sty: f64 = t.iter().zip(y).map(|(a, b)| (a - mt) * (b - my)).sum();
    let b = sty / stt;
    let a = my - b * mt;
    let rms = (t.iter().zip(y).map(|(ti, yi)| (yi - a - b * ti).powi(2)).sum::<f64>() / m).sqrt();
    (a, b, rms)
}

#[allow(clippy::too_many_arguments)]
/// Disorder average of `‖G(0, r e_i)‖^s` over seeds and the directions `±e_i`,
/// with `G = (H - ε_F - iδ)^{-1}` and the spectral norm of each `Q × Q`
/// block, followed by an exponential fit in `r`.
pub fn fractional_moment_fit(
    model: &HoppingModel,
    vol: &FiniteVolume,
    field: &MagneticField,
    lambda: f64,
    fermi_energy: f64,
    s: f64,
    delta: f64,
    seeds: &[u64],
    distances: &[usize],
    workers: &Workers,
) -> Result<FracMomentFit> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Argument(format!("fractional moment exponent s = {s} outside (0, 1)")));
    }
    if !(delta > 0.0) {
        return Err(Error::Argument(format!("imaginary offset δ = {delta} must be positive")));
    }
    if seeds.is_empty() {
        return Err(Error::Argument("no seeds".into()));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < MIN_FIT_DISTANCES {
        return Err(Error::Argument(format!(
            "decay fit needs at least {MIN_FIT_DISTANCES} distinct distances, got {}",
            sorted.len()
        )));
    }
    let origin = vol.origin_site();
    let centre = vol.position(origin);
    let mut targets = Vec::new();
    for &r in &sorted {
        let mut sites = Vec::new();
        for axis in 0..vol.dim() {
            for sign in [1i64, -1] {
                let mut pos = centre.clone();
                pos[axis] += sign * r as i64;
                let site = vol
                    .site_at(&pos)
                    .filter(|_| 2 * r < vol.size())
                    .ok_or_else(|| Error::Geometry(format!("distance {r} leaves the volume of size {}", vol.size())))?;
                sites.push(site);
            }
        }
        targets.push(sites);
    }
    let q = vol.orbitals();
    let xi = Complex64::new(fermi_energy, delta);
    let origin_states: Vec<usize> = (0..q).map(|a| vol.state_index(origin, a)).collect();
    let per_seed = workers.map(seeds, |&seed| -> Result<Vec<f64>> {
        let disorder = sample_disorder(vol, model, lambda, seed)?;
        let h = build_hamiltonian(model, vol, field, Some(&disorder))?;
        let cols = Resolvent::new(&h, xi)?.columns(&origin_states)?;
        Ok(targets
            .iter()
            .map(|sites| {
                sites
                    .iter()
                    .map(|&x| {
                        let block = CMat::from_fn(q, q, |a, b| cols[(vol.state_index(x, a), b)]);
                        linalg::spectral_norm(&block).powf(s)
                    })
                    .sum::<f64>()
                    / sites.len() as f64
            })
            .collect())
    });
    let mut moments = vec![0.0; sorted.len()];
    for (seed, values) in seeds.iter().zip(per_seed) {
        let values = values.map_err(|e| Error::Realization { seed: *seed, source: Box::new(e) })?;
        for (m, v) in moments.iter_mut().zip(values) {
            *m += v / seeds.len() as f64;
        }
    }
    if let Some(bad) = moments.iter().find(|m| !(**m > 0.0)) {
        return Err(Error::Numerical(format!("non-positive fractional moment {bad}")));
    }
    let t: Vec<f64> = sorted.iter().map(|&r| r as f64).collect();
    let y: Vec<f64> = moments.iter().map(|m| m.ln()).collect();
    let (a, b, residual) = fit_line(&t, &y);
    let beta = -b / s;
    let delocalized = beta <= 0.0 || 1.0 / beta > vol.size() as f64 / 2.0;
    Ok(FracMomentFit {
        s,
        beta,
        c_s: a.exp(),
        residual,
        delta,
        fermi_energy,
        lambda,
        distances: sorted,
        moments,
        seeds: seeds.len(),
        delocalized,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevRow {
    pub delta_h: f64,
    /// Seed average of `‖p′ − p‖_W`.
    pub norm: f64,
    /// Some seed changed its occupation number or met a level at `ε_F`.
    pub crossing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevTable {
    pub rows: Vec<SobolevRow>,
    /// Slope of `ln ‖p′ − p‖_W` against `ln δh` over rows without crossings.
    pub slope: Option<f64>,
    pub monotone: bool,
}

#[derive(Debug, Clone)]
pub struct SobolevSetup<'a> {
    pub model: &'a HoppingModel,
    pub volume: &'a FiniteVolume,
    pub field: &'a MagneticField,
    pub lambda: f64,
    pub fermi_energy: f64,
    pub n: usize,
    pub scheme: DerivationScheme,
    pub core: &'a Core,
}

/// Tracks `‖p′ − p‖_W` as all hoppings are deformed by [`HoppingModel::deformed`]
/// with the disorder realization held fixed.
pub fn sobolev_continuity(
    setup: &SobolevSetup<'_>,
    deltas: &[f64],
    seeds: &[u64],
    workers: &Workers,
) -> Result<SobolevTable> {
    if deltas.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::Argument("perturbation sizes must be non-negative".into()));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Argument("perturbation sizes must be strictly decreasing".into()));
    }
    if seeds.is_empty() {
        return Err(Error::Argument("no seeds".into()));
    }
    setup.scheme.check(setup.volume)?;
    let vol = setup.volume;
    let per_seed = workers.map(seeds, |&seed| -> Result<Vec<(f64, Option<String>)>> {
        let disorder = sample_disorder(vol, setup.model, setup.lambda, seed)?;
        let h = build_hamiltonian(setup.model, vol, setup.field, Some(&disorder))?;
        let p = fermi_projector(&h, setup.fermi_energy)?;
        deltas
            .iter()
            .map(|&dh| {
                if dh == 0.0 {
                    return Ok((0.0, None));
                }
                let h2 = build_hamiltonian(&setup.model.deformed(dh), vol, setup.field, Some(&disorder))?;
                let p2 = fermi_projector(&h2, setup.fermi_energy)?;
                let warning = if p2.occupied_count != p.occupied_count {
                    Some(format!(
                        "seed {seed}: occupation changed from {} to {} at δh = {dh}",
                        p.occupied_count, p2.occupied_count
                    ))
                } else {
                    p2.warning.clone().map(|w| format!("seed {seed}: {w}"))
                };
                let diff = &p2.projector - &p.projector;
                Ok((sobolev_norm(&diff, setup.n, vol, setup.core, setup.scheme)?, warning))
            })
            .collect()
    });
    let mut rows: Vec<SobolevRow> = deltas
        .iter()
        .map(|&delta_h| SobolevRow { delta_h, norm: 0.0, crossing: false, warning: None })
        .collect();
    for (seed, values) in seeds.iter().zip(per_seed) {
        let values = values.map_err(|e| Error::Realization { seed: *seed, source: Box::new(e) })?;
        for (row, (norm, warning)) in rows.iter_mut().zip(values) {
            row.norm += norm / seeds.len() as f64;
            if let Some(w) = warning {
                row.crossing = true;
                row.warning.get_or_insert(w);
            }
        }
    }
    let usable: Vec<&SobolevRow> = rows.iter().filter(|r| !r.crossing && r.delta_h > 0.0 && r.norm > 0.0).collect();
    let slope = (usable.len() >= 2).then(|| {
        let t: Vec<f64> = usable.iter().map(|r| r.delta_h.ln()).collect();
        let y: Vec<f64> = usable.iter().map(|r| r.norm.ln()).collect();
        fit_line(&t, &y).1
    });
    let monotone = rows.windows(2).all(|w| w[1].norm < w[0].norm);
    Ok(SobolevTable { rows, slope, monotone })
}
