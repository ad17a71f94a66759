use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chern::{realspace_chern_matrix, ChernEstimate, ChernMethod, SeedValue};
use crate::error::{Error, Result};
use crate::localization::localization_length_matrix;
use crate::model::{build_hamiltonian, fermi_projector, model_zoo, sample_disorder, Core, FiniteVolume, HoppingModel, MagneticField};
use crate::nctorus::DerivationScheme;
use crate::parallel::Workers;

/// Everything except `λ` and the seed that a real-space run depends on.
#[derive(Debug, Clone)]
pub struct RealSpaceSetup {
    pub model: HoppingModel,
    pub volume: FiniteVolume,
    pub field: MagneticField,
    pub fermi_energy: f64,
    pub n: usize,
    pub scheme: DerivationScheme,
    pub core: Core,
    /// Also compute `Λ_n` for every realization.
    pub localization: bool,
}

/// Real-space Chern number of one disorder realization.
pub fn realization_chern(setup: &RealSpaceSetup, lambda: f64, seed: u64) -> Result<SeedValue> {
    let disorder = sample_disorder(&setup.volume, &setup.model, lambda, seed)?;
    let h = build_hamiltonian(&setup.model, &setup.volume, &setup.field, Some(&disorder))?;
    let p = fermi_projector(&h, setup.fermi_energy)?;
    let c = realspace_chern_matrix(&p.projector, &setup.volume, setup.n, setup.scheme, &setup.core)?;
    let localization_length = if setup.localization {
        Some(localization_length_matrix(&p.projector, &setup.volume, setup.n, setup.scheme, &setup.core)?)
    } else {
        None
    };
    Ok(SeedValue {
        seed,
        value: c.re,
        imag: c.im,
        occupied: p.occupied_count,
        localization_length,
        warning: p.warning,
    })
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.iter().all(|v| *v == values[0]) {
        return (values[0], 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn run_seeds(setup: &RealSpaceSetup, lambda: f64, seeds: &[u64], workers: &Workers) -> Result<Vec<SeedValue>> {
    if seeds.is_empty() {
        return Err(Error::Argument("no seeds".into()));
    }
    if lambda == 0.0 {
        // Every seed gives the clean system.
        let clean = realization_chern(setup, 0.0, seeds[0])
            .map_err(|e| Error::Realization { seed: seeds[0], source: Box::new(e) })?;
        return Ok(seeds.iter().map(|&seed| SeedValue { seed, ..clean.clone() }).collect());
    }
    workers
        .map(seeds, |&seed| realization_chern(setup, lambda, seed).map_err(|e| (seed, e)))
        .into_iter()
        .map(|r| r.map_err(|(seed, e)| Error::Realization { seed, source: Box::new(e) }))
        .collect()
}

fn summarize(setup: &RealSpaceSetup, per_seed: Vec<SeedValue>) -> ChernEstimate {
    let values: Vec<f64> = per_seed.iter().map(|s| s.value).collect();
    let (value, stderr) = mean_and_stderr(&values);
    let imag = per_seed.iter().map(|s| s.imag).sum::<f64>() / per_seed.len() as f64;
    ChernEstimate {
        value,
        imag,
        n: setup.n,
        method: ChernMethod::RealSpace,
        grid: None,
        min_gap: None,
        size: Some(setup.volume.size()),
        boundary: Some(setup.volume.boundary()),
        scheme: Some(setup.scheme),
        core_sites: Some(setup.core.len()),
        realizations: per_seed.len(),
        stderr,
        warnings: per_seed.iter().filter_map(|s| s.warning.clone()).collect(),
        per_seed,
    }
}

/// Mean over seeds with standard error `sd/√N`; realizations run on the pool
/// and are reduced in seed order.
pub fn disorder_averaged_chern(
    setup: &RealSpaceSetup,
    lambda: f64,
    seeds: &[u64],
    workers: &Workers,
) -> Result<ChernEstimate> {
    Ok(summarize(setup, run_seeds(setup, lambda, seeds, workers)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub m: f64,
    pub lambda: f64,
    pub mean: f64,
    pub stderr: f64,
    pub nearest_integer: i64,
    pub realizations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Disorder-averaged Chern numbers over a `(m, λ)` grid of the model family
/// `family`. All `(point, seed)` pairs share the pool; a failing point is
/// reported in its row and does not stop the others.
pub fn phase_diagram(
    family: &str,
    params: &BTreeMap<String, f64>,
    grid: &[(f64, f64)],
    template: &RealSpaceSetup,
    seeds: &[u64],
    workers: &Workers,
) -> Result<Vec<PhaseRow>> {
    if seeds.is_empty() {
        return Err(Error::Argument("no seeds".into()));
    }
    let setups: Vec<Result<RealSpaceSetup>> = grid
        .iter()
        .map(|&(m, _)| {
            let mut p = params.clone();
            p.insert("m".into(), m);
            let model = model_zoo(family, &p)?;
            Ok(RealSpaceSetup { model, ..template.clone() })
        })
        .collect();
    let tasks: Vec<(usize, u64)> = grid
        .iter()
        .enumerate()
        .filter(|(i, _)| setups[*i].is_ok())
        .flat_map(|(i, &(_, lambda))| {
            let seeds: &[u64] = if lambda == 0.0 { &seeds[..1] } else { seeds };
            seeds.iter().map(move |&s| (i, s))
        })
        .collect();
    let results = workers.map(&tasks, |&(i, seed)| {
        let setup = setups[i].as_ref().expect("only valid points are scheduled");
        realization_chern(setup, grid[i].1, seed)
    });
    let mut per_point: Vec<Vec<SeedValue>> = vec![Vec::new(); grid.len()];
    let mut failures: Vec<Option<String>> = setups.iter().map(|s| s.as_ref().err().map(|e| e.to_string())).collect();
    for (&(i, seed), r) in tasks.iter().zip(results) {
        match r {
            Ok(v) => per_point[i].push(v),
            Err(e) => {
                failures[i].get_or_insert_with(|| Error::Realization { seed, source: Box::new(e) }.to_string());
            }
        }
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &(m, lambda))| {
            if let Some(error) = failures[i].take() {
                return PhaseRow {
                    m,
                    lambda,
                    mean: f64::NAN,
                    stderr: f64::NAN,
                    nearest_integer: 0,
                    realizations: 0,
                    localization_length: None,
                    error: Some(error),
                };
            }
            let mut values = std::mem::take(&mut per_point[i]);
            if lambda == 0.0 {
                let clean = values[0].clone();
                values = seeds.iter().map(|&seed| SeedValue { seed, ..clean.clone() }).collect();
            }
            let xs: Vec<f64> = values.iter().map(|v| v.value).collect();
            let (mean, stderr) = mean_and_stderr(&xs);
            let ls: Vec<f64> = values.iter().filter_map(|v| v.localization_length).collect();
            PhaseRow {
                m,
                lambda,
                mean,
                stderr,
                nearest_integer: mean.round() as i64,
                realizations: values.len(),
                localization_length: (!ls.is_empty()).then(|| ls.iter().sum::<f64>() / ls.len() as f64),
                error: None,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(mean_and_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, s) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
