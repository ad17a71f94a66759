use std::f64::consts::PI;

use ncchern::fredholm::IndexEstimate;
use ncchern::linalg::{self, det_columns, factorial};
use ncchern::localization::{localization_length, SobolevSetup};
use ncchern::oracles::{dixmier_estimate, lemma3_lhs, lemma3_rhs, uniform_field, Lemma3Quadrature};
use ncchern::{
    build_clifford, build_hamiltonian, dirac_phase, disorder_averaged_chern, fermi_projector, fractional_moment_fit,
    index_estimate, kspace_chern, model_zoo, phase_diagram, sample_disorder, sobolev_continuity, ChernEstimate, Core,
    FiniteVolume, FracMomentFit, HoppingModel, MagneticField, PhaseRow, RealSpaceSetup, SobolevTable, Workers,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Command, CoreSpec, ExperimentConfig, Lemma};
use crate::error::CliError;

/// Dense complex matrices alive at once in the heaviest step.
const MATRIX_COPIES: f64 = 6.0;

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Chern(ChernEstimate),
    Index(IndexReport),
    Localization(Vec<LocalizationRow>),
    Identity(IdentityReport),
    PhaseDiagram(Vec<PhaseRow>),
    Sobolev(SobolevTable),
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexSeed {
    pub seed: u64,
    pub occupied: usize,
    #[serde(flatten)]
    pub estimate: IndexEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub per_seed: Vec<IndexSeed>,
    /// The common integer when every realization names the same one.
    pub consensus: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizationRow {
    #[serde(flatten)]
    pub fit: FracMomentFit,
    /// Seed average of `Λ_n`.
    pub localization_length: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub case: String,
    pub value: [f64; 2],
    pub reference: [f64; 2],
    pub error: f64,
    pub tolerance: f64,
    /// `relative` or `absolute`.
    pub measure: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub lemma: Lemma,
    pub n: usize,
    /// Orientation sign of the Clifford representation.
    pub orientation: f64,
    pub rows: Vec<IdentityRow>,
    pub max_error: f64,
    pub pass: bool,
}

impl Report {
    /// `false` only for an identity check that did not pass.
    pub fn passed(&self) -> bool {
        match self {
            Report::Identity(r) => r.pass,
            _ => true,
        }
    }
}

pub fn run(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    match config.command {
        Command::Kspace => kspace(config),
        Command::Realspace => realspace(config, workers),
        Command::Index => index(config, workers),
        Command::Localization => localization(config, workers),
        Command::VerifyIdentity => identity(config, workers),
        Command::PhaseDiagram => phases(config, workers),
        Command::Sobolev => sobolev(config, workers),
    }
}

fn model(config: &ExperimentConfig) -> Result<HoppingModel, CliError> {
    let m = model_zoo(&config.model.name, &config.model.params)?;
    if m.dim() % 2 != 0 {
        return Err(ncchern::Error::Dimension(format!("model {} has odd dimension {}", m.name(), m.dim())).into());
    }
    if let Some(n) = config.model.n {
        if 2 * n != m.dim() {
            return Err(CliError::Config {
                message: format!("model.n = {n} but {} lives in dimension {}", m.name(), m.dim()),
                line: None,
                column: None,
            });
        }
    }
    Ok(m)
}

fn volume(config: &ExperimentConfig, model: &HoppingModel) -> Result<FiniteVolume, CliError> {
    Ok(FiniteVolume::new(model.dim(), config.volume.size, model.orbitals(), config.volume.boundary)?)
}

fn field(config: &ExperimentConfig, dim: usize) -> Result<MagneticField, CliError> {
    match (&config.volume.flux, &config.volume.field) {
        (Some(_), Some(_)) => Err(CliError::Config {
            message: "volume.flux and volume.field are mutually exclusive".into(),
            line: None,
            column: None,
        }),
        (Some(phi), None) => Ok(MagneticField::planar(dim, 0, 1, *phi)?),
        (None, Some(b)) => {
            let f = MagneticField::new(b.clone())?;
            if f.dim() != dim {
                return Err(ncchern::Error::Dimension(format!("{}x{} field in dimension {dim}", f.dim(), f.dim())).into());
            }
            Ok(f)
        }
        (None, None) => Ok(MagneticField::zero(dim)),
    }
}

fn core(config: &ExperimentConfig, vol: &FiniteVolume) -> Result<Core, CliError> {
    Ok(match config.core() {
        CoreSpec::All => Core::all(vol),
        CoreSpec::Origin => Core::origin(vol),
        CoreSpec::Central(f) => Core::central(vol, f)?,
    })
}

/// Refuses volumes whose matrices exceed the cap.
fn guard(config: &ExperimentConfig, states: usize) -> Result<(), CliError> {
    let cap = config.limits.max_states;
    if states > cap {
        let gib = 16.0 * (states as f64).powi(2) * MATRIX_COPIES / (1u64 << 30) as f64;
        return Err(CliError::Resource {
            command: config.command.name(),
            states,
            cap,
            gib,
        });
    }
    Ok(())
}

fn seeds(config: &ExperimentConfig) -> Result<Vec<u64>, CliError> {
    let s = config.disorder.seed_list();
    if s.is_empty() {
        return Err(CliError::Config {
            message: "no seeds (disorder.seeds is empty or disorder.count = 0)".into(),
            line: None,
            column: None,
        });
    }
    Ok(s)
}

fn setup(config: &ExperimentConfig, model: HoppingModel) -> Result<RealSpaceSetup, CliError> {
    let vol = volume(config, &model)?;
    guard(config, vol.num_states())?;
    let field = field(config, model.dim())?;
    let core = core(config, &vol)?;
    Ok(RealSpaceSetup {
        n: model.dim() / 2,
        model,
        volume: vol,
        field,
        fermi_energy: config.model.fermi_energy,
        scheme: config.scheme(),
        core,
        localization: config.realspace.localization,
    })
}

fn kspace(config: &ExperimentConfig) -> Result<Report, CliError> {
    let m = model(config)?;
    let n = m.dim() / 2;
    Ok(Report::Chern(kspace_chern(&m, config.model.fermi_energy, n, config.kspace.grid)?))
}

fn realspace(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let s = setup(config, model(config)?)?;
    let seeds = seeds(config)?;
    Ok(Report::Chern(disorder_averaged_chern(&s, config.disorder.lambda, &seeds, workers)?))
}

fn index(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let m = model(config)?;
    let n = m.dim() / 2;
    let vol = volume(config, &m)?;
    let rep = build_clifford(n)?;
    guard(config, vol.num_states() * rep.dim())?;
    let b = field(config, m.dim())?;
    let x0 = config.index.x0.clone().unwrap_or_else(|| vec![0.0; m.dim()]);
    let phase = dirac_phase(&vol, &rep, &x0, config.index.insertion)?;
    let seeds = seeds(config)?;
    let lambda = config.disorder.lambda;
    let one = |seed: u64| -> ncchern::Result<IndexSeed> {
        let d = sample_disorder(&vol, &m, lambda, seed)?;
        let h = build_hamiltonian(&m, &vol, &b, Some(&d))?;
        let p = fermi_projector(&h, config.model.fermi_energy)?;
        let estimate = index_estimate(&p, &phase, &config.index.radii)?;
        Ok(IndexSeed { seed, occupied: p.occupied_count, estimate })
    };
    let wrap = |seed: u64, e: ncchern::Error| ncchern::Error::Realization { seed, source: Box::new(e) };
    let per_seed: Vec<IndexSeed> = if lambda == 0.0 {
        let clean = one(seeds[0]).map_err(|e| wrap(seeds[0], e))?;
        seeds.iter().map(|&seed| IndexSeed { seed, ..clean.clone() }).collect()
    } else {
        workers
            .map(&seeds, |&seed| one(seed).map_err(|e| wrap(seed, e)))
            .into_iter()
            .collect::<ncchern::Result<_>>()?
    };
    let first = per_seed[0].estimate.nearest_integer;
    let consensus = first.filter(|_| per_seed.iter().all(|s| s.estimate.nearest_integer == first));
    Ok(Report::Index(IndexReport { per_seed, consensus }))
}

fn localization(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let m = model(config)?;
    let n = m.dim() / 2;
    let vol = volume(config, &m)?;
    guard(config, vol.num_states())?;
    let b = field(config, m.dim())?;
    let c = core(config, &vol)?;
    let scheme = config.scheme();
    let seeds = seeds(config)?;
    let loc = &config.localization;
    let lambdas = loc.lambdas.clone().unwrap_or_else(|| vec![config.disorder.lambda]);
    let energies = loc.fermi_energies.clone().unwrap_or_else(|| vec![config.model.fermi_energy]);
    let mut rows = Vec::new();
    for &lambda in &lambdas {
        for &fermi in &energies {
            let fit = fractional_moment_fit(&m, &vol, &b, lambda, fermi, loc.s, loc.delta, &seeds, &loc.distances, workers)?;
            let localization_length = if loc.length {
                let values = workers
                    .map(&seeds, |&seed| -> ncchern::Result<f64> {
                        let d = sample_disorder(&vol, &m, lambda, seed)?;
                        let h = build_hamiltonian(&m, &vol, &b, Some(&d))?;
                        let p = fermi_projector(&h, fermi)?;
                        localization_length(&p, &vol, n, scheme, &c)
                    })
                    .into_iter()
                    .collect::<ncchern::Result<Vec<f64>>>()?;
                Some(values.iter().sum::<f64>() / values.len() as f64)
            } else {
                None
            };
            rows.push(LocalizationRow { fit, localization_length });
        }
    }
    Ok(Report::Localization(rows))
}

fn sobolev(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let m = model(config)?;
    let vol = volume(config, &m)?;
    guard(config, vol.num_states())?;
    let b = field(config, m.dim())?;
    let c = core(config, &vol)?;
    let setup = SobolevSetup {
        model: &m,
        volume: &vol,
        field: &b,
        lambda: config.disorder.lambda,
        fermi_energy: config.model.fermi_energy,
        n: m.dim() / 2,
        scheme: config.scheme(),
        core: &c,
    };
    Ok(Report::Sobolev(sobolev_continuity(&setup, &config.sobolev.deltas, &seeds(config)?, workers)?))
}

fn phases(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let template = setup(config, model(config)?)?;
    let grid: Vec<(f64, f64)> = config
        .phase_diagram
        .m
        .iter()
        .flat_map(|&m| config.phase_diagram.lambda.iter().map(move |&l| (m, l)))
        .collect();
    let rows = phase_diagram(&config.model.name, &config.model.params, &grid, &template, &seeds(config)?, workers)?;
    Ok(Report::PhaseDiagram(rows))
}

fn identity(config: &ExperimentConfig, workers: &Workers) -> Result<Report, CliError> {
    let id = &config.identity;
    let rep = build_clifford(id.n)?;
    let rows = match id.lemma {
        Lemma::Integral => lemma3_rows(config, &rep, workers)?,
        Lemma::Dixmier => dixmier_rows(config)?,
        Lemma::Clifford => clifford_rows(config, &rep),
    };
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.pass);
    Ok(Report::Identity(IdentityReport {
        lemma: id.lemma,
        n: id.n,
        orientation: rep.orientation(),
        rows,
        max_error,
        pass,
    }))
}

fn row(case: String, value: [f64; 2], reference: [f64; 2], error: f64, tolerance: f64, relative: bool) -> IdentityRow {
    IdentityRow {
        case,
        value,
        reference,
        error,
        tolerance,
        measure: if relative { "relative" } else { "absolute" },
        pass: error <= tolerance,
    }
}

/// Random point sets `x_1..x_2n` with `bound/4 ≤ |x_i| ≤ bound`, kept only if
/// `|det| ≥ 0.1 ∏|x_i|` so that the relative error is meaningful.
fn lemma3_points(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> Vec<Vec<f64>> {
    let d = 2 * n;
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    loop {
        let pts: Vec<Vec<f64>> = (0..d)
            .map(|_| loop {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-bound..bound)).collect();
                let r = norm(&v);
                if r <= bound && r >= bound / 4.0 {
                    break v;
                }
            })
            .collect();
        let scale: f64 = pts.iter().map(|p| norm(p)).product();
        if det_columns(&pts).abs() >= 0.1 * scale {
            return pts;
        }
    }
}

fn lemma3_rows(config: &ExperimentConfig, rep: &ncchern::CliffordRep, workers: &Workers) -> Result<Vec<IdentityRow>, CliError> {
    let id = &config.identity;
    let mut quad = Lemma3Quadrature::for_n(id.n);
    if let Some(r) = id.radius {
        quad.cubature.radius = r;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(id.seed);
    let sets: Vec<Vec<Vec<f64>>> = (0..id.trials).map(|_| lemma3_points(&mut rng, id.n, id.point_bound)).collect();
    let tolerance = if id.n == 1 { 0.01 } else { 0.05 };
    let values = workers.map(&sets, |pts| -> ncchern::Result<_> {
        Ok((lemma3_lhs(rep, pts, &quad)?.value, lemma3_rhs(rep, pts)?))
    });
    values
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let (lhs, rhs) = v?;
            let err = (lhs - rhs).norm() / rhs.norm();
            Ok(row(format!("trial {}", k + 1), [lhs.re, lhs.im], [rhs.re, rhs.im], err, tolerance, true))
        })
        .collect()
}

fn dixmier_rows(config: &ExperimentConfig) -> Result<Vec<IdentityRow>, CliError> {
    let id = &config.identity;
    let n = id.n;
    let points = (2.0 * id.r_max as f64 + 1.0).powi(2 * n as i32);
    if points > 4e8 {
        return Err(ncchern::Error::Argument(format!(
            "R_max = {} in dimension {} needs {points:.1e} lattice points",
            id.r_max,
            2 * n
        ))
        .into());
    }
    // |S^{2n-1}| / 2n
    let constant = PI.powi(n as i32) / factorial(n);
    let cases: [(&str, f64, f64, bool); 3] = [
        ("f = 1, phi = 1", constant, 0.05, true),
        ("f = 1, phi odd", 0.0, 0.02, false),
        ("f uniform, phi = 1", constant / 2.0, 0.05, true),
    ];
    cases
        .iter()
        .enumerate()
        .map(|(k, &(name, expected, tol, relative))| {
            let e = match k {
                0 => dixmier_estimate(|_| 1.0, |_| 1.0, n, id.r_max)?,
                1 => dixmier_estimate(|_| 1.0, |u| u[0], n, id.r_max)?,
                _ => dixmier_estimate(uniform_field(id.seed), |_| 1.0, n, id.r_max)?,
            };
            let v = e.extrapolated;
            let err = if relative { (v - expected).abs() / expected } else { (v - expected).abs() };
            Ok(row(name.to_string(), [v, 0.0], [expected, 0.0], err, tol, relative))
        })
        .collect()
}

fn clifford_rows(config: &ExperimentConfig, rep: &ncchern::CliffordRep) -> Vec<IdentityRow> {
    let id = &config.identity;
    let d = rep.dim();
    let k = 2 * id.n;
    let eye = linalg::identity(d);
    let mut anti: f64 = 0.0;
    let mut chiral: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let mut ac = linalg::anticommutator(rep.gamma(i), rep.gamma(j));
            if i == j {
                ac = &ac - &linalg::scale(&eye, 2.0.into());
            }
            anti = anti.max(linalg::max_abs(&ac));
        }
        chiral = chiral.max(linalg::max_abs(&linalg::anticommutator(rep.gamma0(), rep.gamma(i))));
    }
    let g0 = rep.gamma0();
    chiral = chiral
        .max(linalg::max_abs_diff(&(g0 * g0), &eye))
        .max(linalg::hermiticity_error(g0))
        .max(linalg::trace(g0).norm());
    let mut rng = ChaCha8Rng::seed_from_u64(id.seed);
    let mut det_err: f64 = 0.0;
    for _ in 0..id.trials {
        let v: Vec<Vec<f64>> = (0..k).map(|_| (0..k).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let t = rep.graded_trace(&v).expect("2n vectors of length 2n");
        let expected = rep.graded_constant() * det_columns(&v);
        det_err = det_err.max((t - expected).norm() / (1.0 + expected.norm()));
    }
    let c = rep.graded_constant();
    vec![
        row("anticommutation".into(), [anti, 0.0], [0.0, 0.0], anti, 1e-12, false),
        row("chirality relations".into(), [chiral, 0.0], [0.0, 0.0], chiral, 1e-12, false),
        row(
            "graded trace / det".into(),
            [c.re, c.im],
            [c.re, c.im],
            det_err,
            1e-12,
            true,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failing_row_fails_the_report() {
        let good = row("a".into(), [1.0, 0.0], [1.0, 0.0], 0.0, 1e-3, true);
        let bad = row("b".into(), [1.1, 0.0], [1.0, 0.0], 0.1, 1e-3, true);
        assert!(good.pass && !bad.pass);
        let report = |rows: Vec<IdentityRow>| {
            Report::Identity(IdentityReport {
                lemma: Lemma::Integral,
                n: 1,
                orientation: 1.0,
                pass: rows.iter().all(|r| r.pass),
                max_error: 0.1,
                rows,
            })
        };
        assert!(report(vec![good.clone()]).passed());
        assert!(!report(vec![good, bad]).passed());
    }

    #[test]
    fn lemma3_points_are_well_conditioned() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2] {
            for _ in 0..50 {
                let pts = lemma3_points(&mut rng, n, 2.0);
                assert_eq!(pts.len(), 2 * n);
                let norms: Vec<f64> = pts.iter().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
                assert!(norms.iter().all(|r| (0.5..=2.0).contains(r)));
                assert!(det_columns(&pts).abs() >= 0.1 * norms.iter().product::<f64>());
            }
        }
    }
}
