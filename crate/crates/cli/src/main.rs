use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncchern::{Boundary, DerivationScheme, Insertion, Workers};
use ncchern_cli::{render, run, CliError, Command, CoreSpec, ExperimentConfig, Format, Lemma};
use serde::de::DeserializeOwned;

#[derive(Parser)]
#[command(name = "chern", version, about = "Chern numbers of disordered lattice models")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Momentum-space Chern number of a clean model.
    Kspace(Flags),
    /// Disorder-averaged real-space Chern number.
    Realspace(Flags),
    /// Truncated Fredholm index per disorder realization.
    Index(Flags),
    /// Fractional-moment decay fit and localization length.
    Localization(Flags),
    /// Numerical check of an analytic identity.
    VerifyIdentity(Flags),
    /// Chern numbers over an (m, λ) grid, as CSV by default.
    PhaseDiagram(Flags),
    /// Sobolev distance of the Fermi projector under hopping deformations.
    Sobolev(Flags),
    /// Runs the command named in a configuration file.
    Run {
        #[arg(value_name = "CONFIG")]
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

fn parse_kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

/// Every flag overrides the configuration key of the same name.
#[derive(Args)]
struct Flags {
    /// Configuration file (TOML, or JSON with a `.json` extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    print_config: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "NCCHERN_WORKERS")]
    workers: Option<usize>,

    /// model.name
    #[arg(long)]
    model: Option<String>,
    /// model.params entry, repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// model.fermi_energy
    #[arg(long, allow_hyphen_values = true)]
    fermi_energy: Option<f64>,

    /// volume.size
    #[arg(long)]
    size: Option<usize>,
    /// volume.boundary
    #[arg(long, value_parser = parse_kebab::<Boundary>)]
    boundary: Option<Boundary>,
    /// volume.flux
    #[arg(long, allow_hyphen_values = true)]
    flux: Option<f64>,

    /// disorder.lambda
    #[arg(long)]
    lambda: Option<f64>,
    /// disorder.seeds
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// disorder.seed0
    #[arg(long)]
    seed0: Option<u64>,
    /// disorder.count
    #[arg(long)]
    count: Option<usize>,

    /// realspace.scheme
    #[arg(long, value_parser = parse_kebab::<DerivationScheme>)]
    scheme: Option<DerivationScheme>,
    /// realspace.core: all, origin or a fraction of L.
    #[arg(long)]
    core: Option<CoreSpec>,
    /// realspace.localization
    #[arg(long)]
    with_localization: bool,

    /// kspace.grid
    #[arg(long)]
    grid: Option<usize>,

    /// index.radii
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// index.x0
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    /// index.insertion
    #[arg(long, value_parser = parse_kebab::<Insertion>)]
    insertion: Option<Insertion>,

    /// localization.s
    #[arg(long)]
    s: Option<f64>,
    /// localization.delta
    #[arg(long)]
    delta: Option<f64>,
    /// localization.distances
    #[arg(long, value_delimiter = ',')]
    distances: Option<Vec<usize>>,
    /// localization.lambdas
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// localization.fermi_energies
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    fermi_energies: Option<Vec<f64>>,

    /// sobolev.deltas
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,

    /// phase_diagram.m
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m_grid: Option<Vec<f64>>,
    /// phase_diagram.lambda
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,

    /// identity.lemma: 3, 5 or clifford.
    #[arg(long)]
    lemma: Option<Lemma>,
    /// identity.n
    #[arg(long)]
    n: Option<usize>,
    /// identity.trials
    #[arg(long)]
    trials: Option<usize>,
    /// identity.seed
    #[arg(long)]
    seed: Option<u64>,
    /// identity.radius
    #[arg(long)]
    radius: Option<f64>,
    /// identity.r_max
    #[arg(long)]
    r_max: Option<usize>,

    /// output.path (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// output.format
    #[arg(long, value_parser = parse_kebab::<Format>)]
    format: Option<Format>,
    /// limits.max_states
    #[arg(long)]
    max_states: Option<usize>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl Flags {
    fn apply(self, c: &mut ExperimentConfig) {
        set(&mut c.model.name, self.model);
        let params: BTreeMap<String, f64> = self.params.into_iter().collect();
        c.model.params.extend(params);
        set(&mut c.model.fermi_energy, self.fermi_energy);
        set(&mut c.volume.size, self.size);
        set(&mut c.volume.boundary, self.boundary);
        set_opt(&mut c.volume.flux, self.flux);
        set(&mut c.disorder.lambda, self.lambda);
        set_opt(&mut c.disorder.seeds, self.seeds);
        set(&mut c.disorder.seed0, self.seed0);
        set(&mut c.disorder.count, self.count);
        set_opt(&mut c.realspace.scheme, self.scheme);
        set_opt(&mut c.realspace.core, self.core);
        c.realspace.localization |= self.with_localization;
        set(&mut c.kspace.grid, self.grid);
        set(&mut c.index.radii, self.radii);
        set_opt(&mut c.index.x0, self.x0);
        set(&mut c.index.insertion, self.insertion);
        set(&mut c.localization.s, self.s);
        set(&mut c.localization.delta, self.delta);
        set(&mut c.localization.distances, self.distances);
        set_opt(&mut c.localization.lambdas, self.lambdas);
        set_opt(&mut c.localization.fermi_energies, self.fermi_energies);
        set(&mut c.sobolev.deltas, self.deltas);
        set(&mut c.phase_diagram.m, self.m_grid);
        set(&mut c.phase_diagram.lambda, self.lambda_grid);
        set(&mut c.identity.lemma, self.lemma);
        set(&mut c.identity.n, self.n);
        set(&mut c.identity.trials, self.trials);
        set(&mut c.identity.seed, self.seed);
        set_opt(&mut c.identity.radius, self.radius);
        set(&mut c.identity.r_max, self.r_max);
        set_opt(&mut c.output.path, self.output);
        set_opt(&mut c.output.format, self.format);
        set(&mut c.limits.max_states, self.max_states);
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (command, file, mut flags) = match cli.command {
        Sub::Kspace(f) => (Some(Command::Kspace), None, f),
        Sub::Realspace(f) => (Some(Command::Realspace), None, f),
        Sub::Index(f) => (Some(Command::Index), None, f),
        Sub::Localization(f) => (Some(Command::Localization), None, f),
        Sub::VerifyIdentity(f) => (Some(Command::VerifyIdentity), None, f),
        Sub::PhaseDiagram(f) => (Some(Command::PhaseDiagram), None, f),
        Sub::Sobolev(f) => (Some(Command::Sobolev), None, f),
        Sub::Run { file, flags } => (None, Some(file), flags),
    };
    let path = file.or(flags.config.take());
    let mut config = match (&path, command) {
        (Some(p), _) => ExperimentConfig::load(p)?,
        (None, Some(c)) => ExperimentConfig::new(c),
        (None, None) => unreachable!("`run` requires a file"),
    };
    if let Some(c) = command {
        config.command = c;
    }
    let print = flags.print_config;
    let workers = match flags.workers.take() {
        Some(n) => Workers::new(n)?,
        None => Workers::new(std::thread::available_parallelism().map_or(1, |n| n.get()))?,
    };
    flags.apply(&mut config);
    if print {
        print!("{}", config.to_toml());
        return Ok(true);
    }
    let report = run(&config, &workers)?;
    let text = render(&config, &report)?;
    match &config.output.path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.clone(),
            message: e.to_string(),
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })?;
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        // An identity check ran but did not pass.
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        super::Cli::command().debug_assert();
    }
}
