//! Experiment configuration: a TOML file with one section per concern, or the
//! same structure as JSON. Every key can be overridden from the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ncchern::{Boundary, DerivationScheme, Insertion};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Kspace,
    Realspace,
    Index,
    Localization,
    VerifyIdentity,
    PhaseDiagram,
    Sobolev,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kspace => "kspace",
            Command::Realspace => "realspace",
            Command::Index => "index",
            Command::Localization => "localization",
            Command::VerifyIdentity => "verify-identity",
            Command::PhaseDiagram => "phase-diagram",
            Command::Sobolev => "sobolev",
        }
    }

    /// Whether the command diagonalizes a finite-volume Hamiltonian.
    pub fn uses_volume(self) -> bool {
        !matches!(self, Command::Kspace | Command::VerifyIdentity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Sites over which traces per unit volume are averaged: every site, the
/// origin only, or a central sub-box with the given fraction of `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoreSpec {
    All,
    Origin,
    Central(f64),
}

impl FromStr for CoreSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(CoreSpec::All),
            "origin" => Ok(CoreSpec::Origin),
            other => other
                .parse::<f64>()
                .map(CoreSpec::Central)
                .map_err(|_| format!("core must be `all`, `origin` or a fraction, got `{other}`")),
        }
    }
}

impl fmt::Display for CoreSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreSpec::All => f.write_str("all"),
            CoreSpec::Origin => f.write_str("origin"),
            CoreSpec::Central(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoreRepr {
    Fraction(f64),
    Name(String),
}

impl Serialize for CoreSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CoreSpec::Central(x) => CoreRepr::Fraction(*x),
            other => CoreRepr::Name(other.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoreSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match CoreRepr::deserialize(d)? {
            CoreRepr::Fraction(x) => Ok(CoreSpec::Central(x)),
            CoreRepr::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    #[serde(rename = "3")]
    Integral,
    #[serde(rename = "5")]
    Dixmier,
    #[serde(rename = "clifford")]
    Clifford,
}

impl FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "3" => Ok(Lemma::Integral),
            "5" => Ok(Lemma::Dixmier),
            "clifford" => Ok(Lemma::Clifford),
            other => Err(format!("lemma must be 3, 5 or clifford, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub fermi_energy: f64,
    /// Half the dimension; checked against the model when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            name: "chern2d".into(),
            params: BTreeMap::new(),
            fermi_energy: 0.0,
            n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VolumeSection {
    pub size: usize,
    pub boundary: Boundary,
    /// Shorthand for a field `B̂₀₁ = -B̂₁₀ = flux`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux: Option<f64>,
    /// Full antisymmetric field tensor; excludes `flux`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<Vec<f64>>>,
}

impl Default for VolumeSection {
    fn default() -> Self {
        VolumeSection {
            size: 16,
            boundary: Boundary::Open,
            flux: None,
            field: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderSection {
    pub lambda: f64,
    /// Explicit seeds; otherwise `seed0, seed0 + 1, …` (`count` of them).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    pub seed0: u64,
    pub count: usize,
}

impl Default for DisorderSection {
    fn default() -> Self {
        DisorderSection {
            lambda: 0.0,
            seeds: None,
            seed0: 1,
            count: 1,
        }
    }
}

impl DisorderSection {
    pub fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.count as u64).map(|i| self.seed0 + i).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RealspaceSection {
    /// Defaults to `open-commutator` on open volumes and `minimal-image` on
    /// periodic ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<DerivationScheme>,
    /// Defaults to `0.5` on open volumes and `all` on periodic ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreSpec>,
    /// Also report `Λ_n` per realization.
    pub localization: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KspaceSection {
    pub grid: usize,
}

impl Default for KspaceSection {
    fn default() -> Self {
        KspaceSection { grid: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexSection {
    pub radii: Vec<f64>,
    /// Defaults to the origin.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    pub insertion: Insertion,
}

impl Default for IndexSection {
    fn default() -> Self {
        IndexSection {
            radii: vec![3.0, 4.0, 5.0, 6.0],
            x0: None,
            insertion: Insertion::Symmetric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizationSection {
    pub s: f64,
    pub delta: f64,
    pub distances: Vec<usize>,
    /// Sweep values; default to `disorder.lambda`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    /// Sweep values; default to `model.fermi_energy`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fermi_energies: Option<Vec<f64>>,
    /// Also report the seed-averaged `Λ_n`.
    pub length: bool,
}

impl Default for LocalizationSection {
    fn default() -> Self {
        LocalizationSection {
            s: 0.5,
            delta: ncchern::localization::DEFAULT_DELTA,
            distances: vec![1, 2, 3, 4, 5, 6],
            lambdas: None,
            fermi_energies: None,
            length: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SobolevSection {
    pub deltas: Vec<f64>,
}

impl Default for SobolevSection {
    fn default() -> Self {
        SobolevSection {
            deltas: vec![0.2, 0.1, 0.05, 0.02],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseDiagramSection {
    pub m: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl Default for PhaseDiagramSection {
    fn default() -> Self {
        PhaseDiagramSection {
            m: (0..13).map(|i| -3.0 + 0.5 * i as f64).collect(),
            lambda: vec![0.0, 2.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySection {
    pub lemma: Lemma,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest `|x_i|` of the random points (lemma 3).
    pub point_bound: f64,
    /// Cube half-width of the quadrature (lemma 3); built-in default per `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Lattice radius of the log-scaling sums (lemma 5).
    pub r_max: usize,
}

impl Default for IdentitySection {
    fn default() -> Self {
        IdentitySection {
            lemma: Lemma::Integral,
            n: 1,
            trials: 20,
            seed: 1,
            point_bound: 2.0,
            radius: None,
            r_max: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Defaults to CSV for `phase-diagram`, text for `verify-identity`, JSON
    /// otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitsSection {
    /// Largest accepted matrix dimension.
    pub max_states: usize,
}

impl Default for LimitsSection {
    fn default() -> Self {
        LimitsSection { max_states: 20_000 }
    }
}

/// A complete experiment. Missing sections and keys take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub volume: VolumeSection,
    #[serde(default)]
    pub disorder: DisorderSection,
    #[serde(default)]
    pub realspace: RealspaceSection,
    #[serde(default)]
    pub kspace: KspaceSection,
    #[serde(default)]
    pub index: IndexSection,
    #[serde(default)]
    pub localization: LocalizationSection,
    #[serde(default)]
    pub sobolev: SobolevSection,
    #[serde(default)]
    pub phase_diagram: PhaseDiagramSection,
    #[serde(default)]
    pub identity: IdentitySection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub limits: LimitsSection,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            model: Default::default(),
            volume: Default::default(),
            disorder: Default::default(),
            realspace: Default::default(),
            kspace: Default::default(),
            index: Default::default(),
            localization: Default::default(),
            sobolev: Default::default(),
            phase_diagram: Default::default(),
            identity: Default::default(),
            output: Default::default(),
            limits: Default::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|span| line_column(text, span.start))
                .unwrap_or((0, 0));
            CliError::Config {
                message: e.message().to_string(),
                line: Some(line),
                column: Some(column),
            }
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        })
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable in TOML")
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or(match self.command {
            Command::PhaseDiagram => Format::Csv,
            Command::VerifyIdentity => Format::Text,
            _ => Format::Json,
        })
    }

    pub fn scheme(&self) -> DerivationScheme {
        self.realspace.scheme.unwrap_or(match self.volume.boundary {
            Boundary::Open => DerivationScheme::OpenCommutator,
            Boundary::Periodic => DerivationScheme::MinimalImage,
        })
    }

    pub fn core(&self) -> CoreSpec {
        self.realspace.core.unwrap_or(match self.volume.boundary {
            Boundary::Open => CoreSpec::Central(0.5),
            Boundary::Periodic => CoreSpec::All,
        })
    }
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_sections() {
        let c = ExperimentConfig::from_toml("command = \"kspace\"\n").unwrap();
        assert_eq!(c, ExperimentConfig::new(Command::Kspace));
        assert_eq!(c.format(), Format::Json);
    }

    #[test]
    fn core_accepts_names_and_fractions() {
        let c = ExperimentConfig::from_toml("command = \"realspace\"\n[realspace]\ncore = 0.25\n").unwrap();
        assert_eq!(c.realspace.core, Some(CoreSpec::Central(0.25)));
        let c = ExperimentConfig::from_toml("command = \"realspace\"\n[realspace]\ncore = \"origin\"\n").unwrap();
        assert_eq!(c.core(), CoreSpec::Origin);
        assert!(ExperimentConfig::from_toml("command = \"realspace\"\n[realspace]\ncore = \"edge\"\n").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "command = \"kspace\"\n\n[kspace]\ngird = 3\n";
        match ExperimentConfig::from_toml(text) {
            Err(CliError::Config { line, message, .. }) => {
                assert_eq!(line, Some(4));
                assert!(message.contains("gird"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
