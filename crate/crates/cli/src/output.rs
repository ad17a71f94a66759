//! Result documents. JSON carries the full metadata; CSV has one stable row
//! layout per command; text is a readable table for identity checks.

use serde::Serialize;
use serde_json::json;

use crate::commands::Report;
use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use crate::SCHEMA_VERSION;

pub fn render(config: &ExperimentConfig, report: &Report) -> Result<String, CliError> {
    match config.format() {
        Format::Json => Ok(json_document(config, report)),
        Format::Csv => csv_document(report),
        Format::Text => text_document(config, report),
    }
}

/// The JSON result: schema version, tool version, the configuration as run
/// and the result. It holds no timestamps, so reruns are byte-identical.
pub fn json_document(config: &ExperimentConfig, report: &Report) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "chern", "version": env!("CARGO_PKG_VERSION") },
        "command": config.command.name(),
        "config": config,
        "result": report,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("result documents serialize");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct ChernCsv {
    seed: String,
    value: f64,
    imag: f64,
    occupied: String,
    localization_length: String,
    warning: String,
}

#[derive(Serialize)]
struct IndexCsv {
    seed: u64,
    extrapolated: f64,
    nearest_integer: String,
    distance: f64,
    values: String,
}

#[derive(Serialize)]
struct LocalizationCsv {
    lambda: f64,
    fermi_energy: f64,
    s: f64,
    beta: f64,
    c_s: f64,
    residual: f64,
    delocalized: bool,
    localization_length: String,
}

#[derive(Serialize)]
struct PhaseCsv {
    m: f64,
    lambda: f64,
    mean: f64,
    stderr: f64,
    nearest_integer: i64,
    realizations: usize,
    localization_length: String,
    error: String,
}

#[derive(Serialize)]
struct SobolevCsv {
    delta_h: f64,
    norm: f64,
    crossing: bool,
}

#[derive(Serialize)]
struct IdentityCsv<'a> {
    case: &'a str,
    value_re: f64,
    value_im: f64,
    reference_re: f64,
    reference_im: f64,
    error: f64,
    tolerance: f64,
    measure: &'a str,
    pass: bool,
}

fn write_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| csv_error(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

pub fn csv_document(report: &Report) -> Result<String, CliError> {
    match report {
        Report::Chern(e) if e.per_seed.is_empty() => write_rows([ChernCsv {
            seed: String::new(),
            value: e.value,
            imag: e.imag,
            occupied: String::new(),
            localization_length: String::new(),
            warning: e.warnings.join("; "),
        }]),
        Report::Chern(e) => write_rows(e.per_seed.iter().map(|s| ChernCsv {
            seed: s.seed.to_string(),
            value: s.value,
            imag: s.imag,
            occupied: s.occupied.to_string(),
            localization_length: opt(s.localization_length),
            warning: s.warning.clone().unwrap_or_default(),
        })),
        Report::Index(r) => write_rows(r.per_seed.iter().map(|s| IndexCsv {
            seed: s.seed,
            extrapolated: s.estimate.extrapolated,
            nearest_integer: s.estimate.nearest_integer.map(|i| i.to_string()).unwrap_or_default(),
            distance: s.estimate.distance,
            values: s.estimate.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
        })),
        Report::Localization(rows) => write_rows(rows.iter().map(|r| LocalizationCsv {
            lambda: r.fit.lambda,
            fermi_energy: r.fit.fermi_energy,
            s: r.fit.s,
            beta: r.fit.beta,
            c_s: r.fit.c_s,
            residual: r.fit.residual,
            delocalized: r.fit.delocalized,
            localization_length: opt(r.localization_length),
        })),
        Report::PhaseDiagram(rows) => write_rows(rows.iter().map(|r| PhaseCsv {
            m: r.m,
            lambda: r.lambda,
            mean: r.mean,
            stderr: r.stderr,
            nearest_integer: r.nearest_integer,
            realizations: r.realizations,
            localization_length: opt(r.localization_length),
            error: r.error.clone().unwrap_or_default(),
        })),
        Report::Sobolev(t) => write_rows(t.rows.iter().map(|r| SobolevCsv {
            delta_h: r.delta_h,
            norm: r.norm,
            crossing: r.crossing,
        })),
        Report::Identity(r) => write_rows(r.rows.iter().map(|x| IdentityCsv {
            case: &x.case,
            value_re: x.value[0],
            value_im: x.value[1],
            reference_re: x.reference[0],
            reference_im: x.reference[1],
            error: x.error,
            tolerance: x.tolerance,
            measure: x.measure,
            pass: x.pass,
        })),
    }
}

fn text_document(config: &ExperimentConfig, report: &Report) -> Result<String, CliError> {
    let Report::Identity(r) = report else {
        return Err(CliError::Config {
            message: format!("text output is only available for verify-identity, not {}", config.command.name()),
            line: None,
            column: None,
        });
    };
    let lemma = serde_json::to_value(r.lemma).expect("lemma serializes");
    let mut out = format!(
        "identity {} (n = {}, orientation {:+})\n",
        lemma.as_str().unwrap_or_default(),
        r.n,
        r.orientation
    );
    out.push_str(&format!(
        "{:<22} {:>26} {:>26} {:>11} {:>9}  {}\n",
        "case", "value", "reference", "error", "tolerance", "result"
    ));
    let c = |v: [f64; 2]| format!("{:+.6e}{:+.6e}i", v[0], v[1]);
    for x in &r.rows {
        out.push_str(&format!(
            "{:<22} {:>26} {:>26} {:>11.3e} {:>9.0e}  {}\n",
            x.case,
            c(x.value),
            c(x.reference),
            x.error,
            x.tolerance,
            if x.pass { "pass" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "max error {:.3e}: {}\n",
        r.max_error,
        if r.pass { "all pass" } else { "FAILED" }
    ));
    Ok(out)
}
