use std::path::Path;
use std::process::{Command, Output};

use ncchern_cli::{Command as Cmd, CoreSpec, ExperimentConfig};
use serde_json::Value;

fn chern(args: &[&str], workers: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chern"));
    c.args(args);
    match workers {
        Some(w) => c.env("NCCHERN_WORKERS", w),
        None => c.env_remove("NCCHERN_WORKERS"),
    };
    c.output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn kspace_reports_a_unit_chern_number() {
    let doc = stdout_json(&chern(&["kspace", "--grid", "64"], None));
    let v = doc["result"]["value"].as_f64().unwrap();
    assert!((v.abs() - 1.0).abs() < 1e-6, "{v}");
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "kspace");
    assert_eq!(doc["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["kspace"]["grid"], 64);
}

#[test]
fn verify_identity_table_passes() {
    let o = chern(&["verify-identity", "--lemma", "3", "--n", "1", "--trials", "20"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("trial ")).count(), 20);
    assert!(text.contains("all pass"), "{text}");
    let doc = stdout_json(&chern(&["verify-identity", "--trials", "20", "--format", "json"], None));
    assert!(doc["result"]["max_error"].as_f64().unwrap() < 1e-2);
}

#[test]
fn coarse_quadrature_is_a_precision_error() {
    let o = chern(&["verify-identity", "--trials", "2", "--radius", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "precision");
    assert!(e["error"]["message"].as_str().unwrap().contains("larger quadrature radius"));
}

#[test]
fn phase_diagram_has_one_row_per_grid_point() {
    let o = chern(&["phase-diagram", "--size", "8", "--count", "10", "--boundary", "periodic"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,lambda,mean,stderr,nearest_integer,realizations,localization_length,error"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 13 * 3);
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert_eq!((num(rows[0][0]), num(rows[0][1])), (-3.0, 0.0));
    assert!(rows.iter().all(|r| r[5] == "10" && r[7].is_empty()));
    let clean = rows.iter().find(|r| num(r[0]) == 1.0 && num(r[1]) == 0.0).unwrap();
    assert_eq!(clean[4], "-1");
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "exp.toml",
        "command = \"kspace\"\n[model]\nname = \"chern2d\"\nparams = { m = 3.0 }\n[kspace]\ngrid = 16\n",
    );
    let doc = stdout_json(&chern(&["run", &cfg], None));
    assert!(doc["result"]["value"].as_f64().unwrap().abs() < 1e-9);
    let doc = stdout_json(&chern(&["run", &cfg, "--param", "m=1", "--grid", "24"], None));
    assert!((doc["result"]["value"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    assert_eq!(doc["config"]["kspace"]["grid"], 24);
    // A subcommand with --config takes the command from the subcommand.
    let doc = stdout_json(&chern(&["kspace", "--config", &cfg], None));
    assert_eq!(doc["config"]["model"]["params"]["m"], 3.0);
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "exp.json",
        r#"{"command": "kspace", "model": {"name": "chern2d", "params": {"m": -1.0}}, "kspace": {"grid": 16}}"#,
    );
    let doc = stdout_json(&chern(&["run", &cfg], None));
    assert_eq!(doc["config"]["model"]["params"]["m"], -1.0);
    assert!((doc["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn config_errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "command = \"kspace\"\n\n[kspace]\ngird = 3\n");
    let o = chern(&["run", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "config");
    assert_eq!(e["error"]["line"], 4);
    let o = chern(&["kspace", "--model", "graphene"], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["kind"], "lookup");
}

#[test]
fn oversized_volumes_are_refused() {
    let o = chern(&["realspace", "--model", "dirac4d", "--size", "10"], None);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "resource");
    assert_eq!(e["error"]["states"], 40000);
    assert!(e["error"]["estimated_gib"].as_f64().unwrap() > 1.0);
    // m = 2 closes the gap at (0, π).
    let o = chern(&["kspace", "--param", "m=2", "--grid", "4"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "gap");
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = [
        "realspace", "--size", "8", "--boundary", "periodic", "--lambda", "1.5", "--count", "6", "--with-localization",
    ];
    let one = chern(&args, Some("1"));
    let three = chern(&args, Some("3"));
    let again = chern(&args, Some("3"));
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(three.stdout, again.stdout);
    let doc = stdout_json(&one);
    assert_eq!(doc["result"]["per_seed"].as_array().unwrap().len(), 6);
    assert!(doc["result"]["per_seed"][0]["localization_length"].as_f64().unwrap() > 0.0);
}

#[test]
fn output_file_and_csv_layouts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("loc.csv");
    let o = chern(
        &[
            "localization", "--size", "12", "--boundary", "periodic", "--lambda", "2", "--count", "2",
            "--distances", "1,2,3,4", "--format", "csv", "--output", out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("lambda,fermi_energy,s,beta,c_s,residual,delocalized,localization_length\n"));
    assert_eq!(text.lines().count(), 2);
    let o = chern(&["sobolev", "--size", "6", "--boundary", "periodic", "--lambda", "1", "--format", "csv"], None);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("delta_h,norm,crossing"));
    assert_eq!(text.lines().count(), 5);
    let o = chern(&["kspace", "--format", "text"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn index_names_one_integer_across_seeds() {
    let doc = stdout_json(&chern(
        &["index", "--size", "16", "--lambda", "1", "--count", "3", "--radii", "2,3,4"],
        None,
    ));
    assert_eq!(doc["result"]["consensus"], -1);
    assert_eq!(doc["result"]["per_seed"].as_array().unwrap().len(), 3);
}

#[test]
fn configuration_round_trips() {
    let mut c = ExperimentConfig::new(Cmd::Localization);
    c.model.name = "dirac4d".into();
    c.model.params.insert("m".into(), -1.0);
    c.model.n = Some(2);
    c.volume.flux = Some(0.25);
    c.disorder.seeds = Some(vec![3, 1, 4]);
    c.realspace.core = Some(CoreSpec::Central(0.375));
    c.localization.lambdas = Some(vec![1.0, 8.0]);
    c.index.x0 = Some(vec![0.5, 0.5, 0.5, 0.5]);
    c.identity.radius = Some(12.0);
    let toml = c.to_toml();
    assert_eq!(ExperimentConfig::from_toml(&toml).unwrap(), c);
    let json = serde_json::to_string(&c).unwrap();
    assert_eq!(ExperimentConfig::from_json(&json).unwrap(), c);
    let defaults = ExperimentConfig::new(Cmd::Sobolev);
    assert_eq!(ExperimentConfig::from_toml(&defaults.to_toml()).unwrap(), defaults);
}
