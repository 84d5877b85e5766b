use super::*;
use crate::diagnostics::Suite;

const BASE: &str = r#"{
  "model": { "kind": "schrodinger" },
  "grid": { "n": 16, "box_length": 8.0 },
  "potential": { "form": "square_well", "radius": 1.0 },
  "energy_ladder": { "E0": -1.0, "ratio": 0.5, "count": 6 },
  "weights": [{ "kind": "power", "s": 1.0 }]
}"#;

fn edited(f: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(BASE).unwrap();
    f(&mut v);
    v.to_string()
}

fn config_error_path(text: &str) -> String {
    match RunConfig::from_json(text) {
        Err(CliError::Config { path, .. }) => path,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn base_config_parses_with_defaults() {
    let c = RunConfig::from_json(BASE).unwrap();
    assert_eq!(c.seed, 7);
    assert_eq!(c.model.mass, 1.0);
    assert_eq!(c.output.formats, vec![Format::Csv, Format::Json]);
    assert_eq!(c.checks.suites, Suite::ALL.to_vec());
    let e = c.energies().unwrap();
    assert_eq!(e.len(), 6);
    assert_eq!(e[0], -1.0);
    assert_eq!(e[5], -1.0 / 32.0);
}

#[test]
fn config_round_trips_through_json() {
    let c = RunConfig::from_json(BASE).unwrap();
    let again = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(c, again);
}

#[test]
fn parse_errors_name_the_offending_field() {
    assert_eq!(config_error_path(&edited(|v| v["grid"]["n"] = "big".into())), "grid.n");
    assert_eq!(config_error_path(&edited(|v| v["model"]["kind"] = "klein_gordon".into())), "model.kind");
    assert_eq!(config_error_path(&edited(|v| v["weights"][0]["s"] = "x".into())), "weights[0]");
    let unknown = config_error_path(&edited(|v| v["energy_ladder"]["step"] = 2.into()));
    assert!(unknown.starts_with("energy_ladder"), "{unknown}");
}

#[test]
fn semantic_errors_name_the_offending_field() {
    assert_eq!(config_error_path(&edited(|v| v["energy_ladder"]["ratio"] = 1.5.into())), "energy_ladder.ratio");
    assert_eq!(config_error_path(&edited(|v| v["energy_ladder"]["count"] = 2.into())), "energy_ladder.count");
    assert_eq!(config_error_path(&edited(|v| v["energy_ladder"]["E0"] = 0.5.into())), "energy_ladder.E0");
    assert_eq!(config_error_path(&edited(|v| v["model"]["mass"] = (-1.0).into())), "model.mass");
    assert_eq!(config_error_path(&edited(|v| v["branch"] = "lower".into())), "branch");
    assert_eq!(config_error_path(&edited(|v| v["certify"] = serde_json::json!({"tail": 1}))), "certify.tail");
    assert_eq!(config_error_path(&edited(|v| v["output"] = serde_json::json!({"formats": []}))), "output.formats");
}

#[test]
fn exit_codes() {
    assert_eq!(CliError::Config { path: "a".into(), message: "b".into() }.exit_code(), 2);
    assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    assert_eq!(CliError::Failed(vec!["x".into()]).exit_code(), 1);
    assert_eq!(CliError::from(Error::Inconsistent("x".into())).exit_code(), 1);
    assert_eq!(CliError::from(Error::Usage("x".into())).exit_code(), 2);
}

#[test]
fn numbers_round_trip_and_name_non_finite_values() {
    assert_eq!(format_number(f64::NAN), "nan");
    assert_eq!(format_number(f64::INFINITY), "inf");
    assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
    for v in [0.1, -2.5e-7, 1.0 / 3.0, 6.02e23] {
        assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
    }
}

#[test]
fn explicit_directory_beats_config() {
    let mut c = RunConfig::from_json(BASE).unwrap();
    c.output.directory = Some("from_config".into());
    assert_eq!(resolve_out_dir(Some(Path::new("arg")), &c), PathBuf::from("arg"));
}

#[test]
fn written_outputs_are_byte_identical_across_runs() {
    let config = RunConfig::from_json(BASE).unwrap();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut contents = Vec::new();
    for dir in &dirs {
        let out = cmd_threshold(&config).unwrap();
        let paths = out.write(dir.path(), &config.output.formats).unwrap();
        let names: Vec<_> = paths.iter().map(|p| p.file_name().unwrap().to_owned()).collect();
        assert_eq!(names, ["threshold.csv", "summary.json"]);
        contents.push(paths.iter().map(|p| std::fs::read(p).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(contents[0], contents[1]);
    let csv = String::from_utf8(contents[0][0].clone()).unwrap();
    assert!(csv.starts_with("E,lambda,alpha,mu_cauchy_residual\n"));
    assert_eq!(csv.lines().nth(1).unwrap().split(',').nth(3), Some("nan"));
    let summary: serde_json::Value = serde_json::from_slice(&contents[0][1]).unwrap();
    assert_eq!(summary["config"], serde_json::to_value(&config).unwrap());
}

#[test]
fn failures_turn_into_exit_one() {
    let out = RunOutput { command: "x".into(), tables: vec![], summary: serde_json::Value::Null, failures: vec!["f".into()] };
    assert_eq!(out.into_result().unwrap_err().exit_code(), 1);
}

#[test]
fn check_requires_a_suite() {
    let config = default_check_config();
    assert!(matches!(cmd_check(&config, &[]), Err(CliError::Usage(_))));
}

#[test]
fn check_table_lists_every_report() {
    let mut config = default_check_config();
    config.checks.settings.bessel_samples = 500;
    let out = cmd_check(&config, &[Suite::Bessel]).unwrap();
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    let table = &out.tables[0];
    assert_eq!(table.header[..2], ["suite".to_string(), "check".to_string()]);
    assert_eq!(table.rows.len(), out.summary["reports"].as_array().unwrap().len());
    assert!(table.rows.iter().all(|r| r[0] == "bessel" && r[5] == "true"));
}

#[test]
fn table_names_are_file_safe() {
    assert_eq!(run::slug("power(s=0.6)"), "power_s_0p6");
    assert_eq!(run::slug("table[3 nodes]"), "table_3_nodes");
}
