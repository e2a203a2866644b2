use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;

use aqs_cli::{parse_config, render_demo, render_report, run, run_demo, AttackSpec, ConfigError, Format, SchemeSpec};
use aqs_core::{Attack, TestMode, Variant};

fn flags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn config(pairs: &[(&str, &str)]) -> aqs_cli::ExperimentConfig {
    parse_config(&flags(pairs), None).unwrap()
}

#[test]
fn full_flag_set_parses() {
    let c = config(&[
        ("n", "4"),
        ("trials", "1000"),
        ("seed", "7"),
        ("scheme", "pauli"),
        ("variant", "A"),
        ("attack", "pauli:XXXX"),
    ]);
    assert_eq!((c.n, c.trials, c.seed), (4, 1000, 7));
    assert_eq!(c.scheme, SchemeSpec::Pauli);
    assert_eq!(c.variant, Variant::A);
    assert_eq!(c.test_mode, TestMode::Projective);
    assert_eq!(c.attack, AttackSpec::Forgery(Attack::Pauli("XXXX".parse().unwrap())));
}

#[test]
fn errors_name_the_offending_key() {
    let base = [("n", "2"), ("trials", "5"), ("scheme", "pauli")];
    let with = |k: &str, v: &str| {
        let mut f = flags(&base);
        f.insert(k.into(), v.into());
        parse_config(&f, None).unwrap_err()
    };
    for (key, value) in [
        ("scheme", "bogus"),
        ("scheme", "uv:H,Q"),
        ("variant", "C"),
        ("test_mode", "maybe"),
        ("attack", "pauli:XQ"),
        ("attack", "pauli:XXX"),
        ("attack", "ma-exchange:5"),
        ("attack", "permutation:0,0"),
        ("message", "cat"),
        ("n", "0"),
        ("n", "-1"),
        ("trials", "0"),
        ("seed", "x"),
        ("shots", "0"),
    ] {
        let err = with(key, value);
        assert!(matches!(&err, ConfigError::Invalid { key: k, .. } if k == key), "{key}={value}: {err}");
        assert!(err.to_string().contains(key));
    }
    assert_eq!(with("colour", "red"), ConfigError::UnknownKey("colour".into()));
    assert_eq!(parse_config(&flags(&[("n", "2"), ("trials", "5")]), None).unwrap_err(), ConfigError::Missing("scheme"));
}

#[test]
fn flags_override_file_values() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# batch\nn = 2\ntrials=100\nscheme=ih\n\nvariant=B # comment").unwrap();
    let c = parse_config(&flags(&[("trials", "500")]), Some(file.path())).unwrap();
    assert_eq!(c.trials, 500);
    assert_eq!(c.scheme, SchemeSpec::Ih);
    assert_eq!(c.variant, Variant::B);
}

#[test]
fn malformed_files_are_rejected() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "n=2\njust some words").unwrap();
    assert!(matches!(parse_config(&BTreeMap::new(), Some(file.path())), Err(ConfigError::Malformed { line: 2, .. })));
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "bogus=1").unwrap();
    assert_eq!(parse_config(&BTreeMap::new(), Some(file.path())).unwrap_err(), ConfigError::UnknownKey("bogus".into()));
}

#[test]
fn honest_batch_accepts_everything() {
    let r = run(&config(&[("n", "3"), ("trials", "100"), ("scheme", "pauli")]), false).unwrap();
    assert_eq!(r.accept_rate, 1.0);
    assert_eq!(r.success_rate, 1.0);
}

#[test]
fn pauli_forgery_batch_always_succeeds() {
    let c = config(&[("n", "4"), ("trials", "1000"), ("scheme", "pauli"), ("attack", "pauli:XXXX")]);
    assert_eq!(run(&c, false).unwrap().success_rate, 1.0);
}

#[test]
fn defense_batch_matches_haar_mean() {
    // For Haar |P>, E|<P|Y|P>|^2 = 1/3, so the expected detection of an X forgery is 2/3.
    let c = config(&[("n", "1"), ("trials", "10000"), ("seed", "5"), ("scheme", "ih"), ("attack", "pauli:X")]);
    let r = run(&c, true).unwrap();
    let sigma = (r.expected_detection * (1.0 - r.expected_detection) / 10_000.0).sqrt();
    assert!((r.mean_detection - r.expected_detection).abs() < 3.0 * sigma);
    // per-trial detection lies in [0, 1], so its variance is at most 1/4
    assert!((r.expected_detection - 2.0 / 3.0).abs() < 3.0 * (0.25f64 / 10_000.0).sqrt());
    assert!(r.success_rate <= r.accept_rate);
}

#[test]
fn reports_are_deterministic() {
    let c = config(&[
        ("n", "2"),
        ("trials", "200"),
        ("seed", "9"),
        ("scheme", "ih"),
        ("test_mode", "swap"),
        ("attack", "pauli:XZ"),
    ]);
    let a = render_report(&run(&c, true).unwrap(), Format::Json);
    let b = render_report(&run(&c, true).unwrap(), Format::Json);
    assert_eq!(a, b);
    let other = config(&[
        ("n", "2"),
        ("trials", "200"),
        ("seed", "10"),
        ("scheme", "ih"),
        ("test_mode", "swap"),
        ("attack", "pauli:XZ"),
    ]);
    assert_ne!(a, render_report(&run(&other, true).unwrap(), Format::Json));
}

#[test]
fn csv_has_header_plus_one_row_per_trial() {
    let c = config(&[("n", "2"), ("trials", "37"), ("scheme", "pauli"), ("attack", "permutation:1,0")]);
    let text = render_report(&run(&c, true).unwrap(), Format::Csv);
    assert_eq!(text.lines().count(), 38);
    assert!(text.starts_with("trial,accepted,success,pass_probability,fidelity"));
}

#[test]
fn json_round_trips() {
    let c = config(&[("n", "1"), ("trials", "10"), ("scheme", "uv:S,H"), ("attack", "symmetric-demo")]);
    let v: serde_json::Value = serde_json::from_str(&render_report(&run(&c, true).unwrap(), Format::Json)).unwrap();
    assert_eq!(v["config"]["scheme"], "uv:S,H");
    assert_eq!(v["accept_rate"], 1.0);
    assert_eq!(v["records"].as_array().unwrap().len(), 10);
    assert!(v.get("duration").is_none());
}

#[test]
fn demo_rates_are_consistent() {
    let demo = run_demo(1, false).unwrap();
    let names: Vec<_> = demo.experiments.iter().map(|e| e.name).collect();
    assert_eq!(names, ["honest", "pauli-forgery", "ma-exchange-forgery", "hadamard-defense"]);
    for e in &demo.experiments {
        assert!(e.report.success_rate <= e.report.accept_rate);
    }
    assert_eq!(demo.experiments[2].report.success_rate, 1.0);
    assert_eq!(render_demo(&demo, Format::Csv).lines().count(), 5);
}

fn aqs(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aqs")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let ok = aqs(&["run", "--n", "2", "--trials", "5", "--scheme", "pauli", "--format", "json"]);
    assert_eq!(ok.status.code(), Some(0));
    serde_json::from_slice::<serde_json::Value>(&ok.stdout).unwrap();

    let bad = aqs(&["run", "--n", "2", "--trials", "5", "--scheme", "bogus"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("scheme"));

    assert_eq!(aqs(&["run", "--n", "2"]).status.code(), Some(2));
    assert_eq!(aqs(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing").join("out.json");
    let io = aqs(&["run", "--n", "1", "--trials", "1", "--scheme", "pauli", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(io.status.code(), Some(1));
}

#[test]
fn validate_scheme_reports_gram_matrix() {
    let out = aqs(&["validate-scheme", "--scheme", "uv:T,H", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], true);
    let uneven = aqs(&["validate-scheme", "--scheme", "pauli", "--probs", "0.5,0.25,0.125,0.125", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&uneven.stdout).unwrap();
    assert_eq!(v["valid"], false);
}
