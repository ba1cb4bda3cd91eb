use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pfg_cli::config::ConfigDocument;
use pfg_cli::report::Report;
use pfg_cli::{run_args, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use pfg_core::structure::PRESETS;

fn pfg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfg")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn construct(dir: &Path, preset: &str) -> PathBuf {
    let path = dir.join(format!("{preset}.json"));
    let (code, _, err) = pfg(&["construct", "--preset", preset, "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{err}");
    path
}

fn edit(path: &Path, f: impl FnOnce(&mut serde_json::Value)) {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    f(&mut v);
    fs::write(path, serde_json::to_string(&v).unwrap()).unwrap();
}

#[test]
fn construct_then_check_passes_for_every_preset() {
    let dir = tempfile::tempdir().unwrap();
    for p in PRESETS {
        let path = construct(dir.path(), p.name());
        let (code, out, _) = pfg(&["check", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_PASS, "{}: {out}", p.name());
        assert!(out.contains("PASS"));
    }
}

#[test]
fn config_round_trips_byte_identically() {
    for p in PRESETS {
        let o = run_args(["pfg", "construct", "--preset", p.name()]);
        assert_eq!(o.code, EXIT_PASS);
        let doc = ConfigDocument::parse(&o.stdout).unwrap();
        assert_eq!(doc.to_text(), o.stdout);
        let cd = doc.couplings().unwrap();
        assert_eq!(ConfigDocument::from_couplings(&cd, doc.signature().unwrap()).to_text(), o.stdout);
    }
}

#[test]
fn rationals_parse_exactly_and_floats_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "u1-cm");
    edit(&path, |v| v["e"][0][0][0] = "1/3".into());
    let cd = ConfigDocument::load(&path).unwrap().couplings().unwrap();
    assert_eq!(cd.e.at3(0, 0, 0), &pfg_core::rational::q(1, 3));
    assert_eq!(pfg(&["check", path.to_str().unwrap()]).0, EXIT_PASS);

    edit(&path, |v| v["e"][0][0][0] = "1.5".into());
    let (code, _, err) = pfg(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("e[0, 0, 0]"), "{err}");

    edit(&path, |v| v["e"][0][0][0] = serde_json::json!(1.5));
    let (code, _, err) = pfg(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn malformed_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(&str, Box<dyn Fn(&mut serde_json::Value)>)> = vec![
        ("unknown key", Box::new(|v| v["extra"] = 1.into())),
        ("shape", Box::new(|v| v["a"] = serde_json::json!([[["0", "0"]]]))),
        ("signature", Box::new(|v| v["signature"] = "minkowski".into())),
        ("metric", Box::new(|v| v["g"] = serde_json::json!([["0"]]))),
    ];
    for (label, f) in cases {
        let path = construct(dir.path(), "u1-cm");
        edit(&path, f);
        let (code, _, err) = pfg(&["check", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE, "{label}: {err}");
    }
    assert_eq!(pfg(&["check", dir.path().join("missing.json").to_str().unwrap()]).0, EXIT_USAGE);
    assert_eq!(pfg(&["verify", "--suite", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(pfg(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(pfg(&["construct", "--preset", "su3"]).0, EXIT_USAGE);
}

#[test]
fn nonzero_e_on_exft_adjoint_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "exft-adjoint");
    edit(&path, |v| {
        for i in 0..3 {
            v["e"][i][i][i] = "1".into();
        }
    });
    let (code, out, _) = pfg(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("fail structure.couplings.e_intertwining"), "{out}");
    assert!(out.contains("fail structure.obstructions"), "{out}");
}

#[test]
fn verify_is_deterministic_and_reports_rerender() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        let (code, _, err) = pfg(&["verify", "--suite", "parity", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_PASS, "{err}");
        reports.push(Report::load(&out).unwrap());
    }
    assert_eq!(reports[0].without_timings().to_json(), reports[1].without_timings().to_json());
    let r = &reports[0];
    assert!(r.conventions.contains_key("orientation"));
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);

    let saved = dir.path().join("r0.json");
    let (code, text, _) = pfg(&["report", saved.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(text, r.render());

    let mut bad = r.clone();
    bad.checks[0].status = "fail".into();
    let tampered = dir.path().join("bad.json");
    fs::write(&tampered, bad.to_json()).unwrap();
    assert_eq!(pfg(&["report", tampered.to_str().unwrap()]).0, EXIT_FAIL);
}

#[test]
fn different_seeds_change_the_sampled_fields_not_the_verdict() {
    let a = run_args(["pfg", "verify", "--suite", "duality", "--seed", "1", "--json"]);
    let b = run_args(["pfg", "verify", "--suite", "duality", "--seed", "2", "--json"]);
    assert_eq!((a.code, b.code), (EXIT_PASS, EXIT_PASS));
    let ra: Report = serde_json::from_str(&a.stdout).unwrap();
    let rb: Report = serde_json::from_str(&b.stdout).unwrap();
    assert_eq!(ra.checks.len(), rb.checks.len());
    let info = |r: &Report| r.checks.iter().find(|c| c.status == "info").map(|c| c.residual.clone());
    assert_ne!(info(&ra), info(&rb));
}

#[test]
fn verify_all_on_su2_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "su2-ymcm");
    let (code, out, err) = pfg(&["verify", "--suite", "all", "--seed", "42", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{out}{err}");
    for suite in ["structure.", "invariance.", "el.", "duality.", "parity."] {
        assert!(out.contains(suite), "{suite} missing");
    }
}
