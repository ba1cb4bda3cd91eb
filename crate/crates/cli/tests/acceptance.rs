//! One pass/fail line per acceptance criterion. Runs without the test
//! harness so the lines always reach stdout.

use std::collections::BTreeMap;
use std::process::Command;

use pfg_cli::report::Report;
use pfg_core::actions::{el_fields, TheoryTag, THEORY_TAGS};
use pfg_core::structure::PRESETS;
use pfg_core::suite::{has_chi_symmetry, run_suite, CheckOutcome, Status, SuiteName, SuiteOptions, Target};

struct Checks(BTreeMap<String, CheckOutcome>);

impl Checks {
    /// Every named check present and passing; lists what is not.
    fn require<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Vec<String> {
        names
            .into_iter()
            .filter_map(|n| match self.0.get(n) {
                None => Some(format!("{n}: missing")),
                Some(c) if c.status != Status::Pass => Some(format!("{n}: {}", c.residual)),
                _ => None,
            })
            .collect()
    }

    fn with_prefix(&self, prefix: &str) -> Vec<&str> {
        self.0.keys().filter(|k| k.starts_with(prefix)).map(String::as_str).collect()
    }
}

fn pfg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfg")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn cli_contract() -> Vec<String> {
    let mut problems = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    for p in PRESETS {
        let path = dir.path().join(format!("{}.json", p.name()));
        let path = path.to_str().unwrap();
        if pfg(&["construct", "--preset", p.name(), "-o", path]).0 != 0 {
            problems.push(format!("construct {}", p.name()));
        }
        if pfg(&["check", path]).0 != 0 {
            problems.push(format!("check {}", p.name()));
        }
    }
    let mut payloads = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.json"));
        let (code, _) = pfg(&["verify", "--suite", "parity", "--seed", "7", "--out", out.to_str().unwrap()]);
        if code != 0 {
            problems.push(format!("verify exit {code}"));
        }
        payloads.push(Report::load(&out).unwrap().without_timings().to_json());
    }
    if payloads[0] != payloads[1] {
        problems.push("reports differ between identical runs".into());
    }
    let mut bad = Report::load(&dir.path().join("run0.json")).unwrap();
    bad.checks[0].status = "fail".into();
    bad.passed = false;
    let tampered = dir.path().join("bad.json");
    std::fs::write(&tampered, bad.to_json()).unwrap();
    if pfg(&["report", tampered.to_str().unwrap()]).0 != 1 {
        problems.push("failing report does not exit 1".into());
    }
    if pfg(&["verify", "--suite", "nope"]).0 != 2 {
        problems.push("unknown suite does not exit 2".into());
    }
    problems
}

fn main() {
    let opts = SuiteOptions { seed: 42, ..SuiteOptions::default() };
    assert!(opts.invariance_seeds >= 50 && opts.el_directions >= 20 && opts.ymap_seeds >= 50 && opts.identity_seeds >= 100);
    let mut all = BTreeMap::new();
    for s in SuiteName::All.members() {
        for c in run_suite(s, &Target::Presets, &opts) {
            all.insert(c.name.clone(), c);
        }
    }
    let checks = Checks(all);

    let mut lines: Vec<(u32, &str, Vec<String>)> = Vec::new();

    let mut structure = Vec::new();
    for p in PRESETS {
        let rels = checks.with_prefix(&format!("structure.{}.", p.name()));
        if rels.len() < 10 {
            structure.push(format!("{}: only {} relations", p.name(), rels.len()));
        }
        structure.extend(checks.require(rels));
    }
    lines.push((1, "structure relations and mutation sensitivity", structure));

    lines.push((2, "no-go and e-solution families", checks.require(["structure.esolve.exft-adjoint", "structure.esolve.su2-ymcm"])));

    lines.push((
        3,
        "differential identities",
        checks.require(["identity.dd", "identity.star_squared", "identity.stokes", "identity.chern_simons", "identity.bianchi"]),
    ));

    let mut invariance = Vec::new();
    for tag in THEORY_TAGS {
        invariance.push(format!("invariance.{}.xi", tag.name()));
        if has_chi_symmetry(tag) {
            invariance.push(format!("invariance.{}.chi", tag.name()));
        }
    }
    lines.push((4, "gauge invariance of actions", checks.require(invariance.iter().map(String::as_str))));

    let el_tags = [
        TheoryTag::YmcmDual,
        TheoryTag::AbelianCm2ndOrder,
        TheoryTag::AbelianCmDual,
        TheoryTag::Exft,
        TheoryTag::FtcmDual,
    ];
    let mut el = Vec::new();
    for tag in el_tags {
        assert!(!el_fields(tag).is_empty());
        el.push(format!("el.{}.pairing", tag.name()));
        el.push(format!("el.{}.constants", tag.name()));
    }
    lines.push((5, "Euler-Lagrange pairing", checks.require(el.iter().map(String::as_str))));

    lines.push((
        6,
        "elimination equivalence and abelian dual",
        checks.require(["el.ymap", "el.keq_pairing", "duality.abelian_roundtrip.fourier", "duality.abelian_roundtrip.exppoly"]),
    ));

    lines.push((
        7,
        "duality identities",
        checks.require([
            "duality.flatness",
            "duality.exft_decoupling",
            "duality.dilaton_scaling",
            "duality.chern_abelian",
            "duality.ftcm_dual",
            "duality.ftcm_decoupling",
        ]),
    ));

    lines.push((8, "parity table (-,+,+,-)", checks.require(["parity.YM", "parity.FT", "parity.exFT", "parity.CM"])));

    lines.push((9, "CLI contract", cli_contract()));

    let mut failed = 0;
    for (n, label, problems) in &lines {
        if problems.is_empty() {
            println!("criterion {n}: PASS {label}");
        } else {
            failed += 1;
            println!("criterion {n}: FAIL {label}: {}", problems.join("; "));
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
