//! Machine-readable reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pfg_core::actions::{el_constants, Theory, KEQ_CONSTANT, THEORY_TAGS};
use pfg_core::duality::FTCM_DUAL_NORMALIZATION;
use pfg_core::rational::fmt_q;
use pfg_core::structure::{construct_preset, PresetParams};
use pfg_core::suite::{all_passed, preset_for, CheckOutcome, Status};
use pfg_core::Signature;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<String>,
    pub seed: u64,
    pub status: String,
    pub residual: String,
    pub wall_time_ms: u64,
}

impl CheckRecord {
    pub fn from_outcome(c: &CheckOutcome) -> Self {
        CheckRecord {
            name: c.name.clone(),
            theory: c.theory.clone(),
            seed: c.seed,
            status: c.status.name().to_string(),
            residual: c.residual.clone(),
            wall_time_ms: c.wall_time_ms,
        }
    }

    fn failed(&self) -> bool {
        self.status == Status::Fail.name()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format_version: u32,
    pub command: String,
    /// What was checked: a preset set, a config path or a suite name.
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    pub conventions: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: &str, target: String, checks: &[CheckOutcome]) -> Self {
        let mut records: Vec<CheckRecord> = checks.iter().map(CheckRecord::from_outcome).collect();
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            format_version: FORMAT_VERSION,
            command: command.to_string(),
            target,
            suite: None,
            seed: None,
            cutoff: None,
            conventions: conventions(),
            checks: records,
            passed: all_passed(checks),
            wall_time_ms: 0,
        }
    }

    /// Recomputes the aggregate from the checks.
    pub fn aggregate(&self) -> bool {
        !self.checks.iter().any(CheckRecord::failed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let r: Report = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))?;
        if r.format_version != FORMAT_VERSION {
            return Err(CliError::Config(format!(
                "{}: report format {} is not {FORMAT_VERSION}",
                path.display(),
                r.format_version
            )));
        }
        Ok(r)
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.wall_time_ms = 0;
        for c in &mut r.checks {
            c.wall_time_ms = 0;
        }
        r
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut head = format!("pfg {} on {}", self.command, self.target);
        if let Some(s) = &self.suite {
            let _ = write!(head, " suite {s}");
        }
        if let Some(s) = self.seed {
            let _ = write!(head, " seed {s}");
        }
        if let Some(c) = self.cutoff {
            let _ = write!(head, " cutoff {c}");
        }
        let _ = writeln!(out, "{head}");
        for c in &self.checks {
            let theory = c.theory.as_deref().map(|t| format!(" [{t}]")).unwrap_or_default();
            let _ = writeln!(out, "{:<4} {}{theory}: {} ({} ms)", c.status, c.name, c.residual, c.wall_time_ms);
        }
        let failed = self.checks.iter().filter(|c| c.failed()).count();
        let _ = writeln!(
            out,
            "{}: {} checks, {failed} failed, {} ms",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time_ms
        );
        out
    }
}

/// The frozen conventions every report carries.
pub fn conventions() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    put("manifold", "torus (R/2piZ)^4, integrals in units of (2pi)^4".into());
    put("orientation", "epsilon_0123 = +1".into());
    put("metric.lorentzian", "diag(-1,1,1,1)".into());
    put("metric.euclidean", "diag(1,1,1,1)".into());
    put("hodge", "alpha ^ *beta = <alpha,beta> vol".into());
    put("kinetic_sign", "sigma = -sign det(metric): +1 lorentzian, -1 euclidean".into());
    put("action", "S = int L, kinetic terms *F ^ F with unit weight".into());
    put("keq_constant", format!("{KEQ_CONSTANT} * sigma"));
    put("ftcm_dual_normalization", FTCM_DUAL_NORMALIZATION.to_string());
    for tag in THEORY_TAGS {
        let Ok(cd) = construct_preset(preset_for(tag), &PresetParams::default()) else { continue };
        let Ok(th) = Theory::new(tag, cd, Signature::LORENTZIAN) else { continue };
        if let Ok(c) = el_constants(&th) {
            let shown: Vec<String> = c.iter().map(fmt_q).collect();
            put(&format!("el_constants.{}", tag.name()), format!("[{}] (lorentzian; sigma-odd entries flip)", shown.join(", ")));
        }
    }
    m
}
