//! The `pfg` command line: structure checks, preset construction,
//! verification suites and report rendering.

pub mod config;
pub mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use pfg_core::structure::{construct_preset, Preset, PresetParams};
use pfg_core::suite::{run_suite, structure_checks, SuiteName, SuiteOptions, Target};
use pfg_core::Signature;

use config::ConfigDocument;
use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pfg", version, about = "Exact verification of coupled 1-form/2-form gauge theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the algebraic structure checks on a config
    Check {
        config: PathBuf,
        /// Also write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the config of a preset
    Construct {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value = "lorentzian")]
        signature: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites
    Verify {
        /// structure | invariance | el | duality | parity | all
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cutoff: Option<u32>,
        /// Run against this config instead of the presets
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Re-render a saved JSON report
    Report {
        saved: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn out(stdout: String, code: i32) -> Self {
        Outcome { stdout, stderr: String::new(), code }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match run(&cli) {
            Ok(o) => o,
            Err(e) => Outcome { stderr: format!("{e}\n"), code: EXIT_USAGE, ..Default::default() },
        },
        Err(e) if e.use_stderr() => Outcome { stderr: e.render().to_string(), code: EXIT_USAGE, ..Default::default() },
        Err(e) => Outcome::out(e.render().to_string(), EXIT_PASS),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { config, out } => check(config, out.as_deref()),
        Command::Construct { preset, signature, output } => construct(preset, signature, output.as_deref()),
        Command::Verify { suite, seed, cutoff, config, out, json } => {
            verify(suite.as_deref(), *seed, *cutoff, config.as_deref(), out.as_deref(), *json)
        }
        Command::Report { saved, json } => {
            let r = Report::load(saved)?;
            let stdout = if *json { r.to_json() } else { r.render() };
            Ok(Outcome::out(stdout, exit_code(r.aggregate())))
        }
    }
}

fn exit_code(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn check(path: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let doc = ConfigDocument::load(path)?;
    doc.signature()?;
    let cd = doc.couplings()?;
    let mut r = Report::new("check", path.display().to_string(), &structure_checks(&cd));
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Some(o) = out {
        write_file(o, &r.to_json())?;
    }
    Ok(Outcome::out(r.render(), exit_code(r.passed)))
}

fn construct(preset: &str, signature: &str, output: Option<&Path>) -> Result<Outcome, CliError> {
    let p = Preset::from_name(preset).map_err(|e| CliError::Usage(e.to_string()))?;
    let sig = Signature::from_name(signature).map_err(|e| CliError::Usage(e.to_string()))?;
    let cd = construct_preset(p, &PresetParams::default()).map_err(|e| CliError::Config(e.to_string()))?;
    let text = ConfigDocument::from_couplings(&cd, sig).to_text();
    match output {
        Some(o) => {
            write_file(o, &text)?;
            Ok(Outcome::out(format!("wrote {}\n", o.display()), EXIT_PASS))
        }
        None => Ok(Outcome::out(text, EXIT_PASS)),
    }
}

fn verify(
    suite: Option<&str>,
    seed: Option<u64>,
    cutoff: Option<u32>,
    config: Option<&Path>,
    out: Option<&Path>,
    json: bool,
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let doc = config.map(ConfigDocument::load).transpose()?;
    let suites: Vec<String> = match (suite, doc.as_ref().and_then(|d| d.suites.clone())) {
        (Some(s), _) => vec![s.to_string()],
        (None, Some(list)) if !list.is_empty() => list,
        _ => vec!["all".to_string()],
    };
    let suites = suites
        .iter()
        .map(|s| SuiteName::from_name(s).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut opts = SuiteOptions::default();
    opts.seed = seed.or(doc.as_ref().and_then(|d| d.seed)).unwrap_or(0);
    opts.cutoff = cutoff.or(doc.as_ref().and_then(|d| d.cutoff)).unwrap_or(1);
    if opts.cutoff == 0 {
        return Err(CliError::Usage("cutoff must be at least 1".into()));
    }
    let (target, label) = match &doc {
        Some(d) => (
            Target::Config { couplings: d.couplings()?, signature: d.signature()? },
            config.map(|p| p.display().to_string()).unwrap_or_default(),
        ),
        None => (Target::Presets, "presets".to_string()),
    };
    let mut members: Vec<SuiteName> = suites.iter().flat_map(|s| s.members()).collect();
    members.sort();
    members.dedup();
    let mut checks = Vec::new();
    for s in &members {
        checks.extend(run_suite(*s, &target, &opts));
    }
    let mut r = Report::new("verify", label, &checks);
    r.suite = Some(suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(","));
    r.seed = Some(opts.seed);
    r.cutoff = Some(opts.cutoff);
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Some(o) = out {
        write_file(o, &r.to_json())?;
    }
    let stdout = if json { r.to_json() } else { r.render() };
    Ok(Outcome::out(stdout, exit_code(r.passed)))
}
