//! Command-line front end for `wiener-core`.
//!
//! Every subcommand reads a flat `key=value` configuration (from `--config`
//! and/or trailing arguments), prints a JSON report that embeds the resolved
//! configuration, and optionally writes `<command>.json` / `<command>.csv`
//! into `--out`. Exit codes: 0 certified or bounded, 1 negative, 2
//! inconclusive, 3 usage error.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub mod commands;
pub mod config;
pub mod input;
pub mod parse;

use config::{Origin, RawConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Malformed invocation or configuration; always exit code 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<wiener_core::Error> for UsageError {
    fn from(e: wiener_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wiener",
    version,
    about = "Criteria and numerical certificates for the Wiener algebra A(R^d)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Flat key=value config file; command-line key=value pairs override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory receiving <command>.json and <command>.csv
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for randomized commands (required by hardy empirical)
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on this)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Print the JSON report on stdout (default)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Print the CSV data on stdout instead of JSON
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide every applicable criterion for an exponent configuration
    Criteria(Params),
    /// Tabulate a rule's status over a (p, q) grid
    Region(Params),
    /// Dyadic Bernstein sum with tail verdict
    Bernstein(Params),
    /// Hardy-Steklov checks: modes hardy, lemma-star, empirical
    Hardy(Params),
    /// Classification, model exponents and counterexample parameters
    Gallery(Params),
    /// Lebesgue norms of a field, its grid derivatives or its differences
    Norms(Params),
    /// Truncated A-norm ladder and trend
    Anorm(Params),
}

#[derive(Debug, Args)]
pub struct Params {
    /// key=value pairs (a leading bare word sets the rule for region or the mode for hardy)
    #[arg(value_name = "KEY=VALUE")]
    pub args: Vec<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Criteria(_) => "criteria",
            Command::Region(_) => "region",
            Command::Bernstein(_) => "bernstein",
            Command::Hardy(_) => "hardy",
            Command::Gallery(_) => "gallery",
            Command::Norms(_) => "norms",
            Command::Anorm(_) => "anorm",
        }
    }

    fn params(&self) -> &Params {
        match self {
            Command::Criteria(p)
            | Command::Region(p)
            | Command::Bernstein(p)
            | Command::Hardy(p)
            | Command::Gallery(p)
            | Command::Norms(p)
            | Command::Anorm(p) => p,
        }
    }

    fn positional_key(&self) -> Option<&'static str> {
        match self {
            Command::Region(_) => Some("rule"),
            Command::Hardy(_) => Some("mode"),
            _ => None,
        }
    }
}

/// What a command produced, before rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub result: Value,
    pub csv: String,
    pub exit: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "exit_code": self.exit,
            "result": self.result,
        });
        let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
        s.push('\n');
        s
    }
}

/// Builds the raw configuration: file entries overridden by arguments, then
/// `--seed` for the randomized hardy mode.
pub fn raw_config(cli: &Cli) -> Result<RawConfig, UsageError> {
    let mut raw = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            RawConfig::parse_file(&text, &path.display().to_string())?
        }
        None => RawConfig::default(),
    };
    let cmd = &cli.command;
    raw.apply_args(&cmd.params().args, cmd.positional_key())?;
    let randomized = matches!(cmd, Command::Hardy(_)) && raw.get("mode") == Some("empirical");
    if let (true, Some(seed)) = (randomized, cli.global.seed) {
        raw.set("seed", &seed.to_string(), Origin::Argument);
    }
    Ok(raw)
}

pub fn run(cli: &Cli) -> Result<Report, UsageError> {
    let raw = raw_config(cli)?;
    match &cli.command {
        Command::Criteria(_) => commands::criteria::run(&raw),
        Command::Region(_) => commands::region::run(&raw),
        Command::Bernstein(_) => commands::bernstein::run(&raw),
        Command::Hardy(_) => commands::hardy::run(&raw),
        Command::Gallery(_) => commands::gallery::run(&raw),
        Command::Norms(_) => commands::norms::run(&raw),
        Command::Anorm(_) => commands::anorm::run(&raw),
    }
}

/// Process-level result: exit code and the text for stdout / stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn write_outputs(dir: &Path, report: &Report) -> Result<(), UsageError> {
    std::fs::create_dir_all(dir).map_err(|e| UsageError(format!("cannot create {}: {e}", dir.display())))?;
    for (ext, body) in [("json", report.to_json()), ("csv", report.csv.clone())] {
        let path = dir.join(format!("{}.{ext}", report.command));
        std::fs::write(&path, body).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stderr: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    ..Default::default()
                }
            };
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return usage_failure(UsageError("--threads must be at least 1".into()));
        }
        // a pool already installed by an earlier call in this process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => return usage_failure(e),
    };
    if let Some(dir) = &cli.global.out {
        if let Err(e) = write_outputs(dir, &report) {
            return usage_failure(e);
        }
    }
    Outcome {
        code: report.exit,
        stdout: if cli.global.csv {
            report.csv.clone()
        } else {
            report.to_json()
        },
        stderr: String::new(),
    }
}

fn usage_failure(e: UsageError) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}
