//! The `isoleaf` command line: documents in, reports out.
//!
//! Exit codes: 0 when the command ran (verdicts are data), 2 on invalid
//! input, 3 when an internal invariant fails.

pub mod commands;
pub mod doc;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use doc::Document;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    /// Wraps a core error reported while reading the field at `at`.
    pub fn invalid(at: &str, e: isoleaf::Error) -> Self {
        match e {
            isoleaf::Error::HomVanishingViolated { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(format!("{at}: {e}")),
        }
    }

    pub fn core(e: isoleaf::Error) -> Self {
        match e {
            isoleaf::Error::HomVanishingViolated { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(s) => write!(f, "invalid input: {s}"),
            CliError::Internal(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

/// A report: human-readable lines and the same content as JSON.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    /// Set when the report itself records an invariant failure.
    pub internal_failure: bool,
}

impl Report {
    pub fn new(lines: Vec<String>, json: Value) -> Self {
        Report {
            lines,
            json,
            internal_failure: false,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serialisable");
            s.push('\n');
            s
        } else {
            let mut s = self.lines.join("\n");
            s.push('\n');
            s
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "isoleaf",
    version,
    about = "Slopes, Higgs fields and height-one group schemes on the projective line"
)]
struct Cli {
    /// Machine-readable output with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Slope, extreme slopes and positivity of a bundle.
    Slope { input: Option<PathBuf> },
    /// Harder-Narasimhan filtration and polygon of a bundle.
    Hn { input: Option<PathBuf> },
    /// Semistability of a Higgs bundle; for graded data also the lifting
    /// obstruction and every step of the Arakelov bound.
    HiggsCheck { input: Option<PathBuf> },
    /// Local-local test and the α_p flag of a Dieudonné module.
    Dieudonne { input: Option<PathBuf> },
    /// Descent of a restricted Lie bundle to the base field.
    Lie { input: Option<PathBuf> },
    /// Kernel, image, saturation and cokernel of a bundle map.
    Triple { input: Option<PathBuf> },
    /// Lifting obstruction report for a family descriptor.
    W2 { input: Option<PathBuf> },
    /// Full report on the Moret-Bailly family.
    MoretBailly {
        #[arg(long)]
        prime: u64,
    },
    /// Runs the isogeny reduction loop.
    Reduce {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Random property checks.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Prints the canonical form of a document.
    Canon { input: Option<PathBuf> },
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_doc(input: &Option<PathBuf>) -> Result<Document, CliError> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
                .map_err(|e| CliError::Invalid(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    Document::parse(&text)
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let result = match &cli.cmd {
        Cmd::Slope { input } => read_doc(input).and_then(|d| commands::cmd_slope(&d)),
        Cmd::Hn { input } => read_doc(input).and_then(|d| commands::cmd_hn(&d)),
        Cmd::HiggsCheck { input } => read_doc(input).and_then(|d| commands::cmd_higgs_check(&d)),
        Cmd::Dieudonne { input } => read_doc(input).and_then(|d| commands::cmd_dieudonne(&d)),
        Cmd::Lie { input } => read_doc(input).and_then(|d| commands::cmd_lie(&d)),
        Cmd::Triple { input } => read_doc(input).and_then(|d| commands::cmd_triple(&d)),
        Cmd::W2 { input } => read_doc(input).and_then(|d| commands::cmd_w2(&d)),
        Cmd::MoretBailly { prime } => commands::cmd_moret_bailly(*prime),
        Cmd::Reduce { input, max_steps } => {
            read_doc(input).and_then(|d| commands::cmd_reduce(&d, *max_steps))
        }
        Cmd::Sweep { seed, cases } => commands::cmd_sweep(*seed, *cases),
        Cmd::Canon { input } => read_doc(input).and_then(|d| commands::cmd_canon(&d)),
    };
    match result {
        Ok(r) => Outcome {
            code: if r.internal_failure { 3 } else { 0 },
            stdout: r.render(cli.json),
            stderr: String::new(),
        },
        Err(e) => {
            let stdout = if cli.json {
                let v = serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() });
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("serialisable")
                )
            } else {
                String::new()
            };
            Outcome {
                code: e.exit_code(),
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}
