//! Command-line front end: argument parsing, dispatch and report rendering.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

mod commands;
mod report;

use report::Format;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "pdsa",
    version,
    about = "Poisson structures, Casimirs, strata and symmetry breaking"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Catalog algebra name (so3, gravity, moments:k=3, ...) or a JSON file.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Catalog representation name (so3-vector, coadjoint:so21, ...) or a JSON file.
    #[arg(long, global = true)]
    pub rep: Option<String>,
    /// Catalog potential name (sombrero, quartic, convex) or a JSON file.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    #[serde(serialize_with = "report::serialize_f64")]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Maximum polynomial degree for Casimir discovery.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Comma-separated coordinates, e.g. `1,0,-1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Polynomial to certify as a Casimir; repeatable.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub casimir: Vec<String>,
    /// Locus such as `z=0` or `b=lambda*z`; repeatable.
    #[arg(long, global = true)]
    pub locus: Vec<String>,
    /// Control sweep `name=lo:hi:count`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// Density degree of the truncated moment algebra.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Random sample points instead of the standard loci.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Invariant polynomial for a file representation; repeatable.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub invariant: Vec<String>,
    /// Moment degrees `m,n` for the closure check.
    #[arg(long, global = true)]
    pub closure: Option<String>,
    /// Export the structure constants of the moment algebra to this file.
    #[arg(long, global = true)]
    pub export: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check the Jacobi identity of structure constants and tensor.
    CheckJacobi,
    /// Rank and null space of the Poisson tensor at a point.
    Rank,
    /// Rank on the standard loci with their Casimirs.
    Scan,
    /// Discover polynomial Casimirs up to a degree.
    Casimirs,
    /// Certify Casimirs and subcasimirs.
    Verify,
    /// Truncated vorticity-density moment algebras.
    Moments,
    /// Orbit type, normal slice and R-matrix at a point.
    Strata,
    /// Vacuum, mass spectrum and Goldstone modes.
    Goldstone,
    /// Continuation of the vacuum in one control.
    Sweep,
}

/// Exit codes: 0 success, 1 usage or input error, 2 verification failure.
#[derive(Debug)]
pub enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Exit status, report bytes and error text of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub code: u8,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Runs one invocation; `argv[0]` is the program name. The report goes to
/// `--output` when given and to `stdout` otherwise.
pub fn run<I, T>(argv: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let fail = |code, stderr: String| RunResult {
        code,
        stdout: Vec::new(),
        stderr,
    };
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                fail(1, text)
            } else {
                RunResult {
                    code: 0,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                }
            };
        }
    };
    let outcome = match commands::run(&args) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => return fail(1, format!("error: {msg}\n")),
    };
    let text = report::render(&args, &outcome);
    let code = if outcome.failed { 2 } else { 0 };
    match &args.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => RunResult {
                code,
                stdout: Vec::new(),
                stderr: String::new(),
            },
            Err(e) => fail(1, format!("error: writing {}: {e}\n", path.display())),
        },
        None => RunResult {
            code,
            stdout: text.into_bytes(),
            stderr: String::new(),
        },
    }
}
