//! `convexkit` — batch front door for the exact abstract-convexity toolkit.
//!
//! Exit codes: 0 on success, 1 on input errors (malformed files, bad flags,
//! exceeded caps), 2 when the requested check finds a hypothesis violation —
//! the report then carries a certificate (a violating point or direction).

mod commands;
mod fail;
mod problem;
mod report;

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use sha2::{Digest, Sha256};

use convexkit::scalar::{parse_rational, Rational};

use commands::Loaded;
use fail::CliError;
use problem::{parse_problem, NumberPolicy};
use report::{record, write_csv, write_json, InputDigest, Outcome};

#[derive(Parser)]
#[command(
    name = "convexkit",
    version,
    about = "Exact-arithmetic abstract convexity: envelopes, conjugates, cone separation, \
             subdifferential calculus, and invariant suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write plot data (function-valued commands only) to this CSV file
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<String>,

    /// Write the JSON report to this file
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<String>,

    /// Numeric-literal policy: exact rejects floating literals in inputs
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Comparison tolerance recorded for float-mode consumers (float mode only)
    #[arg(long, global = true, value_name = "RATIONAL", allow_hyphen_values = true)]
    tol: Option<String>,

    /// Seed for the randomized invariant suites (`check`)
    #[arg(long, global = true, default_value_t = 42, value_name = "N")]
    seed: u64,

    /// Reject inputs whose ambient dimension exceeds this cap
    #[arg(long = "max-dim", global = true, value_name = "N")]
    max_dim: Option<usize>,

    /// Evaluation grid for plot data: points split by ';', coordinates by ','
    #[arg(long, global = true, value_name = "POINTS", allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Young-Fenchel conjugate of a sampled or polyhedral function
    Conjugate { files: Vec<String> },
    /// H-convex envelope of a function over a generator set
    Envelope { files: Vec<String> },
    /// H-support set: the generators lying below a function
    Hsupport { files: Vec<String> },
    /// Support function of a polytope of functionals
    #[command(name = "support-fn")]
    SupportFn { files: Vec<String> },
    /// Polar of a polyhedral cone
    Polar { files: Vec<String> },
    /// Openness-at-zero check for a cone pair, with the diagonal cross-check
    Nonoblate { files: Vec<String> },
    /// General-position check for two or more cones
    Genpos { files: Vec<String> },
    /// Polar of an intersection against the sum of polars
    Decompose { files: Vec<String> },
    /// Fit a linear functional between -q and p, or find a violation
    Sandwich { files: Vec<String> },
    /// Support set (subdifferential at zero) of a sublinear function
    Subdiff { files: Vec<String> },
    /// Support hull of an operator family, with optional membership candidates
    Cop { files: Vec<String> },
    /// Composition subdifferential: direct versus formula
    Compose { files: Vec<String> },
    /// Epsilon-subdifferential at a base point
    Epsdiff {
        files: Vec<String>,
        /// Base point, coordinates split by ','
        #[arg(long, value_name = "POINT", allow_hyphen_values = true)]
        at: String,
        /// Slack (nonnegative rational)
        #[arg(long, default_value = "0", value_name = "RATIONAL", allow_hyphen_values = true)]
        eps: String,
        /// Membership probe, repeatable
        #[arg(long = "test", value_name = "POINT", allow_hyphen_values = true)]
        tests: Vec<String>,
    },
    /// Infinitesimal subdifferential of a lex-polyhedral function
    Dsubdiff {
        files: Vec<String>,
        /// Base point, coordinates split by ','
        #[arg(long, value_name = "POINT", allow_hyphen_values = true)]
        at: String,
    },
    /// Infimal convolution (grid or polyhedral bundle)
    Convolve { files: Vec<String> },
    /// Chain rule for the convolution subdifferential at a point
    Chainrule {
        files: Vec<String>,
        /// Evaluation point x,y,z
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        at: String,
    },
    /// Run the randomized invariant suites
    Check {
        /// Suite name, or "all"
        #[arg(long, default_value = "all", value_name = "NAME")]
        suite: String,
        /// Cap the instance count per suite part (smoke runs)
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Conjugate { .. } => "conjugate",
            Command::Envelope { .. } => "envelope",
            Command::Hsupport { .. } => "hsupport",
            Command::SupportFn { .. } => "support-fn",
            Command::Polar { .. } => "polar",
            Command::Nonoblate { .. } => "nonoblate",
            Command::Genpos { .. } => "genpos",
            Command::Decompose { .. } => "decompose",
            Command::Sandwich { .. } => "sandwich",
            Command::Subdiff { .. } => "subdiff",
            Command::Cop { .. } => "cop",
            Command::Compose { .. } => "compose",
            Command::Epsdiff { .. } => "epsdiff",
            Command::Dsubdiff { .. } => "dsubdiff",
            Command::Convolve { .. } => "convolve",
            Command::Chainrule { .. } => "chainrule",
            Command::Check { .. } => "check",
        }
    }

    fn files(&self) -> &[String] {
        match self {
            Command::Conjugate { files }
            | Command::Envelope { files }
            | Command::Hsupport { files }
            | Command::SupportFn { files }
            | Command::Polar { files }
            | Command::Nonoblate { files }
            | Command::Genpos { files }
            | Command::Decompose { files }
            | Command::Sandwich { files }
            | Command::Subdiff { files }
            | Command::Cop { files }
            | Command::Compose { files }
            | Command::Epsdiff { files, .. }
            | Command::Dsubdiff { files, .. }
            | Command::Convolve { files }
            | Command::Chainrule { files, .. } => files,
            Command::Check { .. } => &[],
        }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                0
            } else {
                1
            };
        }
    };
    match run(cli) {
        Ok(violation) => {
            if violation {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn parse_flag_rational(s: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::input(format!("{flag}: {e}")))
}

fn parse_point(s: &str, flag: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|c| parse_flag_rational(c.trim(), flag))
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|p| parse_point(p, "--grid")).collect()
}

fn load_inputs(
    paths: &[String],
    policy: NumberPolicy,
    max_dim: Option<usize>,
) -> Result<(Vec<Loaded>, Vec<InputDigest>), CliError> {
    let mut loaded = Vec::with_capacity(paths.len());
    let mut digests = Vec::with_capacity(paths.len());
    for path in paths {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("{path}: {e}")))?;
        let problem = parse_problem(&bytes, policy).map_err(|e| e.in_file(path))?;
        if let Some(cap) = max_dim {
            let dim = problem.payload.max_dim();
            if dim > cap {
                return Err(CliError::input(format!(
                    "{path}: dimension cap exceeded: --max-dim is {cap}, input has dimension {dim}"
                )));
            }
        }
        digests.push(InputDigest {
            path: path.clone(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        loaded.push(Loaded { path: path.clone(), problem });
    }
    Ok((loaded, digests))
}

/// Returns whether the outcome was a hypothesis violation (exit 2).
fn run(cli: Cli) -> Result<bool, CliError> {
    let policy = NumberPolicy { allow_float: cli.mode == Mode::Float };
    let mode_label: Value = match cli.mode {
        Mode::Exact => {
            if cli.tol.is_some() {
                return Err(CliError::input(
                    "--tol applies to float mode only (add --mode float)".to_string(),
                ));
            }
            serde_json::json!({ "kind": "exact" })
        }
        Mode::Float => {
            let tol = match &cli.tol {
                Some(s) => parse_flag_rational(s, "--tol")?,
                None => Rational::new(1.into(), 1_000_000_000.into()),
            };
            if tol <= Rational::from_integer(0.into()) {
                return Err(CliError::input("--tol must be positive".to_string()));
            }
            serde_json::json!({
                "kind": "float",
                "tol": convexkit::scalar::format_rational(&tol),
            })
        }
    };
    let grid = match &cli.grid {
        Some(s) => parse_grid(s)?,
        None => Vec::new(),
    };
    let (files, digests) = load_inputs(cli.command.files(), policy, cli.max_dim)?;

    let started = Instant::now();
    let outcome: Outcome = match &cli.command {
        Command::Conjugate { .. } => commands::cmd_conjugate(&files, &grid)?,
        Command::Envelope { .. } => commands::cmd_envelope(&files, &grid)?,
        Command::Hsupport { .. } => commands::cmd_hsupport(&files)?,
        Command::SupportFn { .. } => commands::cmd_support_fn(&files, &grid)?,
        Command::Polar { .. } => commands::cmd_polar(&files)?,
        Command::Nonoblate { .. } => commands::cmd_nonoblate(&files)?,
        Command::Genpos { .. } => commands::cmd_genpos(&files)?,
        Command::Decompose { .. } => commands::cmd_decompose(&files)?,
        Command::Sandwich { .. } => commands::cmd_sandwich(&files)?,
        Command::Subdiff { .. } => commands::cmd_subdiff(&files)?,
        Command::Cop { .. } => commands::cmd_cop(&files)?,
        Command::Compose { .. } => commands::cmd_compose(&files)?,
        Command::Epsdiff { at, eps, tests, .. } => {
            let at = parse_point(at, "--at")?;
            let eps = parse_flag_rational(eps, "--eps")?;
            let tests = tests
                .iter()
                .map(|t| parse_point(t, "--test"))
                .collect::<Result<Vec<_>, _>>()?;
            commands::cmd_epsdiff(&files, &at, &eps, &tests)?
        }
        Command::Dsubdiff { at, .. } => {
            let at = parse_point(at, "--at")?;
            commands::cmd_dsubdiff(&files, &at)?
        }
        Command::Convolve { .. } => commands::cmd_convolve(&files, &grid)?,
        Command::Chainrule { at, .. } => {
            let at = parse_point(at, "--at")?;
            commands::cmd_chainrule(&files, &at)?
        }
        Command::Check { suite, cap } => commands::cmd_check(suite, cli.seed, *cap)?,
    };
    let elapsed = started.elapsed();

    // Human-readable table on stdout; timing never enters the JSON report.
    let mut text = format!("operation      {}\n", cli.command.name());
    for l in &files {
        match l.problem.metadata.get("label").and_then(Value::as_str) {
            Some(label) => text.push_str(&format!("input          {}  ({label})\n", l.path)),
            None => text.push_str(&format!("input          {}\n", l.path)),
        }
    }
    for line in &outcome.table {
        text.push_str(line);
        text.push('\n');
    }
    if outcome.certificate.is_some() {
        text.push_str("status         VIOLATION (certificate in report, exit code 2)\n");
    } else {
        text.push_str("status         ok\n");
    }
    text.push_str(&format!("time           {:.1} ms\n", elapsed.as_secs_f64() * 1e3));
    // A consumer that stopped reading (e.g. `| head`) must not crash the run.
    {
        use std::io::Write;
        let _ = std::io::stdout().write_all(text.as_bytes());
    }

    let rec = record(cli.command.name(), &mode_label, cli.seed, &digests, &outcome);
    if let Some(path) = &cli.json {
        write_json(path, &rec)?;
    }
    if let Some(path) = &cli.csv {
        match &outcome.plot {
            Some(plot) => write_csv(path, plot)?,
            None => {
                return Err(CliError::input(format!(
                    "--csv: {} does not produce a function-valued result",
                    cli.command.name()
                )))
            }
        }
    }
    Ok(outcome.certificate.is_some())
}
