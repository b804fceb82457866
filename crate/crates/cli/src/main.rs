use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

mod commands;
mod config;
mod error;

use config::{Family, GraphFormat, NablaMode, VerifyMethod};
use error::CliError;

/// Generators, verifiers and solvers for p-centered colorings.
///
/// Exit codes: 0 success, 1 violation found, 2 input error, 3 budget or
/// limit exhausted. Errors are printed to stderr as one JSON object.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as JSON or DOT.
    Generate(GenerateArgs),
    /// Check a coloring for the plain or split centeredness condition.
    Verify(VerifyArgs),
    /// Compute χ_p exactly under a budget.
    Solve(SolveArgs),
    /// Threshold probability and Janson-bound quantities.
    Bounds(BoundsArgs),
    /// Shallow-minor density with a witness model.
    Nabla(NablaArgs),
    /// Random-graph trials written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sidecar log receiving timing lines (default: `<out>.log` when `--out` is set).
    #[arg(long)]
    log: Option<PathBuf>,
}

fn parse_json(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cols: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<GraphFormat>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// Oracle limits as a JSON object, e.g. '{"materialize": 5000}'.
    #[arg(long, value_parser = parse_json)]
    #[serde(skip_serializing_if = "Option::is_none")]
    limits: Option<Value>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p1: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p2: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<VerifyMethod>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_out: Option<PathBuf>,
    #[arg(long, value_parser = parse_json)]
    #[serde(skip_serializing_if = "Option::is_none")]
    limits: Option<Value>,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    max_nodes: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    max_millis: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct NablaArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<NablaMode>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_json)]
    #[serde(skip_serializing_if = "Option::is_none")]
    limits: Option<Value>,
}

#[derive(Args, Serialize)]
struct ExperimentArgs {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    colorings: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_limit: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    solve_nodes: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

fn flags<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("flag serialization cannot fail")
}

/// What a command produced: the primary output and its exit code.
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub code: u8,
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    use config::load;
    match &cli.command {
        Command::Generate(a) => {
            commands::generate(load(a.common.config.as_deref(), flags(a), true)?)
        }
        Command::Verify(a) => commands::verify(load(a.common.config.as_deref(), flags(a), true)?),
        Command::Solve(a) => commands::solve(load(a.common.config.as_deref(), flags(a), false)?),
        Command::Bounds(a) => commands::bounds(load(a.common.config.as_deref(), flags(a), false)?),
        Command::Nabla(a) => commands::nabla(load(a.common.config.as_deref(), flags(a), true)?),
        Command::Experiment(a) => {
            commands::experiment(load(a.common.config.as_deref(), flags(a), false)?)
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Verify(_) => "verify",
            Command::Solve(_) => "solve",
            Command::Bounds(_) => "bounds",
            Command::Nabla(_) => "nabla",
            Command::Experiment(_) => "experiment",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Generate(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Solve(a) => &a.common,
            Command::Bounds(a) => &a.common,
            Command::Nabla(a) => &a.common,
            Command::Experiment(a) => &a.common,
        }
    }
}

fn emit(outcome: &Outcome) -> Result<(), CliError> {
    match &outcome.out {
        Some(path) => write_file(path, &outcome.text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .map_err(|e| CliError::input("io", format!("stdout: {e}")))
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

fn sidecar(path: &Path, command: &str, code: u8, started: Instant) {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .unwrap_or_default();
    let line = serde_json::json!({
        "unix_time": stamp.as_secs_f64(),
        "command": command,
        "exit_code": code,
        "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    let appended = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .and_then(|mut f| writeln!(f, "{line}"));
    if let Err(e) = appended {
        eprintln!(
            "{}",
            CliError::input("io", format!("log {}: {e}", path.display())).to_json()
        );
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!(
                "{}",
                CliError::input("arguments", e.to_string().trim_end()).to_json()
            );
            return ExitCode::from(error::EXIT_INPUT);
        }
    };
    let started = Instant::now();
    let result = run(&cli).and_then(|o| emit(&o).map(|_| o));
    let (code, out) = match result {
        Ok(o) => (o.code, o.out),
        Err(e) => {
            eprintln!("{}", e.to_json());
            (e.code, None)
        }
    };
    let log = cli.command.common().log.clone().or_else(|| {
        out.map(|p| {
            let mut s = p.into_os_string();
            s.push(".log");
            PathBuf::from(s)
        })
    });
    if let Some(log) = log {
        sidecar(&log, cli.command.name(), code, started);
    }
    ExitCode::from(code)
}
