//! `hartley`: transform checks, gate-count tables, banknote demos and
//! serial-recovery experiments.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use commands::Failure;

pub const SCHEMA_VERSION: &str = "hartley-cli/1";

const EXIT_FAILURE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_AMBIGUOUS: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    TransformCheck,
    GateBench,
    MoneyDemo,
    WalkRecover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Simulate quantum Hartley transforms, Hartley banknotes and walk-based
/// serial recovery. The simulation budget is capped by the
/// HARTLEY_MAX_QUBITS environment variable (default 24).
#[derive(Parser, Debug)]
#[command(name = "hartley", version)]
struct Cli {
    #[arg(long, value_enum)]
    command: Command,
    /// log2 of the group order (transform size or largest bench size).
    #[arg(long = "n")]
    log_order: Option<usize>,
    /// Group order; must be a power of two.
    #[arg(long = "N")]
    order: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Phase-estimation precision bits for walk-recover.
    #[arg(long, default_value_t = 9)]
    bits: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Serialize)]
struct ConfigRecord {
    n: usize,
    #[serde(rename = "N")]
    order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<usize>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    command: Command,
    config: ConfigRecord,
    result: T,
}

impl Cli {
    fn default_log_order(&self) -> usize {
        match self.command {
            Command::TransformCheck => 3,
            Command::GateBench => commands::GATE_BENCH_MAX_N,
            Command::MoneyDemo | Command::WalkRecover => 6,
        }
    }

    /// Resolves `--n` / `--N` into `(n, N)`.
    fn size(&self) -> Result<(usize, usize), Failure> {
        let from_order = match self.order {
            Some(order) if order < 2 || !order.is_power_of_two() => {
                return Err(Failure::Precondition(format!(
                    "N = {order} is not a power of two of at least 2"
                )))
            }
            Some(order) => Some(order.trailing_zeros() as usize),
            None => None,
        };
        let n = match (self.log_order, from_order) {
            (Some(a), Some(b)) if a != b => {
                return Err(Failure::Precondition(format!(
                    "--n {a} disagrees with --N {}",
                    1usize << b
                )))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => self.default_log_order(),
        };
        if n == 0 || n >= usize::BITS as usize - 1 {
            return Err(Failure::Precondition(format!("n = {n} out of range")));
        }
        Ok((n, 1 << n))
    }
}

fn json_bytes<T: Serialize>(
    cli: &Cli,
    config: ConfigRecord,
    result: T,
) -> Result<Vec<u8>, Failure> {
    let envelope = Envelope {
        schema: SCHEMA_VERSION,
        command: cli.command,
        config,
        result,
    };
    let mut text = serde_json::to_vec_pretty(&envelope).map_err(|e| Failure::Io(e.to_string()))?;
    text.push(b'\n');
    Ok(text)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

/// Runs the command; returns the output bytes and whether the run's own
/// success condition held.
fn run(cli: &Cli) -> Result<(Vec<u8>, bool), Failure> {
    let (n, order) = cli.size()?;
    let config = |seed: bool, bits: bool| ConfigRecord {
        n,
        order,
        seed: seed.then_some(cli.seed),
        bits: bits.then_some(cli.bits),
    };
    let table_only = |what: &str| {
        Failure::Precondition(format!(
            "csv output is only available for table commands, not {what}"
        ))
    };
    match cli.command {
        Command::TransformCheck => {
            let report = commands::transform_check(n)?;
            let ok = report.passed;
            let bytes = match cli.format {
                Format::Json => json_bytes(cli, config(false, false), report)?,
                Format::Csv => csv_bytes(&report.rows)?,
            };
            Ok((bytes, ok))
        }
        Command::GateBench => {
            let report = commands::gate_bench(n)?;
            let bytes = match cli.format {
                Format::Json => json_bytes(cli, config(false, false), report)?,
                Format::Csv => csv_bytes(&report.rows)?,
            };
            Ok((bytes, true))
        }
        Command::MoneyDemo => {
            if cli.format == Format::Csv {
                return Err(table_only("money-demo"));
            }
            let t = commands::money_demo(order, cli.seed)?;
            Ok((json_bytes(cli, config(true, false), t)?, true))
        }
        Command::WalkRecover => {
            if cli.format == Format::Csv {
                return Err(table_only("walk-recover"));
            }
            let report = commands::walk_recover(order, cli.bits, cli.seed)?;
            let ok = report.success;
            Ok((json_bytes(cli, config(true, true), report)?, ok))
        }
    }
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|(bytes, ok)| emit(&cli, &bytes).map(|_| ok));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            let code = if cli.command == Command::WalkRecover {
                eprintln!("error: recovered serial differs from the generated one");
                EXIT_MISMATCH
            } else {
                eprintln!("error: transform check exceeded tolerance");
                EXIT_FAILURE
            };
            ExitCode::from(code)
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Precondition(m) => (EXIT_PRECONDITION, m),
                Failure::Budget(m) => (EXIT_BUDGET, m),
                Failure::Ambiguous(m) => (EXIT_AMBIGUOUS, m),
                Failure::Io(m) => (EXIT_FAILURE, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
