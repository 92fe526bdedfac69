use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqc::format::{self, Format, FormatError};
use dqc::report::{self, checked_spec};
use dqc_core::bounds::BoundOptions;
use dqc_core::builder::data_state;
use dqc_core::partition::communication_complexity;
use dqc_core::DickeSpec;

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_TOO_LARGE: u8 = 3;

/// Synthesize, verify and bound distributed Dicke-state circuits.
#[derive(Parser)]
#[command(name = "dqc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Number of data qubits.
    #[arg(long)]
    n: usize,
    /// Hamming weight.
    #[arg(long)]
    k: usize,
    /// Number of QPUs.
    #[arg(long, default_value_t = 2)]
    p: usize,
    /// Accept n not divisible by p.
    #[arg(long)]
    uneven: bool,
}

impl SpecArgs {
    fn spec(&self) -> dqc_core::Result<DickeSpec> {
        checked_spec(self.n, self.k, self.p, self.uneven)
    }
}

#[derive(Args)]
struct SamplingArgs {
    /// Seed for the shuffled partitions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shuffled partitions tried beyond the contiguous one.
    #[arg(long, default_value_t = 3)]
    samples: usize,
}

impl SamplingArgs {
    fn options(&self) -> BoundOptions {
        BoundOptions { samples: self.samples, seed: self.seed }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Markdown,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build the circuit and write it to a file.
    Synth {
        #[command(flatten)]
        spec: SpecArgs,
        /// `qasm` or `json`.
        #[arg(long, default_value = "qasm")]
        format: Format,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the circuit and print a JSON report.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Also write the data-register state as JSON.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Communication lower bound next to the construction's count.
    Bound {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Metrics over a grid of `n:k:p` cells.
    Table {
        /// Comma-separated `n:k:p` cells.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
        /// Accept n not divisible by p.
        #[arg(long)]
        uneven: bool,
    },
    /// Recompute size, depth and communication of a circuit file.
    Inspect {
        input: PathBuf,
        /// Inferred from the extension when omitted.
        #[arg(long)]
        format: Option<Format>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] dqc_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: fidelity {fidelity:.12}, leakage {leakage:e}")]
    VerifyFailed { fidelity: f64, leakage: f64 },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(dqc_core::Error::TooLarge { .. }) => EXIT_TOO_LARGE,
            CliError::VerifyFailed { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_INVALID,
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn synth(spec: &SpecArgs, fmt: Format, out: Option<PathBuf>) -> Result<(), CliError> {
    let spec = spec.spec()?;
    let s = report::synthesize(&spec)?;
    let text = format::export(&s.decomposed, Some(&s.build.partition), fmt);
    let m = &s.metrics;
    let summary = format!(
        "size {} depth {} comm {} qubits {} qubits/QPU {}",
        m.size, m.depth, m.comm_count, m.qubits, m.qubits_per_qpu
    );
    let path = out.unwrap_or_else(|| format!("dicke_n{}_k{}_p{}.{}", spec.n, spec.k, spec.p, fmt.extension()).into());
    if path.as_os_str() == "-" {
        print!("{text}");
        eprintln!("{summary}");
    } else {
        write_file(&path, &text)?;
        println!("{summary}");
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn verify(spec: &SpecArgs, sampling: &SamplingArgs, state_out: Option<PathBuf>) -> Result<(), CliError> {
    let spec = spec.spec()?;
    let r = report::run_report(&spec, sampling.options())?;
    println!("{}", serde_json::to_string_pretty(&r).expect("reports always serialize"));
    if let Some(path) = state_out {
        let state = data_state(&report::synthesize(&spec)?.build)?;
        write_file(&path, &format::state_to_json(&state))?;
    }
    if r.passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed { fidelity: r.fidelity, leakage: r.ancilla_leakage })
    }
}

fn bound(spec: &SpecArgs, sampling: &SamplingArgs) -> Result<(), CliError> {
    let row = report::bound_row(&spec.spec()?, sampling.options())?;
    println!("{}", serde_json::to_string_pretty(&row).expect("rows always serialize"));
    Ok(())
}

fn table(grid: &str, fmt: TableFormat, uneven: bool) -> Result<(), CliError> {
    let cells = report::parse_grid(grid).map_err(CliError::Usage)?;
    let rows = report::table(&cells, uneven);
    match fmt {
        TableFormat::Markdown => print!("{}", report::table_markdown(&rows)),
        TableFormat::Json => println!("{}", report::table_json(&rows)),
    }
    Ok(())
}

fn inspect(input: PathBuf, fmt: Option<Format>) -> Result<(), CliError> {
    let fmt = match fmt {
        Some(f) => f,
        None => {
            let ext = input.extension().and_then(|e| e.to_str()).unwrap_or("");
            ext.parse().map_err(|_| CliError::Usage(format!("cannot infer format of {}", input.display())))?
        }
    };
    let text = fs::read_to_string(&input).map_err(|source| CliError::Io { path: input.clone(), source })?;
    let (circuit, partition) = format::parse(&text, fmt)?;
    let mut line = format!("qubits {} gates {} depth {}", circuit.n_qubits(), circuit.size(None)?, circuit.depth()?);
    if let Some(part) = partition {
        line += &format!(" size {} comm {}", circuit.size(Some(&part))?, communication_complexity(&circuit, &part)?);
    }
    println!("{line}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Synth { spec, format, out } => synth(&spec, format, out),
        Command::Verify { spec, sampling, state_out } => verify(&spec, &sampling, state_out),
        Command::Bound { spec, sampling } => bound(&spec, &sampling),
        Command::Table { grid, format, uneven } => table(&grid, format, uneven),
        Command::Inspect { input, format } => inspect(input, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
