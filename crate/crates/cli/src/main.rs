use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use opdec_cli::{
    cmd_decompose, cmd_direct_sim, cmd_eig, cmd_epr_sim, cmd_expval, cmd_reck, CliError,
    CommandOutput,
};

/// Decompose operators into Hermitian parts, evaluate complex expectation
/// values, simulate their entangled-pair measurement, and factor unitaries
/// into multiport rotation meshes.
#[derive(Parser)]
#[command(name = "opdec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split an operator into Hermitian parts and classify its normality.
    Decompose {
        /// Operator matrix file.
        operator: PathBuf,
        /// Normality tolerance override (default scales with the operator).
        #[arg(long)]
        tol: Option<f64>,
        /// Write the machine report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complex expectation value Tr(rho A) with its Hermitian-part split.
    Expval {
        operator: PathBuf,
        /// Density matrix file.
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the entangled-pair measurement of an arbitrary operator.
    EprSim {
        operator: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-shot record stream here.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jointly measure a normal operator in a common eigenbasis.
    DirectSim {
        operator: PathBuf,
        /// Density matrix file.
        state: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Normality tolerance override.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a unitary into two-level rotations plus output phases.
    Reck {
        unitary: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigendecompose a Hermitian matrix.
    Eig {
        hermitian: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opdec: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (output, out_path, records_path) = match cli.command {
        Command::Decompose { operator, tol, out } => (cmd_decompose(&operator, tol)?, out, None),
        Command::Expval {
            operator,
            state,
            out,
        } => (cmd_expval(&operator, &state)?, out, None),
        Command::EprSim {
            operator,
            shots,
            seed,
            records,
            out,
        } => (
            cmd_epr_sim(&operator, shots, seed, records.is_some())?,
            out,
            records,
        ),
        Command::DirectSim {
            operator,
            state,
            shots,
            seed,
            tol,
            out,
        } => (
            cmd_direct_sim(&operator, &state, shots, seed, tol)?,
            out,
            None,
        ),
        Command::Reck { unitary, out } => (cmd_reck(&unitary)?, out, None),
        Command::Eig { hermitian, out } => (cmd_eig(&hermitian)?, out, None),
    };
    emit(&output, out_path.as_deref(), records_path.as_deref())
}

fn emit(
    output: &CommandOutput,
    out_path: Option<&std::path::Path>,
    records_path: Option<&std::path::Path>,
) -> Result<(), CliError> {
    print!("{}", output.summary);
    if let Some(path) = out_path {
        std::fs::write(path, &output.report)
            .map_err(|e| CliError::Usage(format!("cannot write report {}: {e}", path.display())))?;
    }
    if let (Some(path), Some(records)) = (records_path, &output.records) {
        std::fs::write(path, records).map_err(|e| {
            CliError::Usage(format!("cannot write records {}: {e}", path.display()))
        })?;
    }
    Ok(())
}
