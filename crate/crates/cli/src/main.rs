use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use krein_complete::{cmd_complete, cmd_extend, cmd_inertia, cmd_verify, render, CmdOutput, CliError, Options, OutputFormat, VerifyArgs};

/// Index-preserving completions of block operators and self-adjoint
/// extensions of Krein and Pontryagin space contractions.
#[derive(Debug, Parser)]
#[command(name = "krein-complete", version)]
struct Cli {
    /// Relative threshold below which eigenvalues count as zero.
    #[arg(long, global = true, value_name = "REL")]
    tol_zero: Option<f64>,

    /// Relative bound on reported residuals.
    #[arg(long, global = true, value_name = "REL")]
    tol_residual: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inertia of a symmetric matrix, or negative squares of [J A ·, ·].
    Inertia { file: PathBuf },

    /// Solve a completion problem and optionally sample completions.
    Complete {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, env = "KREIN_COMPLETE_SEED", default_value_t = 0)]
        seed: u64,
    },

    /// Compute the extremal extensions and optionally sample between them.
    Extend {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, env = "KREIN_COMPLETE_SEED", default_value_t = 0)]
        seed: u64,
    },

    /// Run randomized property suites.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        dim_max: usize,
        #[arg(long, env = "KREIN_COMPLETE_SEED", default_value_t = 0)]
        seed: u64,
        /// Replay a single trial.
        #[arg(long)]
        trial: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<CmdOutput, CliError> {
    let opts = Options {
        tol_zero: cli.tol_zero,
        tol_residual: cli.tol_residual,
    };
    match &cli.command {
        Command::Inertia { file } => cmd_inertia(file, &opts),
        Command::Complete { file, sample, seed } => cmd_complete(file, *sample, *seed, &opts),
        Command::Extend { file, sample, seed } => cmd_extend(file, *sample, *seed, &opts),
        Command::Verify { suite, trials, dim_max, seed, trial } => cmd_verify(
            &VerifyArgs {
                suite: suite.clone(),
                trials: *trials,
                dim_max: *dim_max,
                seed: *seed,
                trial: *trial,
            },
            &opts,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(render(&out.report, cli.output).as_bytes());
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
