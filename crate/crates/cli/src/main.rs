use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qortho::Tolerance;

mod commands;
mod error;
mod input;
mod report;

use error::CliError;
use report::Report;

/// Orthogonality measures and quasiorthogonality tests for subalgebras of M_n.
///
/// Inputs are file paths, inline JSON, or `-` for stdin.
#[derive(Debug, Parser)]
#[command(name = "qortho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Equality tolerance.
    #[arg(long = "tol-eq", global = true, default_value_t = Tolerance::DEFAULT_EQ)]
    tol_eq: f64,

    /// Decision tolerance for boolean verdicts.
    #[arg(long = "tol-decision", global = true, default_value_t = Tolerance::DEFAULT_DECISION)]
    tol_decision: f64,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Q(A, B) from the block formulas, with structural verdict.
    Q {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Number of sampled maximal commutative subalgebra pairs.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Quasiable test of a doubly stochastic matrix (all partitions if --r/--c are omitted).
    Quasiable {
        #[arg(long)]
        x: String,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
    /// Complex Hadamard test.
    Hadamard {
        #[arg(long)]
        x: String,
    },
    /// Unistochastic test for a 3x3 doubly stochastic matrix.
    Unistochastic3 {
        #[arg(long)]
        x: String,
    },
    /// Separating-vector criterion.
    Separating {
        #[arg(long)]
        a: String,
    },
    /// Q for the pattern algebras of two Latin squares.
    LatinQ {
        #[arg(long = "l1")]
        l1: String,
        #[arg(long = "l2")]
        l2: String,
    },
    /// Mutual unbiasedness, directly and through quasiorthogonality.
    MumCheck {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Unequal ranks: targets Tr(Q_b)/n instead of 1/d.
        #[arg(long)]
        generalized: bool,
    },
    /// Minimal epsilon of an approximate MUM and the bound Q <= (1+eps)^2.
    Amum {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// ||(E_A - D_n) o E_B||, optionally with the bound for a given epsilon.
    Privacy {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Q(A, B) = Tr(T_A T_B) from conditional-expectation superoperators.
    OracleQ {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let tol = Tolerance::new(cli.tol_eq, cli.tol_decision)?;
    let (name, seed, result) = match &cli.command {
        Command::Q { a, b, samples } => ("q", Some(cli.seed), commands::q(a, b, *samples, cli.seed, &tol)?),
        Command::Quasiable { x, r, c } => ("quasiable", None, commands::quasiable(x, r.as_deref(), c.as_deref(), &tol)?),
        Command::Hadamard { x } => ("hadamard", None, commands::hadamard(x, &tol)?),
        Command::Unistochastic3 { x } => ("unistochastic3", None, commands::unistochastic3(x, &tol)?),
        Command::Separating { a } => ("separating", None, commands::separating(a, &tol)?),
        Command::LatinQ { l1, l2 } => ("latin-q", None, commands::latin_q(l1, l2, &tol)?),
        Command::MumCheck { a, b, generalized } => ("mum-check", None, commands::mum_check(a, b, *generalized, &tol)?),
        Command::Amum { a, b } => ("amum", None, commands::amum(a, b, &tol)?),
        Command::Privacy { a, b, epsilon } => ("privacy", None, commands::privacy(a, b, *epsilon, &tol)?),
        Command::OracleQ { a, b } => ("oracle-q", None, commands::oracle_q(a, b, &tol)?),
    };
    Ok(Report::new(name, &tol, seed, result))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => println!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
