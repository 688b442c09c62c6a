mod ed;
mod output;
mod swap;
mod tb;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbent::entanglement::{LogBase, SsrKind};

/// Accessible entanglement between fermionic orbitals under superselection
/// rules.
#[derive(Parser)]
#[command(name = "orbent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement of two sites of the tight-binding chain (one JSON record).
    Tb(tb::TbArgs),
    /// Entanglement versus filling for several separations (CSV).
    TbScan(tb::ScanArgs),
    /// Disentangling distance versus filling (CSV).
    DminScan(tb::DminArgs),
    /// Superselected swap of orbital states onto qubit registers (JSON).
    SwapDemo(swap::SwapArgs),
    /// Exact ground state of an FCIDUMP or Hubbard Hamiltonian and the
    /// entanglement of orbital pairs (JSON).
    Ed(ed::EdArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SsrArg {
    /// Local particle number.
    N,
    /// Local fermion parity.
    P,
}

impl From<SsrArg> for SsrKind {
    fn from(s: SsrArg) -> Self {
        match s {
            SsrArg::N => SsrKind::Number,
            SsrArg::P => SsrKind::Parity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::E => LogBase::E,
            BaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<orbent::Error> for CliError {
    fn from(e: orbent::Error) -> Self {
        match e {
            orbent::Error::NoConvergence(_) => CliError::Numerical(e.to_string()),
            orbent::Error::Io(io) => CliError::Io(io),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// What a command did: whether every numerical result converged.
pub enum Outcome {
    Done,
    Unconverged,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ORBENT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("ORBENT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Tb(a) => tb::cmd_tb(&a),
        Command::TbScan(a) => tb::cmd_tb_scan(&a),
        Command::DminScan(a) => tb::cmd_dmin_scan(&a),
        Command::SwapDemo(a) => swap::cmd_swap_demo(&a),
        Command::Ed(a) => ed::cmd_ed(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unconverged) => {
            eprintln!("error: relative entropy solver did not reach the requested duality gap");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
