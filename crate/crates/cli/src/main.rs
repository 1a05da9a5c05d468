mod change;
mod repro;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Semantic(String),
    Audit(String),
    TrainConfig(String),
    SdViolation(String),
    Repro(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Audit(_) => 4,
            CliError::TrainConfig(_) => 5,
            CliError::SdViolation(_) => 6,
            CliError::Repro(_) => 7,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m)
            | CliError::Parse(m)
            | CliError::Semantic(m)
            | CliError::Audit(m)
            | CliError::TrainConfig(m)
            | CliError::SdViolation(m)
            | CliError::Repro(m) => m,
        }
    }
}

pub type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(name = "beliefnet", version, about = "Belief change over propositional worlds and binary networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Revise a belief by an input formula.
    Revise(change::ChangeArgs),
    /// Contract a belief by an input formula.
    Contract(change::ChangeArgs),
    /// Check an operator against the AGM postulates.
    Audit(run::AuditArgs),
    /// Train a binary network and record its belief-set trajectory.
    Train(run::TrainArgs),
    /// Replay a trajectory as revisions followed by contractions.
    Replay(run::ReplayArgs),
    /// Run a pinned reproduction scenario (or `all`).
    Repro(repro::ReproArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Revise(a) => change::run(a, change::Kind::Revise),
        Command::Contract(a) => change::run(a, change::Kind::Contract),
        Command::Audit(a) => run::audit(a),
        Command::Train(a) => run::train(a),
        Command::Replay(a) => run::replay(a),
        Command::Repro(a) => repro::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Pretty JSON on stdout; a closed pipe is not an error.
pub fn print_json<T: serde::Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
