mod args;
mod commands;
mod error;
mod output;
mod spec;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let common = &cli.common;
    let rendered = match &cli.command {
        Command::Evolve { qubit, random_mixed } => commands::evolve(common, *qubit, *random_mixed)?,
        Command::Surface { c0_steps } => commands::surface(common, *c0_steps)?,
        Command::Critical { c0, c0_steps } => commands::critical(common, c0, *c0_steps)?,
        Command::Optimize {
            lambda1,
            c0,
            samples,
            t,
        } => commands::optimize(common, *lambda1, *c0, *samples, *t)?,
        Command::Dps => commands::dps(common)?,
        Command::Spin { gamma, n_sites } => commands::spin(common, *gamma, *n_sites)?,
    };
    for note in &rendered.notes {
        eprintln!("pairstab: warning: {note}");
    }
    output::emit(common.out.as_deref(), &rendered.text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pairstab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
