mod args;
mod commands;
mod error;
mod format;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::Result;

fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.command.common().resolve()?;
    if cli.command.common().dump_config {
        return Ok(format::emit(None, &format::to_json(&cfg)?)?);
    }
    let text = match &cli.command {
        Command::EntropySweep { k_range, .. } => commands::entropy_sweep(&cfg, k_range)?,
        Command::Timeline { slots, .. } => commands::timeline_cmd(&cfg, *slots)?,
        Command::Cdf {
            radii, alphas, w_grid, ..
        } => commands::cdf(&cfg, radii, alphas, w_grid)?,
        Command::Optimize {
            sweep, values, k_max, ..
        } => commands::optimize(&cfg, sweep, values, *k_max)?,
        Command::Simulate { runs, slots, .. } => commands::simulate(&cfg, *runs, *slots)?,
    };
    format::emit(cfg.output.path.as_deref(), &text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
