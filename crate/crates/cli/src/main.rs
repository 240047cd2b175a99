use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use otto_cli::commands::{self, Args};
use otto_cli::{CliError, Config, Status};

fn run(args: Args) -> anyhow::Result<Status> {
    let mut cfg = Config::load(args.config.as_deref())?;
    if let Some(step) = args.step {
        args.command.apply_step(&mut cfg, step)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("building the worker pool")?;
    let status = pool
        .install(|| commands::run(args.command, &cfg, &args.out))
        .with_context(|| format!("otto {}", args.command.name()))?;
    Ok(status)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(args) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
