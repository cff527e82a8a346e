mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use config::Config;
use error::{CliError, Status};

fn run(cli: &Cli) -> Result<Status, CliError> {
    let cfg = Config::load(cli.config.as_deref(), cli.command.name())?;
    if let Some(w) = cfg.opt(cli.workers, "workers")? {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let out = cfg.opt(cli.out.clone(), "out")?;
    let ctx = Ctx {
        cfg: &cfg,
        out: out.as_deref(),
    };
    match &cli.command {
        Command::Exponent(a) => commands::exponent(&ctx, a),
        Command::Classify(a) => commands::classify(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Count(a) => commands::count(&ctx, a),
        Command::Volume(a) => commands::volume(&ctx, a),
        Command::Fit(a) => commands::fit(&ctx, a),
        Command::Ratio(a) => commands::ratio(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let status = run(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Status::Usage
    });
    ExitCode::from(status as u8)
}
