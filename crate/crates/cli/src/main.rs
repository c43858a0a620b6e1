//! `soiltherm` command-line entry point.

mod cli;
mod commands;
mod exit;
mod manifest;
mod output;

use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = cli::Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            std::process::exit(exit::CONFIG);
        }
    }
    let result = match &cli.command {
        cli::Command::Simulate(a) => commands::simulate::run(&cli, a),
        cli::Command::Ingest(a) => commands::ingest::run(&cli, a),
        cli::Command::Estimate(a) => commands::estimate::run(&cli, a),
        cli::Command::Report => commands::report::run(&cli),
        cli::Command::Synthesize(a) => commands::synthesize::run(&cli, a),
    };
    match result {
        Ok(()) => std::process::exit(exit::OK),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.code);
        }
    }
}
