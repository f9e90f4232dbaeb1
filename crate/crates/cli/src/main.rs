//! `edgepath` command-line tool.
//!
//! Subcommands generate synthetic graphs, bundle them, evaluate drawings
//! and render them. Exit status is 0 on success, 1 for input errors
//! (bad flags, unreadable or mismatched files, invalid parameters) and 2
//! when a bundling result fails its own invariant checks.

mod args;
mod commands;
mod config;
mod error;
mod timing;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use crate::args::{Cli, Command};
use crate::error::CliError;

fn override_self(cmd: clap::Command) -> clap::Command {
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    names
        .into_iter()
        .fold(cmd.args_override_self(true), |c, n| c.mut_subcommand(n, override_self))
}

fn parse(argv: Vec<String>) -> Result<Cli, clap::Error> {
    let matches = override_self(Cli::command()).try_get_matches_from(argv)?;
    Cli::from_arg_matches(&matches)
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Generate { kind } => commands::generate(kind),
        Command::Bundle(a) => commands::bundle(a),
        Command::Straight(a) => commands::straight(a),
        Command::Import(a) => commands::import(a),
        Command::Metrics(a) => commands::metrics(a),
        Command::Render(a) => commands::render(a),
        Command::Compare(a) => commands::compare(a),
    }
}

fn with_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config::find_config(&argv) else {
        return Ok(argv);
    };
    let path = std::path::PathBuf::from(path);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::File(path.clone(), e))?;
    let extra = config::parse_config(&text, &path)?;
    Ok(config::splice(&argv, extra))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let argv = match with_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match parse(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json {
                println!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
