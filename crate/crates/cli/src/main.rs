use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use gasfold_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet_files = matches!(cli.command, gasfold_cli::Command::Validate(_));
    match run(&cli) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            if !quiet_files {
                for f in &report.files {
                    println!("wrote {}", f.display());
                }
            }
            match report.failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e @ CliError::EmptyConfig(_)) => {
            eprintln!("error: {e}\n");
            eprintln!("{}", Cli::command().render_long_help());
            ExitCode::from(e.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
