use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use lmg_texture_cli::cli::Cli;
use lmg_texture_cli::run::run;
use lmg_texture_cli::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::config(None, first.to_string()).to_line());
            return ExitCode::from(2);
        }
    };
    match cli.into_config().and_then(|config| run(&config)) {
        Ok((csv, json)) => {
            println!("{}", csv.display());
            println!("{}", json.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code())
        }
    }
}
