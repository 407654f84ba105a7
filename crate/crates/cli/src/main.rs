use clap::error::ErrorKind;
use clap::Parser;
use qng_cli::args::Cli;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match qng_cli::run(&cli, &mut std::io::stdout().lock()) {
        Ok(summary) => {
            if summary.failures > 0 {
                eprintln!(
                    "qng: {} of {} rows failed; see the status column",
                    summary.failures, summary.rows
                );
            }
            ExitCode::from(summary.exit_code())
        }
        Err(e) => {
            eprintln!("qng: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
