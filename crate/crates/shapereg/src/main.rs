use std::process::ExitCode;

use clap::Parser;
use shapereg::cli::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Fit(args) => match shapereg::fit(&args.to_run_config()) {
            Ok(outcome) => {
                println!("{}", outcome.summary_path.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
