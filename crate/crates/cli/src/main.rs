use std::process::ExitCode;

use clap::Parser;
use hermsynth_cli::args::Command;
use hermsynth_cli::generate::cmd_generate;
use hermsynth_cli::verify::cmd_verify;
use hermsynth_cli::{Cli, EXIT_FAILURE};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args).map(|msg| {
            eprintln!("{msg}");
            ExitCode::SUCCESS
        }),
        Command::Verify(args) => cmd_verify(args).map(|report| {
            print!("{}", report.render(args.report));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("{e}");
        e.exit_code()
    })
}
