use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sseq_engine::{run, Command};

/// Spectral-sequence engine.
#[derive(Parser, Debug)]
#[command(name = "engine", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for reports and the cache.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli.command, &cli.config, &cli.out) {
        Ok(o) => {
            print!("{}", o.report.to_text());
            eprintln!("wrote {} and {}{}", o.json_path.display(), o.text_path.display(), if o.from_cache { " (cached)" } else { "" });
            ExitCode::from(o.report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
