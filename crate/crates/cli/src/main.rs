use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cylproj_cli::{parse_model, run, Command, Format};

/// Exact measures of ordinary and strong projections.
#[derive(Debug, Parser)]
#[command(name = "cylproj", version)]
struct Cli {
    /// Model file with `set`, `dset`, `base` and `profile` declarations.
    #[arg(long, short, global = true)]
    model: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Exit with status 1 when a verdict fails.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("cylproj: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = cli.model else {
        return usage_error("no model file given (use --model FILE)");
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let model = match parse_model(&text) {
        Ok(m) => m,
        Err(e) => return usage_error(format!("{}:{e}", path.display())),
    };
    let max_cells = match std::env::var("CYLPROJ_MAX_CELLS") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(n) => Some(n),
            Err(_) => return usage_error(format!("CYLPROJ_MAX_CELLS must be a count, got `{v}`")),
        },
        Err(_) => None,
    };
    match run(&model, &cli.command, cli.format, max_cells) {
        Ok(out) => {
            print!("{}", out.output);
            if cli.strict && out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => usage_error(e),
    }
}
