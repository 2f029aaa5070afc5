use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use beliefbase_cli::{repl, run_script, Engine, Format, Options, EXIT_ERROR};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beliefbase", version, about = "Dempster-Shafer belief bases over logical languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file.
    Run {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "semantic")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Read statements from standard input, one per line.
    Repl {
        #[arg(long, value_enum, default_value = "semantic")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { path, engine, format } => {
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            };
            let outcome = run_script(&text, Options { engine, format });
            print!("{}", outcome.stdout);
            eprint!("{}", outcome.stderr);
            ExitCode::from(outcome.code as u8)
        }
        Command::Repl { engine, format } => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            match repl(stdin.lock(), io::stdout().lock(), Options { engine, format }, prompt) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_ERROR as u8)
                }
            }
        }
    }
}
