//! Command-line pipeline: embed, inject, split, train, score, eval and
//! baseline, each reading and writing plain files under `--out-dir`.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod settings;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<()> {
    commands::execute(&cli.shared, &cli.command)
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
