//! Command-line surface and file formats for the `gta` tool.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use cli::{Cli, Command, Layer};
pub use config::ScenarioConfig;
pub use error::CliError;

/// Parse `args` (including the program name), run the command and return
/// the process exit code: 0 success, 1 usage, 2 data/validation, 3 I/O.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };

    let mut ctx = commands::Context { seed: cli.seed, json: cli.json, quiet: cli.quiet, out, err };
    let result = match &cli.command {
        Command::Pl(a) => commands::cmd_pl(&mut ctx, a),
        Command::Fit(a) => commands::cmd_fit(&mut ctx, a),
        Command::Map(a) => commands::cmd_map(&mut ctx, a),
        Command::Tables(a) => commands::cmd_tables(&mut ctx, a),
        Command::Synth(a) => commands::cmd_synth(&mut ctx, a),
        Command::Config(a) => commands::cmd_config(&mut ctx, a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
