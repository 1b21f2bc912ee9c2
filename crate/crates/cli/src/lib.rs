//! Library side of the `noonlith` command-line tool: argument grammar,
//! file output, the command implementations, and the validation suite.
//! The binary in `main.rs` is a thin dispatcher over these.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod units;
pub mod validate;

use error::CliError;

/// Cap the worker pool from the NOONLITH_THREADS environment variable.
/// Call once at startup; later calls are ignored.
pub fn init_thread_cap() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("NOONLITH_THREADS") {
        let threads: usize = raw
            .parse()
            .map_err(|_| CliError::Usage(format!("NOONLITH_THREADS='{raw}' is not a number")))?;
        if threads == 0 {
            return Err(CliError::Usage(
                "NOONLITH_THREADS must be at least 1".into(),
            ));
        }
        // Ignore the error if a pool already exists (tests, repeated init).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

/// Dispatch a parsed command line.
pub fn run(cli: &args::Cli, command_line: String) -> Result<(), CliError> {
    match &cli.command {
        args::Command::Pattern(args) => commands::pattern::run(args, command_line),
        args::Command::Gaussian(args) => commands::gaussian::run(args, command_line),
        args::Command::Expose(args) => commands::expose::run(args, command_line),
        args::Command::Validate(args) => commands::validate_cmd(args),
    }
}
