use clap::Parser;

use noonlith_cli::args::Cli;

fn main() {
    // Exit codes: 0 ok, 1 usage, 2 i/o, 3 validation failure,
    // 4 numerical non-convergence.
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = noonlith_cli::init_thread_cap() {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
    let command_line = argv.join(" ");
    match noonlith_cli::run(&cli, command_line) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
