use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use qfact_cli::{run, usage_error, Cli, EXIT_ERROR, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(EXIT_OK);
        }
        Err(e) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", usage_error(&e.to_string()));
            std::process::exit(EXIT_ERROR);
        }
    };
    let outcome = run(&cli);
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.render(cli.global.format));
    std::process::exit(outcome.code);
}
