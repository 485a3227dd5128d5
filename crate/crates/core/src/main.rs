use std::io::Write;

use clap::Parser;
use condlogic::cli::{run, Cli, EXIT_ERROR};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the I/O and parse exit code
            std::process::exit(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let outcome = run(cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code);
}
