use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use ltlf_muc_cli::args::Cli;
use ltlf_muc_cli::{run, Exit, EXIT_BUDGET, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Exit>().map_or(EXIT_BUDGET, |x| x.code);
            ExitCode::from(code)
        }
    }
}
