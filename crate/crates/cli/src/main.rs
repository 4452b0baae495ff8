use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use entrate::{init_logging, run, Cli};

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let status = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("entrate: {e}");
            e.exit_code()
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(status as u8)
}
