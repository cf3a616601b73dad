use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use schottky_scale_cli::{run, RunConfig, USAGE_EXIT};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version requests print to stdout and succeed
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_EXIT as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&config, &mut out) {
        Ok(status) => {
            let _ = out.flush();
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT as u8)
        }
    }
}
