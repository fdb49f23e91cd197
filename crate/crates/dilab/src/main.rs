use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dilab::cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    if let Some(n) = std::env::var("DILAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let out = run(&cli);
    if out.code == EXIT_USAGE {
        eprint!("{}", out.text);
    } else {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(out.text.as_bytes());
    }
    ExitCode::from(out.code as u8)
}
