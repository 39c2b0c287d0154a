mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(f) = configure_threads(cli.threads) {
        return report(f);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            eprintln!("Run `denomlab --help` for usage.");
            ExitCode::from(2)
        }
        Failure::Runtime(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), Failure> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| Failure::Runtime(format!("thread pool: {e}")))?;
    Ok(())
}
