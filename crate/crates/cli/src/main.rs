use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use suther_lax_cli::report::{EXIT_ABORT, EXIT_CONFIG};
use suther_lax_cli::{execute, render, Cli, RunConfig};

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("SUTHER_LAX_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(format!(
                "SUTHER_LAX_THREADS must be a positive integer, got {v:?}"
            )),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match thread_cap() {
        Ok(Some(k)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
            {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ABORT as u8);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }

    let outcome = execute(&cfg);
    let rendered = match render(&cfg, &outcome) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ABORT as u8);
        }
    };
    let written = match &cfg.out {
        Some(path) => fs::write(path, &rendered.primary),
        None => std::io::stdout().write_all(rendered.primary.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_ABORT as u8);
    }
    if let Some(s) = rendered.secondary {
        eprint!("{s}");
    }
    ExitCode::from(outcome.exit as u8)
}
