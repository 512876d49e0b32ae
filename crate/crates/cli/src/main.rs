use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use kabelian_cli::{run, Cli, Report};

fn execute(cli: &Cli) -> Result<Report> {
    let go = || run(&cli.command, cli.global.format, cli.global.budget);
    match cli.global.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .context("cannot start worker threads")?
            .install(go),
        None => go(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|report| {
        match &cli.global.out {
            Some(path) => std::fs::write(path, &report.body)
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => std::io::stdout().write_all(report.body.as_bytes())?,
        }
        Ok(report.negative)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
