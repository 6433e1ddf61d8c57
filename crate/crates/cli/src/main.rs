mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    let global = &cli.global;
    let mut notes = Vec::new();
    let outcome = match &cli.command {
        Command::ShuffleTest(a) => commands::shuffle(a, global, argv)?,
        Command::Bootstrap(a) => commands::boot(a, global, argv)?,
        Command::Clip(a) => commands::clip(a, argv, &mut notes)?,
        Command::Bayes(a) => commands::bayes(a, argv)?,
        Command::Montecarlo(a) => commands::montecarlo(a, global, argv)?,
        Command::Poll(a) => commands::poll(a, global, argv)?,
        Command::Fixtures(a) => commands::list_fixtures(a)?,
    };
    for note in &notes {
        eprintln!("{note}");
    }
    let text = match outcome {
        Outcome::Raw(text) => text,
        Outcome::Report(report) => {
            let mut elsewhere = false;
            if let Some(path) = &global.out {
                match report.histogram_csv() {
                    Some(csv) => {
                        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
                        elsewhere = true;
                    }
                    None => eprintln!("note: this command has no histogram; --out ignored"),
                }
            }
            report.render(global.format, elsewhere)
        }
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
