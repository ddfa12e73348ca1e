use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use workbench_cli::error::CliError;
use workbench_cli::run::DEFAULT_SAMPLES;
use workbench_cli::{run_text, RunOptions};
use workbench_core::axioms::DEFAULT_WITNESS_DEPTH;

/// Exit code for bad usage and for documents that cannot be read, parsed
/// or resolved; 0 to 2 are verdicts.
const EXIT_DOCUMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "workbench", version, about = "Check contact algebras, their duals and morphisms")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command of a JSON document.
    Run {
        file: PathBuf,
        #[arg(long, env = "WORKBENCH_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_WITNESS_DEPTH)]
        depth: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the output of `emit-dot` commands here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Record per-command wall time in the report.
        #[arg(long)]
        timings: bool,
    },
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_DOCUMENT } else { 0 });
        }
    };
    let Cmd::Run { file, seed, samples, depth, report, dot, timings } = cli.command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(source) => {
            eprintln!("error: {}", CliError::Io { path: file, source });
            return ExitCode::from(EXIT_DOCUMENT);
        }
    };
    let opts = RunOptions { seed, samples, depth, timings };
    let out = match run_text(&text, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(EXIT_DOCUMENT);
        }
    };
    let json = out.report.to_json();
    let written = match &report {
        Some(p) => write(p, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    let written = written.and_then(|()| match &dot {
        Some(p) => write(p, &out.dots.concat()),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_DOCUMENT);
    }
    for c in &out.report.commands {
        match &c.error {
            Some(e) => eprintln!("[{}] {}: error: {e}", c.index, c.command),
            None => eprintln!("[{}] {}: {}", c.index, c.command, c.outcome),
        }
    }
    eprintln!("overall: {}", out.report.outcome);
    ExitCode::from(out.report.exit_code as u8)
}
