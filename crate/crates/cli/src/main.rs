use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qtangent_cli::{run, Command, Options, RunReport, Scenario, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

/// Verify the quantum tangent bundle constructions on a scenario file.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// hopf-check, partition-check, covering-check, adapted-check,
    /// glue-derivations, forms-check, curvature or all
    command: Command,
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    /// Seed for randomized samples
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// PBW degree bound for hopf-check (overrides the scenario)
    #[arg(long)]
    max_degree: Option<u32>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn summary(report: &RunReport) {
    for c in report.checks.iter().filter(|c| c.status == qtangent_cli::Status::Fail) {
        eprintln!("FAIL {}: {}", c.id, c.witness.as_deref().unwrap_or(""));
    }
    eprintln!("{}: {} checks, {} failed", report.command, report.checks.len(), report.failures());
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return ExitCode::from(code as u8);
        }
    };
    let opts = Options { seed: args.seed, max_degree: args.max_degree };
    let report = Scenario::load(&args.scenario, args.seed).and_then(|s| run(args.command, &s, &opts));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{json}");
        }
    }
    summary(&report);
    ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_FAIL } as u8)
}
