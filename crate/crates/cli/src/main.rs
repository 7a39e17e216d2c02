use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use macroreal_cli::{run, Format, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "macroreal", version, about = "Evaluate macrorealism conditions from a JSON run config")]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.csv / report.json and friends.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the scenario seed (or the batch base seed for fine-audit).
    #[arg(long)]
    seed: Option<u64>,
    /// Satisfaction tolerance on margins.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "full")]
    format: Format,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let opts = RunOptions {
        config: args.config,
        out: args.out,
        seed: args.seed,
        tol: args.tol,
        format: args.format,
    };
    match run(&opts) {
        Ok(outcome) => {
            let total = outcome.bundle.all_reports().count();
            let failed = outcome.bundle.all_reports().filter(|r| !r.satisfied).count();
            println!("{total} conditions evaluated, {failed} violated");
            if let Some(e) = &outcome.bundle.extremum {
                println!("extremum {:.12} at {:?} ({})", e.value, e.coords, e.condition);
            }
            if let Some(a) = &outcome.bundle.audit {
                println!(
                    "audit: {} scenarios, {} feasible, {} robust mismatches",
                    a.count, a.feasible, a.robust_mismatches
                );
            }
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
