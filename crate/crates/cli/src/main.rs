use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dib_cli::{emit, oracle_curves, sweep, verify, CliError, ExperimentConfig, Unit};

/// Distributed information bottleneck sweeps.
#[derive(Debug, Parser)]
#[command(name = "dib", version)]
struct Args {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Output unit; overrides the config.
    #[arg(long, value_enum)]
    unit: Option<Unit>,
    /// Solver seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the upper concave envelope.
    #[arg(long)]
    no_envelope: bool,
    /// Also compute and emit the applicable oracle curves.
    #[arg(long)]
    oracle: bool,
    /// Check the solver invariants on every row; exit with 3 if one fails.
    #[arg(long)]
    verify: bool,
}

fn run(args: &Args) -> Result<bool, CliError> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(unit) = args.unit {
        config.unit = unit;
    }
    if let Some(seed) = args.seed {
        config.solver.seed = Some(seed);
    }
    if args.no_envelope {
        config.envelope = false;
    }

    let sw = sweep(&config)?;
    let oracles = if args.oracle { oracle_curves(&config, &sw.source, &sw.artifact)? } else { Vec::new() };
    for path in emit(&sw.artifact, &oracles, config.unit, &args.out)? {
        println!("wrote {}", path.display());
    }
    let unconverged = sw.artifact.rows.iter().filter(|p| !p.converged).count();
    if unconverged > 0 {
        eprintln!("warning: {unconverged} of {} rows did not converge", sw.artifact.rows.len());
    }

    if !args.verify {
        return Ok(true);
    }
    let report = verify(&sw)?;
    let path = args.out.join("verify.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("verify: {} = {:e} exceeds {:e} at s = {}", c.name, c.value, c.threshold, c.s);
    }
    println!("verify: {} of {} checks passed", report.checks.iter().filter(|c| c.passed).count(), report.checks.len());
    Ok(report.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
