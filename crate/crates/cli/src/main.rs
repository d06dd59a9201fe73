use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dcsim_cli::{emit_report, parse_config, run_experiment, ExperimentSpec, Format, Overrides};
use dcsim_core::PolicyKind;

/// Energy-aware VM consolidation simulator.
#[derive(Debug, Parser)]
#[command(name = "dcsim", version)]
struct Args {
    /// Experiment config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Policy to run (NPA, DVFS, ST, MM, HPG, RC). May repeat.
    #[arg(long = "policy", value_name = "NAME")]
    policies: Vec<PolicyKind>,
    /// Lower utilization threshold in percent.
    #[arg(long, value_name = "PCT")]
    lower: Option<f64>,
    /// Upper utilization threshold in percent.
    #[arg(long, value_name = "PCT")]
    upper: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u32>,
    #[arg(long, value_name = "SECONDS")]
    frame_seconds: Option<f64>,
    #[arg(long)]
    hosts: Option<usize>,
    #[arg(long)]
    vms: Option<usize>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &Args) -> Result<ExperimentSpec, String> {
    let spec = match &args.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ExperimentSpec::reference_default(),
    };
    let overrides = Overrides {
        policies: args.policies.clone(),
        lower: args.lower,
        upper: args.upper,
        seed: args.seed,
        runs: args.runs,
        frame_seconds: args.frame_seconds,
        hosts: args.hosts,
        vms: args.vms,
        output: args.out.clone(),
    };
    overrides.apply(spec).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let spec = match load(&args) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = match run_experiment(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_infeasible() { 2 } else { 1 });
        }
    };
    let bytes = emit_report(&report, args.format);
    match &spec.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, bytes) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            use std::io::Write;
            if std::io::stdout().write_all(&bytes).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}
