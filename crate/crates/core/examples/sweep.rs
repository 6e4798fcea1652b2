//! Run a configured ε-sweep and write every artifact.
//!
//!     cargo run --release --example sweep -- configs/smooth_nsf.toml out/example

use std::path::PathBuf;

use dmvlab::experiments::{emit_sweep, run_sweep, ExperimentConfig, RunOptions};

const DEFAULT_CONFIG: &str = r#"
[model]
variant = "monatomic_degenerate"

[solver]
kind = "nsf"
n = 32
t_end = 0.05
snapshot_intervals = 5

[sweep]
epsilons = [0.1, 0.05, 0.025]
theta_bar = 0.9

[initial]
profile = "perturbed"
rho = 1.0
u = 0.0
theta = 1.0
amplitude = 0.05
mode = 2
"#;

pub fn run_with(config: Option<PathBuf>, out: PathBuf) -> dmvlab::Result<()> {
    let cfg = match config {
        Some(path) => ExperimentConfig::load(&path)?,
        None => ExperimentConfig::from_toml_str(DEFAULT_CONFIG)?,
    };
    let outcome = run_sweep(&cfg, &RunOptions::default())?;
    for r in &outcome.runs {
        println!("ε = {:<8} {} steps, energy balance {:.2e}", r.epsilon, r.steps, r.energy_balance);
    }
    for path in emit_sweep(&outcome, &cfg.output, &out)? {
        println!("wrote {}", path.display());
    }
    println!("ladder spread: {:?}", outcome.ladder_spread);
    println!("all clauses pass: {}", outcome.passed());
    Ok(())
}

pub fn run() -> dmvlab::Result<()> {
    run_with(None, std::env::temp_dir().join("dmvlab-sweep-example"))
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from);
    let out = args.next().map_or_else(|| PathBuf::from("out/example"), PathBuf::from);
    if let Err(e) = run_with(config, out) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
