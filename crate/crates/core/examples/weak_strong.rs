//! Relative energy between ε-solutions and the exact constant Euler state.
//!
//!     cargo run --release --example weak_strong

use dmvlab::experiments::emit::weak_strong_summary;
use dmvlab::experiments::{weak_strong_experiment, ExperimentConfig, RunOptions};

const CONFIG: &str = r#"
[model]
variant = "monatomic_degenerate"

[solver]
kind = "nsf"
n = 16
t_end = 0.1
snapshot_intervals = 4

[sweep]
epsilons = [0.1, 0.05, 0.025, 0.0125]
theta_bar = 1.0

[initial]
profile = "constant"
rho = 1.0
u = 0.3
theta = 1.0
"#;

pub fn run() -> dmvlab::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let report = weak_strong_experiment(&cfg, &RunOptions::default())?;
    print!("{}", weak_strong_summary(&report));
    println!("strictly decreasing: {}", report.strictly_decreasing());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
