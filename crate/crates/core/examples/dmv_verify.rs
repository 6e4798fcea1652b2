//! Check the measure-valued clauses on a Dirac field and on a real family.
//!
//!     cargo run --release --example dmv_verify

use dmvlab::dmv_verifier::{summary_table, verify, TestFunctionBasis, VerifierConfig};
use dmvlab::experiments::sweep::RunOptions;
use dmvlab::experiments::{run_sweep, ExperimentConfig};
use dmvlab::field::SolverKind;
use dmvlab::thermodynamics::GasModel;
use dmvlab::young_measure::{measure_defect, YoungMeasureField};

const CONFIG: &str = r#"
[model]
variant = "ideal_gas"
c_v = 1.5

[solver]
kind = "brenner"
n = 32
t_end = 0.1
snapshot_intervals = 8

[sweep]
epsilons = [0.1, 0.05, 0.025]

[initial]
profile = "perturbed"
rho = 1.0
u = 0.0
theta = 1.0
amplitude = 0.1
mode = 1
"#;

pub fn run() -> dmvlab::Result<()> {
    let basis = TestFunctionBasis::new(2, 0.1);
    println!("{} signed and {} nonnegative test functions", basis.members().len(), basis.nonnegative().len());

    // a single constant state solves every clause
    let model = GasModel::ideal_gas(1.5)?;
    let times = vec![0.0, 0.05, 0.1];
    let atoms = vec![vec![vec![[1.0, 0.5, 2.0]]; 16]; 3];
    let dirac = YoungMeasureField::from_atoms(SolverKind::Nsf, vec![0.0], times, atoms)?;
    let report = verify(&dirac, &measure_defect(&dirac), &model, &VerifierConfig::default())?;
    print!("{}", summary_table(&report));

    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let outcome = run_sweep(&cfg, &RunOptions::default())?;
    if let Some(report) = &outcome.report {
        print!("{}", summary_table(report));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
