//! Evaluate both gas models and run the thermodynamic audits.
//!
//!     cargo run --example equation_of_state

use dmvlab::experiments::thermo_audit;
use dmvlab::thermodynamics::{GasModel, PrimitiveState};

pub fn run() -> dmvlab::Result<()> {
    let ideal = GasModel::ideal_gas(1.5)?;
    let degenerate = GasModel::monatomic_degenerate(1.0, 1e-10)?;
    for (name, model) in [("ideal", &ideal), ("degenerate", &degenerate)] {
        println!("{name} gas, γ = {:.4}", model.gamma());
        for (rho, theta) in [(0.1, 1.0), (1.0, 1.0), (10.0, 0.5)] {
            let s = PrimitiveState::new(rho, theta, 0.0);
            println!(
                "  ρ = {rho:<5} θ = {theta:<4} p = {:.6}  e = {:.6}  s = {:?}",
                model.pressure(&s)?,
                model.internal_energy(&s)?,
                model.specific_entropy(&s)?
            );
        }
        let audit = thermo_audit(model)?;
        println!(
            "  audit: gibbs {:.2e}, concavity min {:.2e}, hessian max eig {:.2e} -> {}",
            audit.gibbs_max,
            audit.concavity_min,
            audit.hessian_max_eigenvalue,
            if audit.passed() { "ok" } else { "FAILED" }
        );
    }
    // degenerate structure function: P(q)/q^{5/3} approaches p̄
    for q in [0.1, 1.0, 10.0, 100.0] {
        println!("  P({q})/q^(5/3) = {:.10}", degenerate.structure_p(q)? / q.powf(5.0 / 3.0));
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
