//! The relative energy in physical and in conservative variables.
//!
//!     cargo run --example relative_energy

use dmvlab::relative_energy::{identity_audit, relative_energy_primitive, sample_state_pairs};
use dmvlab::thermodynamics::{GasModel, PrimitiveState};

pub fn run() -> dmvlab::Result<()> {
    let model = GasModel::monatomic_degenerate(1.0, 1e-10)?;
    let reference = PrimitiveState::new(1.0, 1.0, 0.0);
    for du in [0.0, 0.1, 0.2, 0.4] {
        let s = PrimitiveState::new(1.0, 1.0, du);
        let v = relative_energy_primitive(&model, &s, &reference)?;
        // a pure velocity offset gives ½ρ|δu|²
        println!("δu = {du}: ℰ = {:?}", v.value);
    }
    let rows = identity_audit(&model, &sample_state_pairs(7, 25))?;
    let worst = rows.iter().map(|r| r.rel_diff).fold(0.0, f64::max);
    println!("identity on {} random pairs: max relative difference {worst:.3e}", rows.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
