//! One NSF run with radiation and cooling, and its discrete balances.
//!
//!     cargo run --release --example nsf_run

use std::f64::consts::PI;

use dmvlab::field::{snapshot_from_primitive, Grid1D};
use dmvlab::nsf_solver::{self, NsfParams};
use dmvlab::thermodynamics::{GasModel, PrimitiveState};

pub fn run() -> dmvlab::Result<()> {
    let model = GasModel::monatomic_degenerate(1.0, 1e-10)?.with_transport(1.0, 0.0, 1.0)?;
    let params = NsfParams {
        epsilon: 0.05,
        alpha: 3.0,
        beta: 0.5,
        theta_bar: 0.9,
        cfl: 0.5,
        t_end: 0.1,
        snapshot_times: vec![0.025, 0.05, 0.075],
    };
    let grid = Grid1D::new(64)?;
    let initial = snapshot_from_primitive(&grid, &model, params.a_rad(), 0.0, |x| {
        PrimitiveState::new(1.0 + 0.1 * (2.0 * PI * x).sin(), 1.0, 0.0)
    })?;
    let traj = nsf_solver::run(&initial, &params, &model)?;
    println!("{} steps, dt ∈ [{:.2e}, {:.2e}]", traj.stats.steps, traj.stats.min_dt, traj.stats.max_dt);
    println!("{:>6} {:>14} {:>14} {:>14}", "t", "energy", "cooling", "entropy");
    for b in &traj.balance {
        println!("{:>6.3} {:>14.10} {:>14.6e} {:>14.10}", b.t, b.energy, b.cooling, b.entropy);
    }
    println!("energy balance (relative): {:.2e}", nsf_solver::energy_balance_relative(&traj));
    let slack = nsf_solver::discrete_entropy_production(&traj);
    println!("entropy production slack: min {:.3e}, max {:.3e}", slack.min(), slack.max_abs());
    let bounds = nsf_solver::uniform_bounds(&traj, &model);
    println!("ε-uniform bounds: {bounds:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
