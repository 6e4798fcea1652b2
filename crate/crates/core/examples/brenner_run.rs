//! A Brenner run: renormalized entropy bookkeeping and the minimum principle.
//!
//!     cargo run --release --example brenner_run

use std::f64::consts::PI;

use dmvlab::brenner_solver::{self, BrennerParams};
use dmvlab::field::{snapshot_from_primitive, Grid1D};
use dmvlab::thermodynamics::{GasModel, PrimitiveState};

pub fn run() -> dmvlab::Result<()> {
    let model = GasModel::ideal_gas(1.5)?.with_transport(1.0, 0.0, 1.0)?;
    let params = BrennerParams {
        epsilon: 0.05,
        cfl: 0.5,
        t_end: 0.1,
        snapshot_times: vec![0.05],
        use_cp: false,
        caps: vec![1.0, 10.0, 1e6],
    };
    let grid = Grid1D::new(64)?;
    let initial = snapshot_from_primitive(&grid, &model, 0.0, 0.0, |x| {
        PrimitiveState::new(1.0 + 0.1 * (2.0 * PI * x).sin(), 1.0, 0.05 * (2.0 * PI * x).cos())
    })?;
    let traj = brenner_solver::run(&initial, &params, &model)?;
    let slack = brenner_solver::entropy_balance_residual(&traj);
    println!("entropy slack: min {:.3e}, max {:.3e}", slack.min(), slack.max_abs());
    for cap in [1.0, 10.0, 1e6] {
        let r = brenner_solver::renormalized_entropy_residual(&traj, cap)?;
        println!("Z_M with M = {cap:e}: min slack {:.3e}", r.min());
    }
    let mp = brenner_solver::minimum_principle_monitor(&traj, &model);
    println!(
        "minimum principle: initial {:.6}, running max {:.6}, passed {}",
        mp.initial, mp.running_max, mp.passed
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
