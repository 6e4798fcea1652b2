//! Build a Young measure from an ε-family and inspect its spread and defect.
//!
//!     cargo run --release --example young_measure

use std::f64::consts::PI;

use dmvlab::field::{snapshot_from_primitive, Grid1D};
use dmvlab::nsf_solver::{self, NsfParams};
use dmvlab::thermodynamics::{GasModel, PrimitiveState};
use dmvlab::young_measure::{build, dissipation_defect, spread, EpsilonFamily, YoungMeasureField};

pub fn run() -> dmvlab::Result<()> {
    let model = GasModel::monatomic_degenerate(1.0, 1e-10)?;
    let grid = Grid1D::new(32)?;
    let trajectories = [0.1, 0.05, 0.025]
        .iter()
        .map(|&epsilon| {
            let params = NsfParams {
                epsilon,
                alpha: 3.0,
                beta: 0.5,
                theta_bar: 0.9,
                cfl: 0.5,
                t_end: 0.1,
                snapshot_times: vec![0.05],
            };
            let initial = snapshot_from_primitive(&grid, &model, params.a_rad(), 0.0, |x| {
                PrimitiveState::new(1.0 + 0.1 * (2.0 * PI * x).sin(), 1.0, 0.0)
            })?;
            nsf_solver::run(&initial, &params, &model)
        })
        .collect::<dmvlab::Result<Vec<_>>>()?;
    let family = EpsilonFamily::new(trajectories)?;
    let y = build(&family, Some(&model))?;
    let s = spread(&y);
    println!("{} atoms per cell, {} cells, {} times", y.k(), y.n, y.times.len());
    println!("global L¹ spread (ρ, m, E): {:?}", s.global_l1);
    let d = dissipation_defect(&y, &family);
    println!("defect D(τ): {:?}", d.defect);

    let mut dump = Vec::new();
    y.write_ndjson(&mut dump)?;
    let back = YoungMeasureField::read_ndjson(dump.as_slice())?;
    println!("NDJSON dump: {} bytes, reloads identically: {}", dump.len(), back == y);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
