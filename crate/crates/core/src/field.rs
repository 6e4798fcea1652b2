//! Periodic grids, per-cell snapshots, trajectories, and the snapshot file
//! format shared by both solvers.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermodynamics::{GasModel, PrimitiveState};

/// Version line written at the top of every snapshot file.
pub const SNAPSHOT_FORMAT: &str = "# dmvlab snapshot v1";
/// Column header of the snapshot file.
pub const SNAPSHOT_HEADER: &str = "t,n,cell,rho,m,E,theta,u";

/// Uniform periodic grid on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid1D {
    n: usize,
}

impl Grid1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::Config(format!("grid needs at least 8 cells, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Cell centre `x_i = (i + ½) dx`.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    /// Right face `x_{i+½} = (i + 1) dx`.
    pub fn face(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dx()
    }

    #[inline]
    pub fn right(&self, i: usize) -> usize {
        if i + 1 == self.n {
            0
        } else {
            i + 1
        }
    }

    #[inline]
    pub fn left(&self, i: usize) -> usize {
        if i == 0 {
            self.n - 1
        } else {
            i - 1
        }
    }
}

/// Conservative fields at one instant. `energy` includes any radiation part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub energy: Vec<f64>,
    pub theta: Vec<f64>,
    pub u: Vec<f64>,
}

impl Snapshot {
    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn total_mass(&self) -> f64 {
        cell_sum(&self.rho)
    }

    pub fn total_momentum(&self) -> f64 {
        cell_sum(&self.m)
    }

    pub fn total_energy(&self) -> f64 {
        cell_sum(&self.energy)
    }
}

/// Samples a primitive profile at cell centres; `energy` includes `a θ⁴`.
pub fn snapshot_from_primitive(
    grid: &Grid1D,
    model: &GasModel,
    a_rad: f64,
    t: f64,
    profile: impl Fn(f64) -> PrimitiveState,
) -> Result<Snapshot> {
    let n = grid.n();
    let mut snap = Snapshot {
        t,
        rho: Vec::with_capacity(n),
        m: Vec::with_capacity(n),
        energy: Vec::with_capacity(n),
        theta: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
    };
    for i in 0..n {
        let s = profile(grid.center(i));
        let c = model.primitive_to_conservative_with_radiation(&s, a_rad)?;
        snap.rho.push(c.rho);
        snap.m.push(c.m);
        snap.energy.push(c.energy);
        snap.theta.push(s.theta);
        snap.u.push(s.u);
    }
    Ok(snap)
}

/// `max_x ρ^{γ−1}/(c_v θ)`; bounded above by its initial value when the
/// specific entropy obeys a minimum principle.
pub fn min_principle_ratio(snap: &Snapshot, gamma: f64, c_v: f64) -> f64 {
    snap.rho
        .iter()
        .zip(&snap.theta)
        .map(|(r, th)| r.powf(gamma - 1.0) / (c_v * th))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// A time series of balance slacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl SlackSeries {
    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// `∑ v_i dx` on the unit torus.
pub fn cell_sum(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Nsf,
    Brenner,
}

/// Renormalized entropy bookkeeping for one cap `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormalizedRecord {
    pub cap: f64,
    /// `∑ ρ Z_M(s) dx`.
    pub total: f64,
    /// Time-integrated renormalized production up to `t`.
    pub production: f64,
}

/// Space-integrated balance quantities at a snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceRecord {
    pub t: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// `∫₀^t λ ∑(θ − θ̄)³ dx dt`, accumulated with the time-stepper's weights.
    pub cooling: f64,
    /// `∑ ρ(s + a s_R) dx`.
    pub entropy: f64,
    /// Time-integrated entropy production up to `t`.
    pub entropy_production: f64,
    pub renormalized: Vec<RenormalizedRecord>,
}

/// Diagnostics accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    /// Largest `|∂ₓu| dx` seen at any step (shock indicator).
    pub max_gradient_indicator: f64,
    /// `ε ∫ ∑ |∂ₓu|² dx dt`.
    pub viscous_dissipation: f64,
    /// `ε ∫ ∑ (θ² + |∂ₓθ|²) dx dt`.
    pub thermal_dissipation: f64,
    /// Running maximum of `ρ^{γ−1}/(c_v θ)` (Brenner runs).
    pub min_principle_max: Option<f64>,
    pub min_principle_initial: Option<f64>,
}

/// A completed run: snapshots at the requested times plus balances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub source: SolverKind,
    pub grid: Grid1D,
    pub epsilon: f64,
    /// Radiation constant used when forming `energy`.
    pub a_rad: f64,
    pub snapshots: Vec<Snapshot>,
    pub balance: Vec<BalanceRecord>,
    pub stats: RunStats,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }
}

/// Writes snapshots as CSV: a version line, the header, then one row per cell.
pub fn snapshots_to_csv(snaps: &[Snapshot]) -> String {
    let mut out = String::new();
    out.push_str(SNAPSHOT_FORMAT);
    out.push('\n');
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for s in snaps {
        let n = s.n();
        for i in 0..n {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                s.t, n, i, s.rho[i], s.m[i], s.energy[i], s.theta[i], s.u[i]
            );
        }
    }
    out
}

pub fn snapshots_from_csv<R: Read>(reader: R) -> Result<Vec<Snapshot>> {
    let mut lines = BufReader::new(reader).lines();
    let mut next_line = || -> Result<Option<String>> { lines.next().transpose().map_err(Error::from) };
    match next_line()? {
        Some(l) if l.trim() == SNAPSHOT_FORMAT => {}
        other => return Err(Error::Parse(format!("unexpected snapshot version line {other:?}"))),
    }
    match next_line()? {
        Some(l) if l.trim() == SNAPSHOT_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected snapshot header {other:?}"))),
    }
    let mut snaps: Vec<Snapshot> = Vec::new();
    let mut row = 2;
    while let Some(line) = next_line()? {
        row += 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse(format!("row {row}: expected 8 fields")));
        }
        let num = |k: usize| -> Result<f64> {
            fields[k].trim().parse().map_err(|_| Error::Parse(format!("row {row}: bad number {:?}", fields[k])))
        };
        let idx = |k: usize| -> Result<usize> {
            fields[k].trim().parse().map_err(|_| Error::Parse(format!("row {row}: bad index {:?}", fields[k])))
        };
        let (t, n, cell) = (num(0)?, idx(1)?, idx(2)?);
        if cell == 0 {
            snaps.push(Snapshot {
                t,
                rho: Vec::with_capacity(n),
                m: Vec::with_capacity(n),
                energy: Vec::with_capacity(n),
                theta: Vec::with_capacity(n),
                u: Vec::with_capacity(n),
            });
        }
        let s = snaps
            .last_mut()
            .ok_or_else(|| Error::Parse(format!("row {row}: snapshot does not start at cell 0")))?;
        if cell != s.rho.len() || s.t != t {
            return Err(Error::Parse(format!("row {row}: cells out of order")));
        }
        s.rho.push(num(3)?);
        s.m.push(num(4)?);
        s.energy.push(num(5)?);
        s.theta.push(num(6)?);
        s.u.push(num(7)?);
    }
    Ok(snaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_small_n_and_wraps() {
        assert!(Grid1D::new(7).is_err());
        let g = Grid1D::new(8).unwrap();
        assert_eq!(g.left(0), 7);
        assert_eq!(g.right(7), 0);
        assert_eq!(g.dx(), 0.125);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = Snapshot {
            t: 0.1,
            rho: vec![1.0, 0.1 + 0.2, 1e-300],
            m: vec![0.0, -1.5, 3.0],
            energy: vec![2.0, 2.5, 1.0 / 3.0],
            theta: vec![1.0, 2.0, 3.0],
            u: vec![0.0, -5.0, 3e300],
        };
        let text = snapshots_to_csv(&[s.clone(), Snapshot { t: 0.2, ..s.clone() }]);
        assert!(text.starts_with("# dmvlab snapshot v1\nt,n,cell,rho,m,E,theta,u\n"));
        let back = snapshots_from_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], s);
    }
}
