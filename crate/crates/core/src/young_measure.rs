//! Empirical Young measures over an ε-family of trajectories.
//!
//! At every sampled `(t, x)` the measure is the equal-weight atomic
//! probability on the family's conservative states `(ρ, m, E)`, ordered by
//! decreasing ε. A finite family only sees oscillations, never
//! concentrations, so the defect computed here is a surrogate for the
//! limit object and is labelled as such in reports.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::dmv_verifier::TestFunctionBasis;
use crate::error::{Error, Result};
use crate::field::{SolverKind, Trajectory};
use crate::thermodynamics::{ConservativeState, ExtReal, GasModel};

/// An ε-ladder of runs sharing grid and snapshot times.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    pub epsilons: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
    pub source: SolverKind,
}

impl EpsilonFamily {
    /// Checks that ε strictly decreases and that all runs share the source,
    /// grid and snapshot times. A single run is accepted (Dirac measures).
    pub fn new(trajectories: Vec<Trajectory>) -> Result<Self> {
        let first = trajectories.first().ok_or_else(|| Error::Mismatch("empty family".into()))?;
        let source = first.source;
        let times = first.times();
        for tr in &trajectories[1..] {
            if tr.source != source {
                return Err(Error::Mismatch("family mixes solvers".into()));
            }
            if tr.grid != first.grid {
                return Err(Error::Mismatch(format!("grids differ: {} vs {}", tr.grid.n(), first.grid.n())));
            }
            if tr.times() != times {
                return Err(Error::Mismatch("snapshot times differ across the family".into()));
            }
        }
        let epsilons: Vec<f64> = trajectories.iter().map(|t| t.epsilon).collect();
        if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Mismatch("ε must strictly decrease along the family".into()));
        }
        Ok(Self { epsilons, trajectories, source })
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }
}

pub type Atom = [f64; 3];

/// `Y_{t,x}` on the sampling lattice: `atoms[(t·n + x)·K + k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungMeasureField {
    pub source: SolverKind,
    pub epsilons: Vec<f64>,
    pub times: Vec<f64>,
    pub n: usize,
    atoms: Vec<Atom>,
}

impl YoungMeasureField {
    /// Builds a field from explicit atoms, `atoms[t][x]` listing `K` atoms each.
    pub fn from_atoms(source: SolverKind, epsilons: Vec<f64>, times: Vec<f64>, atoms: Vec<Vec<Vec<Atom>>>) -> Result<Self> {
        let k = epsilons.len();
        if k == 0 || atoms.len() != times.len() {
            return Err(Error::Mismatch("atom lattice does not match the time axis".into()));
        }
        let n = atoms.first().map_or(0, |row| row.len());
        let mut flat = Vec::with_capacity(times.len() * n * k);
        for row in &atoms {
            if row.len() != n {
                return Err(Error::Mismatch("ragged atom lattice".into()));
            }
            for cell in row {
                if cell.len() != k {
                    return Err(Error::Mismatch("every cell needs one atom per ε".into()));
                }
                flat.extend_from_slice(cell);
            }
        }
        Ok(Self { source, epsilons, times, n, atoms: flat })
    }

    pub fn k(&self) -> usize {
        self.epsilons.len()
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn atoms(&self, t: usize, x: usize) -> &[Atom] {
        let k = self.k();
        let start = (t * self.n + x) * k;
        &self.atoms[start..start + k]
    }

    /// Equal weights `1/K`.
    pub fn weight(&self) -> f64 {
        1.0 / self.k() as f64
    }

    /// `⟨Y_{t,x}; g⟩` on the whole lattice, indexed `[t][x]`.
    pub fn expectation(&self, g: impl Fn(&Atom) -> f64) -> Vec<Vec<f64>> {
        (0..self.times.len())
            .map(|t| {
                (0..self.n)
                    .map(|x| self.atoms(t, x).iter().map(&g).sum::<f64>() * self.weight())
                    .collect()
            })
            .collect()
    }

    /// Expectation of an extended-valued observable; cells where any atom
    /// is non-finite become `None` and are counted.
    pub fn expectation_ext(&self, g: impl Fn(&Atom) -> ExtReal) -> (Vec<Vec<Option<f64>>>, usize) {
        let mut tagged = 0;
        let field = (0..self.times.len())
            .map(|t| {
                (0..self.n)
                    .map(|x| {
                        let mut acc = 0.0;
                        for a in self.atoms(t, x) {
                            match g(a) {
                                ExtReal::Finite(v) => acc += v,
                                _ => {
                                    tagged += 1;
                                    return None;
                                }
                            }
                        }
                        Some(acc * self.weight())
                    })
                    .collect()
            })
            .collect();
        (field, tagged)
    }

    /// Writes the NDJSON dump: a header line, then one line per cell.
    pub fn write_ndjson<W: Write>(&self, mut w: W) -> Result<()> {
        let header = DumpHeader {
            format: DUMP_FORMAT.into(),
            version: 1,
            source: self.source,
            epsilons: self.epsilons.clone(),
            times: self.times.clone(),
            n: self.n,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for t in 0..self.times.len() {
            for x in 0..self.n {
                let rec = CellRecord { t_index: t, x_index: x, atoms: self.atoms(t, x).to_vec() };
                writeln!(w, "{}", serde_json::to_string(&rec)?)?;
            }
        }
        Ok(())
    }

    pub fn read_ndjson<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header: DumpHeader = match lines.next() {
            Some(l) => serde_json::from_str(&l?)?,
            None => return Err(Error::Parse("empty measure dump".into())),
        };
        if header.format != DUMP_FORMAT || header.version != 1 {
            return Err(Error::Parse(format!("unsupported dump {} v{}", header.format, header.version)));
        }
        let k = header.epsilons.len();
        let cells = header.times.len() * header.n;
        let mut atoms = Vec::with_capacity(cells * k);
        let mut expected = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CellRecord = serde_json::from_str(&line)?;
            if rec.t_index * header.n + rec.x_index != expected || rec.atoms.len() != k {
                return Err(Error::Parse(format!("cell record {expected} out of order or malformed")));
            }
            atoms.extend(rec.atoms);
            expected += 1;
        }
        if expected != cells {
            return Err(Error::Parse(format!("expected {cells} cell records, found {expected}")));
        }
        Ok(Self { source: header.source, epsilons: header.epsilons, times: header.times, n: header.n, atoms })
    }
}

const DUMP_FORMAT: &str = "dmvlab-young-measure";

#[derive(Serialize, Deserialize)]
struct DumpHeader {
    format: String,
    version: u32,
    source: SolverKind,
    epsilons: Vec<f64>,
    times: Vec<f64>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    t_index: usize,
    x_index: usize,
    atoms: Vec<Atom>,
}

/// Collects the across-ε values at every `(t, x)`. When a model is given,
/// every atom must lie in its support `E − ½m²/ρ ≥ p̄/(γ−1) ρ^γ`.
pub fn build(family: &EpsilonFamily, model: Option<&GasModel>) -> Result<YoungMeasureField> {
    let first = &family.trajectories[0];
    let n = first.grid.n();
    let times = first.times();
    let k = family.len();
    let mut atoms = Vec::with_capacity(times.len() * n * k);
    for t in 0..times.len() {
        for x in 0..n {
            for tr in &family.trajectories {
                let s = &tr.snapshots[t];
                let atom = [s.rho[x], s.m[x], s.energy[x]];
                if let Some(m) = model {
                    if !m.satisfies_support(&ConservativeState::new(atom[0], atom[1], atom[2])) {
                        return Err(Error::RejectedState(format!(
                            "atom {atom:?} at t = {}, cell {x} (ε = {}) violates the support condition",
                            times[t], tr.epsilon
                        )));
                    }
                }
                atoms.push(atom);
            }
        }
    }
    Ok(YoungMeasureField { source: family.source, epsilons: family.epsilons.clone(), times, n, atoms })
}

fn integrate_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; times.len()];
    for j in 1..times.len() {
        acc[j] = acc[j - 1] + 0.5 * (times[j] - times[j - 1]) * (values[j] + values[j - 1]);
    }
    acc
}

/// How one family member lost energy up to each snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLoss {
    pub epsilon: f64,
    /// `∑E(0) dx − ∑E(τ) dx`
    pub loss: Vec<f64>,
    /// Cooling sink recorded by the solver.
    pub cooling: Vec<f64>,
    /// `loss − cooling`
    pub residual: Vec<f64>,
}

/// Finite-family surrogate of the dissipation defect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub label: String,
    pub times: Vec<f64>,
    /// `D(τ) = ∑⟨Y_0; E⟩dx − ∑⟨Y_τ; E⟩dx`
    pub defect: Vec<f64>,
    /// `∫₀^τ D dt` (trapezoid)
    pub integrated: Vec<f64>,
    pub per_epsilon: Vec<EnergyLoss>,
}

/// Defect computed from the measure field alone, e.g. a reloaded dump.
pub fn measure_defect(y: &YoungMeasureField) -> DefectReport {
    let energy = y.expectation(|a| a[2]);
    let totals: Vec<f64> = energy.iter().map(|row| row.iter().sum::<f64>() * y.dx()).collect();
    let defect: Vec<f64> = totals.iter().map(|e| totals[0] - e).collect();
    DefectReport {
        label: "measure-only surrogate".into(),
        integrated: integrate_trapezoid(&y.times, &defect),
        times: y.times.clone(),
        defect,
        per_epsilon: Vec::new(),
    }
}

pub fn dissipation_defect(y: &YoungMeasureField, family: &EpsilonFamily) -> DefectReport {
    let per_epsilon = family
        .trajectories
        .iter()
        .map(|tr| {
            let e0 = tr.balance[0].energy;
            let loss: Vec<f64> = tr.balance.iter().map(|b| e0 - b.energy).collect();
            let cooling: Vec<f64> = tr.balance.iter().map(|b| b.cooling).collect();
            let residual = loss.iter().zip(&cooling).map(|(l, c)| l - c).collect();
            EnergyLoss { epsilon: tr.epsilon, loss, cooling, residual }
        })
        .collect();
    DefectReport { label: "finite-family surrogate".into(), per_epsilon, ..measure_defect(y) }
}

/// Collapse-to-Dirac diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    /// Population standard deviation per component, indexed `[t][x]`.
    pub per_cell: Vec<Vec<[f64; 3]>>,
    /// `∫₀^T ∑ std dx dt` per component.
    pub global_l1: [f64; 3],
    /// `max_{t,x,k} |atom_k − mean|_∞`.
    pub dirac_distance: f64,
}

pub fn spread(y: &YoungMeasureField) -> SpreadReport {
    let mut dirac_distance = 0.0f64;
    let per_cell: Vec<Vec<[f64; 3]>> = (0..y.times.len())
        .map(|t| {
            (0..y.n)
                .map(|x| {
                    let atoms = y.atoms(t, x);
                    let mut out = [0.0; 3];
                    for (c, o) in out.iter_mut().enumerate() {
                        let mean = atoms.iter().map(|a| a[c]).sum::<f64>() * y.weight();
                        let var = atoms.iter().map(|a| (a[c] - mean).powi(2)).sum::<f64>() * y.weight();
                        for a in atoms {
                            dirac_distance = dirac_distance.max((a[c] - mean).abs());
                        }
                        *o = var.sqrt();
                    }
                    out
                })
                .collect()
        })
        .collect();
    let mut global_l1 = [0.0; 3];
    for (c, g) in global_l1.iter_mut().enumerate() {
        let per_time: Vec<f64> = per_cell.iter().map(|row| row.iter().map(|v| v[c]).sum::<f64>() * y.dx()).collect();
        *g = *integrate_trapezoid(&y.times, &per_time).last().unwrap_or(&0.0);
    }
    SpreadReport { per_cell, global_l1, dirac_distance }
}

/// Global L¹ density spread of the sub-measures built from consecutive ε
/// pairs `(ε_k, ε_{k+1})`, in ladder order.
pub fn ladder_spread(family: &EpsilonFamily) -> Result<Vec<f64>> {
    (0..family.len().saturating_sub(1))
        .map(|k| {
            let pair = EpsilonFamily::new(family.trajectories[k..k + 2].to_vec())?;
            Ok(spread(&build(&pair, None)?).global_l1[0])
        })
        .collect()
}

/// Momentum flux `m²/ρ + (γ−1)(E − ½m²/ρ)`; zero at vacuum.
pub fn momentum_flux(a: &Atom, gamma: f64) -> f64 {
    if a[0] <= 0.0 {
        return 0.0;
    }
    0.5 * (3.0 - gamma) * a[1] * a[1] / a[0] + (gamma - 1.0) * a[2]
}

/// `⟨Y; F(U)⟩ − F(⟨Y; U⟩)` for the momentum flux, indexed `[t][x]`.
pub fn flux_defect(y: &YoungMeasureField, gamma: f64) -> Vec<Vec<f64>> {
    (0..y.times.len())
        .map(|t| {
            (0..y.n)
                .map(|x| {
                    let atoms = y.atoms(t, x);
                    let mut mean = [0.0; 3];
                    let mut avg_flux = 0.0;
                    for a in atoms {
                        for c in 0..3 {
                            mean[c] += a[c] * y.weight();
                        }
                        avg_flux += momentum_flux(a, gamma) * y.weight();
                    }
                    avg_flux - momentum_flux(&mean, gamma)
                })
                .collect()
        })
        .collect()
}

/// Concentration proxy for the momentum equation at each snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationEstimate {
    pub times: Vec<f64>,
    /// `sup_φ |∫₀^τ ∑ (⟨F(U)⟩ − F(⟨U⟩)) ∂ₓφ dx dt| / ‖∂ₓφ‖_∞`
    pub proxy: Vec<f64>,
    /// `proxy / ∫₀^τ D dt`, `None` when the denominator vanishes.
    pub ratio: Vec<Option<f64>>,
}

/// Denominators below this are treated as zero.
pub const DEGENERATE_DEFECT: f64 = 1e-14;

pub fn concentration_estimate(
    y: &YoungMeasureField,
    defect: &DefectReport,
    basis: &TestFunctionBasis,
    gamma: f64,
) -> ConcentrationEstimate {
    let gap = flux_defect(y, gamma);
    let zeros = vec![vec![0.0; y.n]; y.times.len()];
    let mut proxy = vec![0.0f64; y.times.len()];
    for phi in basis.members() {
        let norm = phi.max_abs_dx(&y.times);
        if norm == 0.0 {
            continue;
        }
        let integral = crate::dmv_verifier::space_time_integral(&y.times, y.n, &zeros, &gap, &phi);
        for (p, v) in proxy.iter_mut().zip(integral) {
            *p = p.max(v.abs() / norm);
        }
    }
    let ratio = proxy
        .iter()
        .zip(&defect.integrated)
        .map(|(p, d)| if d.abs() > DEGENERATE_DEFECT { Some(p / d) } else { None })
        .collect();
    ConcentrationEstimate { times: y.times.clone(), proxy, ratio }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(atoms: Vec<Vec<Vec<Atom>>>, k: usize) -> YoungMeasureField {
        let eps = (0..k).map(|i| 1.0 / (i + 1) as f64).collect();
        let times = (0..atoms.len()).map(|t| t as f64).collect();
        YoungMeasureField::from_atoms(SolverKind::Nsf, eps, times, atoms).unwrap()
    }

    #[test]
    fn expectation_normalization_and_jensen() {
        let atoms = vec![(1.0, 0.0, 1.0), (1.0, 1.0, 2.0), (2.0, -1.0, 2.0)]
            .into_iter()
            .map(|(a, b, c)| [a, b, c])
            .collect::<Vec<_>>();
        let y = field(vec![vec![atoms.clone(); 8]], 3);
        assert!(y.expectation(|_| 1.0).iter().flatten().all(|v| (*v - 1.0).abs() < 1e-15));
        let ke = y.expectation(|a| 0.5 * a[1] * a[1] / a[0]);
        let m = y.expectation(|a| a[1]);
        let r = y.expectation(|a| a[0]);
        assert!(ke[0][0] >= 0.5 * m[0][0] * m[0][0] / r[0][0]);
    }

    #[test]
    fn spread_examples() {
        let y = field(vec![vec![vec![[0.0, 0.0, 1.0], [2.0, 0.0, 1.0]]; 8]; 2], 2);
        let s = spread(&y);
        assert_eq!(s.per_cell[0][0][0], 1.0);
        assert_eq!(s.dirac_distance, 1.0);
        // one unit of time, unit spread everywhere
        assert!((s.global_l1[0] - 1.0).abs() < 1e-15);
        assert_eq!(s.global_l1[1], 0.0);

        let dirac = field(vec![vec![vec![[1.0, 0.5, 2.0]]; 8]; 3], 1);
        assert_eq!(spread(&dirac).dirac_distance, 0.0);
    }

    #[test]
    fn flux_defect_of_two_atoms_is_closed_form() {
        // atoms (1, 1, E) and (1, −1, E): ⟨m²/ρ⟩ = 1, ⟨m⟩ = 0
        let gamma = 1.4;
        let y = field(vec![vec![vec![[1.0, 1.0, 3.0], [1.0, -1.0, 3.0]]; 8]], 2);
        let d = flux_defect(&y, gamma);
        assert!((d[0][3] - 0.5 * (3.0 - gamma)).abs() < 1e-15);
    }

    #[test]
    fn ndjson_round_trip() {
        let y = field(vec![vec![vec![[1.0, 0.1, 2.0], [1.1, -0.3, 2.0 / 3.0]]; 8]; 2], 2);
        let mut buf = Vec::new();
        y.write_ndjson(&mut buf).unwrap();
        let back = YoungMeasureField::read_ndjson(buf.as_slice()).unwrap();
        assert_eq!(back, y);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert!(text.lines().nth(1).unwrap().starts_with("{\"t_index\":0,\"x_index\":0,\"atoms\":"));
    }
}
