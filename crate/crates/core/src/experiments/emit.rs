//! Artifact writers. Every file is a pure function of its inputs: fixed field
//! order, shortest round-trip float formatting, no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::audits::{RelengAudit, ThermoAudit};
use super::config::OutputConfig;
use super::sweep::SweepOutcome;
use super::weak_strong::WeakStrongReport;
use crate::dmv_verifier::{summary_table, write_report_ndjson};
use crate::error::Result;
use crate::field::{snapshots_to_csv, Trajectory};

pub const RUNS_HEADER: &str = "epsilon,status,steps,min_dt,max_dt,energy_balance,mass_drift,momentum_drift,entropy_slack_min,max_gradient_indicator,error";
pub const CLAUSES_HEADER: &str = "clause,aggregate,tolerance,passed,not_evaluable";
pub const BALANCE_HEADER: &str = "epsilon,t,mass,momentum,energy,cooling,entropy,entropy_production";
pub const WEAKSTRONG_HEADER: &str = "epsilon,t,relative_energy";
pub const WEAKSTRONG_L1_HEADER: &str = "epsilon,l1_rho,l1_m,l1_E";
pub const THERMO_HEADER: &str = "variant,quantity,value";

/// Shortest round-trip scientific notation; `nan`, `inf`, `-inf` otherwise.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".into(), num)
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn put(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body)?;
    written.push(path);
    Ok(())
}

pub fn runs_csv(outcome: &SweepOutcome) -> String {
    let mut out = format!("{RUNS_HEADER}\n");
    for r in &outcome.runs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            num(r.epsilon),
            r.status,
            r.steps,
            num(r.min_dt),
            num(r.max_dt),
            num(r.energy_balance),
            num(r.mass_drift),
            num(r.momentum_drift),
            num(r.entropy_slack_min),
            num(r.max_gradient_indicator),
            field(r.error.as_deref().unwrap_or(""))
        );
    }
    out
}

pub fn balance_csv(trajs: &[Trajectory]) -> String {
    let mut out = format!("{BALANCE_HEADER}\n");
    for tr in trajs {
        for b in &tr.balance {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                num(tr.epsilon),
                num(b.t),
                num(b.mass),
                num(b.momentum),
                num(b.energy),
                num(b.cooling),
                num(b.entropy),
                num(b.entropy_production)
            );
        }
    }
    out
}

/// Writes the sweep artifacts into `dir`; returns the files in write order.
pub fn emit_sweep(outcome: &SweepOutcome, output: &OutputConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if output.wants("csv") {
        put(dir, "runs.csv", &runs_csv(outcome), &mut written)?;
    }
    let (Some(family), Some(measure), Some(report)) = (&outcome.family, &outcome.measure, &outcome.report) else {
        return Ok(written);
    };
    if output.wants("csv") {
        put(dir, "balance.csv", &balance_csv(&family.trajectories), &mut written)?;
        let mut clauses = format!("{CLAUSES_HEADER}\n");
        for c in &report.clauses {
            let tol = if c.tolerance.is_finite() { num(c.tolerance) } else { String::new() };
            let _ = writeln!(clauses, "{},{},{},{},{}", field(&c.clause), num(c.aggregate), tol, c.passed, c.not_evaluable);
        }
        put(dir, "clauses.csv", &clauses, &mut written)?;
        for (k, tr) in family.trajectories.iter().enumerate() {
            put(dir, &format!("snapshots_{k}.csv"), &snapshots_to_csv(&tr.snapshots), &mut written)?;
        }
    }
    if output.wants("ndjson") {
        let mut buf = Vec::new();
        measure.write_ndjson(&mut buf)?;
        put(dir, "measure.ndjson", &String::from_utf8_lossy(&buf), &mut written)?;
        let mut buf = Vec::new();
        write_report_ndjson(report, &mut buf)?;
        put(dir, "dmv_report.ndjson", &String::from_utf8_lossy(&buf), &mut written)?;
    }
    if output.wants("dat") {
        let mut defect = String::from("# t D int_D proxy\n");
        for (j, t) in report.defect.times.iter().enumerate() {
            let _ = writeln!(
                defect,
                "{} {} {} {}",
                num(*t),
                num(report.defect.defect[j]),
                num(report.defect.integrated[j]),
                num(report.concentration.proxy[j])
            );
        }
        put(dir, "defect.dat", &defect, &mut written)?;
        if let Some(spread) = &outcome.spread {
            let mut body = String::from("# x std_rho std_m std_E (t = t_end)\n");
            let last = spread.per_cell.last().map(Vec::as_slice).unwrap_or(&[]);
            for (i, s) in last.iter().enumerate() {
                let x = (i as f64 + 0.5) / last.len() as f64;
                let _ = writeln!(body, "{} {} {} {}", num(x), num(s[0]), num(s[1]), num(s[2]));
            }
            put(dir, "spread.dat", &body, &mut written)?;
        }
    }
    put(dir, "dmv_summary.txt", &summary_table(report), &mut written)?;
    Ok(written)
}

pub fn weak_strong_csv(report: &WeakStrongReport) -> String {
    let mut out = format!("{WEAKSTRONG_HEADER}\n");
    for row in &report.rows {
        for (t, v) in report.times.iter().zip(&row.relative_energy) {
            let _ = writeln!(out, "{},{},{}", num(row.epsilon), num(*t), opt(*v));
        }
    }
    out
}

pub fn weak_strong_summary(report: &WeakStrongReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "reference: {}", report.reference_label);
    let _ = writeln!(out, "{:>12} {:>16} {:>14} {:>14} {:>14}", "epsilon", "rel_energy_end", "l1_rho", "l1_m", "l1_E");
    for (row, v) in report.rows.iter().zip(report.final_values()) {
        let _ = writeln!(
            out,
            "{:>12} {:>16} {:>14.6e} {:>14.6e} {:>14.6e}",
            num(row.epsilon),
            opt(v),
            row.l1[0],
            row.l1[1],
            row.l1[2]
        );
    }
    let _ = writeln!(out, "fitted order in ε: {}", report.fitted_order.map_or("-".into(), |o| format!("{o:.4}")));
    let _ = writeln!(out, "collapse ratio (smallest/largest ε): {}", report.collapse_ratio().map_or("-".into(), num));
    let ladder: Vec<String> = report.spread_ladder.iter().map(|v| num(*v)).collect();
    let _ = writeln!(out, "density spread ladder: [{}]", ladder.join(", "));
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn emit_weak_strong(report: &WeakStrongReport, output: &OutputConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if output.wants("csv") {
        put(dir, "weakstrong.csv", &weak_strong_csv(report), &mut written)?;
        let mut l1 = format!("{WEAKSTRONG_L1_HEADER}\n");
        for r in &report.rows {
            let _ = writeln!(l1, "{},{},{},{}", num(r.epsilon), num(r.l1[0]), num(r.l1[1]), num(r.l1[2]));
        }
        put(dir, "weakstrong_l1.csv", &l1, &mut written)?;
    }
    if output.wants("ndjson") {
        put(dir, "weakstrong.ndjson", &format!("{}\n", serde_json::to_string(report)?), &mut written)?;
    }
    if output.wants("dat") {
        let mut body = String::from("# epsilon relative_energy_end\n");
        for (r, v) in report.rows.iter().zip(report.final_values()) {
            let _ = writeln!(body, "{} {}", num(r.epsilon), opt(v));
        }
        put(dir, "weakstrong.dat", &body, &mut written)?;
    }
    put(dir, "weakstrong_summary.txt", &weak_strong_summary(report), &mut written)?;
    Ok(written)
}

pub fn thermo_csv(audits: &[ThermoAudit]) -> String {
    let mut out = format!("{THERMO_HEADER}\n");
    for a in audits {
        let mut row = |q: &str, v: f64| {
            let _ = writeln!(out, "{},{q},{}", a.variant, num(v));
        };
        row("gibbs_max", a.gibbs_max);
        row("stability_passed", f64::from(u8::from(a.stability_passed)));
        row("concavity_min", a.concavity_min);
        row("concavity_out_of_domain", a.concavity_out_of_domain as f64);
        row("hessian_max_eigenvalue", a.hessian_max_eigenvalue);
        if let Some(e) = &a.eos {
            row("p_at_zero", e.p_at_zero);
            row("min_p_prime", e.min_p_prime);
            row("structure_ratio_min", e.structure_ratio.0);
            row("structure_ratio_max", e.structure_ratio.1);
            row("scaled_p_error_at_100", e.scaled_p_error_at_100);
            row("entropy_at_100", e.entropy_at_100);
            row("entropy_at_1", e.entropy_at_1);
        }
    }
    out
}

pub fn releng_csv(audits: &[(String, RelengAudit)]) -> String {
    let mut out = String::from("variant,pairs,max_rel_diff,min_value\n");
    for (name, a) in audits {
        let _ = writeln!(out, "{name},{},{},{}", a.pairs, num(a.max_rel_diff), num(a.min_value));
    }
    out
}
