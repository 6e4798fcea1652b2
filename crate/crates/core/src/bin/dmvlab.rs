use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmvlab::dmv_verifier::{summary_table, verify, write_report_ndjson};
use dmvlab::experiments::emit::{balance_csv, releng_csv, runs_csv, thermo_csv};
use dmvlab::experiments::sweep::{run_trajectories, RunSummary, SweepOutcome};
use dmvlab::experiments::{
    emit_sweep, emit_weak_strong, releng_audit, releng_tolerance, run_sweep, thermo_audit, weak_strong_experiment,
    ExperimentConfig, RunOptions,
};
use dmvlab::field::{snapshots_to_csv, SolverKind};
use dmvlab::thermodynamics::GasModel;
use dmvlab::young_measure::{measure_defect, YoungMeasureField};
use dmvlab::{Error, Result};

#[derive(Parser)]
#[command(name = "dmvlab", version, about = "Vanishing-dissipation experiments for compressible gas dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment configuration (TOML)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; defaults to the one in the config, else `out`
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Concurrent solver runs
    #[arg(long, value_name = "N", env = "DMVLAB_WORKERS")]
    workers: Option<usize>,
    /// Allow NSF sweeps outside α > 2, 0 < β < 1
    #[arg(long)]
    override_regime: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Gibbs, stability, concavity and EOS-structure audits
    ThermoAudit(Common),
    /// Primitive vs conservative relative-energy identity
    RelengAudit(Common),
    /// NSF runs for every ε of the config
    NsfRun(Common),
    /// Brenner runs for every ε of the config
    BrennerRun(Common),
    /// ε-sweep, Young measure and all clause checks
    Sweep(Common),
    /// Re-verify a measure dump `measure.ndjson` in the output directory
    DmvVerify(Common),
    /// Relative energy against a smooth reference along the ε ladder
    Weakstrong(Common),
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let path = self.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
        ExperimentConfig::load(path)
    }

    fn options(&self) -> RunOptions {
        let mut opts = RunOptions { override_regime: self.override_regime, ..RunOptions::default() };
        if let Some(w) = self.workers.filter(|&w| w > 0) {
            opts.workers = w;
        }
        opts
    }

    fn out_dir(&self, cfg: Option<&ExperimentConfig>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.map(|c| c.output.directory.clone()))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Models to audit: the config's, or both defaults.
    fn models(&self) -> Result<Vec<GasModel>> {
        match &self.config {
            Some(_) => Ok(vec![self.load()?.model.build()?]),
            None => Ok(vec![GasModel::ideal_gas(1.5)?, GasModel::monatomic_degenerate(1.0, 1e-10)?]),
        }
    }
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    println!("wrote {}", dir.join(name).display());
    Ok(())
}

fn verdict(ok: bool) -> ExitCode {
    println!("{}", if ok { "PASS" } else { "FAIL" });
    if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }
}

fn thermo(c: &Common) -> Result<ExitCode> {
    let audits = c.models()?.iter().map(thermo_audit).collect::<Result<Vec<_>>>()?;
    let mut ok = true;
    for a in &audits {
        println!(
            "{:<22} gibbs {:.3e}  concavity min {:.3e}  hessian max eig {:.3e}  {}",
            a.variant,
            a.gibbs_max,
            a.concavity_min,
            a.hessian_max_eigenvalue,
            if a.passed() { "ok" } else { "FAILED" }
        );
        ok &= a.passed();
    }
    write(&c.out_dir(None), "thermo_audit.csv", &thermo_csv(&audits))?;
    Ok(verdict(ok))
}

fn releng(c: &Common) -> Result<ExitCode> {
    let mut rows = Vec::new();
    let mut ok = true;
    for m in c.models()? {
        let a = releng_audit(&m, 100)?;
        let name = if m.is_ideal() { "ideal_gas" } else { "monatomic_degenerate" };
        let pass = a.passed(releng_tolerance(&m));
        println!("{name:<22} pairs {}  max rel diff {:.3e}  {}", a.pairs, a.max_rel_diff, if pass { "ok" } else { "FAILED" });
        ok &= pass;
        rows.push((name.to_string(), a));
    }
    write(&c.out_dir(None), "releng_audit.csv", &releng_csv(&rows))?;
    Ok(verdict(ok))
}

fn single_runs(c: &Common, kind: SolverKind) -> Result<ExitCode> {
    let mut cfg = c.load()?;
    cfg.solver.kind = kind;
    let opts = c.options();
    cfg.validate(opts.override_regime)?;
    let model = cfg.model.build()?;
    let dir = c.out_dir(Some(&cfg));
    let results = run_trajectories(&cfg, &model, opts.workers)?;
    let mut runs = Vec::new();
    let mut trajs = Vec::new();
    for (k, (r, &eps)) in results.into_iter().zip(&cfg.sweep.epsilons).enumerate() {
        match r {
            Ok(tr) => {
                write(&dir, &format!("snapshots_{k}.csv"), &snapshots_to_csv(&tr.snapshots))?;
                runs.push(RunSummary::from_trajectory(&tr));
                trajs.push(tr);
            }
            Err(e) => {
                eprintln!("ε = {eps}: {e}");
                runs.push(RunSummary::failed(eps, &e));
            }
        }
    }
    let ok = runs.iter().all(|r| r.error.is_none());
    let outcome = SweepOutcome {
        config: cfg,
        runs,
        family: None,
        measure: None,
        report: None,
        spread: None,
        ladder_spread: Vec::new(),
    };
    write(&dir, "runs.csv", &runs_csv(&outcome))?;
    write(&dir, "balance.csv", &balance_csv(&trajs))?;
    Ok(verdict(ok))
}

fn sweep(c: &Common) -> Result<ExitCode> {
    let cfg = c.load()?;
    let outcome = run_sweep(&cfg, &c.options())?;
    let dir = c.out_dir(Some(&cfg));
    for path in emit_sweep(&outcome, &cfg.output, &dir)? {
        println!("wrote {}", path.display());
    }
    for r in outcome.runs.iter().filter(|r| r.error.is_some()) {
        eprintln!("ε = {}: {}", r.epsilon, r.error.as_deref().unwrap_or(""));
    }
    if let Some(report) = &outcome.report {
        print!("{}", summary_table(report));
    }
    Ok(verdict(outcome.passed()))
}

fn dmv_verify(c: &Common) -> Result<ExitCode> {
    let cfg = c.load()?;
    let dir = c.out_dir(Some(&cfg));
    let path = dir.join("measure.ndjson");
    let measure = YoungMeasureField::read_ndjson(fs::File::open(&path).map_err(|e| {
        Error::Config(format!("cannot open {} ({e}); run `sweep` first", path.display()))
    })?)?;
    let report = verify(&measure, &measure_defect(&measure), &cfg.model.build()?, &cfg.verifier)?;
    let mut buf = Vec::new();
    write_report_ndjson(&report, &mut buf)?;
    write(&dir, "dmv_verify.ndjson", &String::from_utf8_lossy(&buf))?;
    let table = summary_table(&report);
    write(&dir, "dmv_verify.txt", &table)?;
    print!("{table}");
    Ok(verdict(report.passed))
}

fn weakstrong(c: &Common) -> Result<ExitCode> {
    let cfg = c.load()?;
    let report = weak_strong_experiment(&cfg, &c.options())?;
    for path in emit_weak_strong(&report, &cfg.output, &c.out_dir(Some(&cfg)))? {
        println!("wrote {}", path.display());
    }
    print!("{}", dmvlab::experiments::emit::weak_strong_summary(&report));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ThermoAudit(c) => thermo(c),
        Command::RelengAudit(c) => releng(c),
        Command::NsfRun(c) => single_runs(c, SolverKind::Nsf),
        Command::BrennerRun(c) => single_runs(c, SolverKind::Brenner),
        Command::Sweep(c) => sweep(c),
        Command::DmvVerify(c) => dmv_verify(c),
        Command::Weakstrong(c) => weakstrong(c),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
