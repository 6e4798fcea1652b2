use std::fs;
use std::path::{Path, PathBuf};

use dmvlab::experiments::{emit_sweep, run_sweep, ExperimentConfig, RunOptions};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Regenerates the pinned sweep into `out` and returns the produced file names.
pub fn regenerate(out: &Path, workers: usize) -> dmvlab::Result<Vec<String>> {
    let cfg = ExperimentConfig::load(&golden_dir().join("config.toml"))?;
    let outcome = run_sweep(&cfg, &RunOptions { workers, override_regime: false })?;
    let files = emit_sweep(&outcome, &cfg.output, out)?;
    Ok(files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect())
}

/// Names of files whose bytes differ from the golden copy (or are missing).
pub fn golden_mismatches(out: &Path, names: &[String]) -> Vec<String> {
    names
        .iter()
        .filter(|n| fs::read(out.join(n)).ok() != fs::read(golden_dir().join(n)).ok())
        .cloned()
        .collect()
}
