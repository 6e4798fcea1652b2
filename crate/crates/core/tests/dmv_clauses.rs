use std::f64::consts::PI;

use dmvlab::dmv_verifier::{verify, TestFunctionBasis, VerifierConfig};
use dmvlab::experiments::{run_sweep, ExperimentConfig, RunOptions};
use dmvlab::field::SolverKind;
use dmvlab::thermodynamics::{GasModel, PrimitiveState};
use dmvlab::young_measure::{concentration_estimate, measure_defect, DefectReport, YoungMeasureField};

/// Dirac measure of the advected contact wave `ρ₀(x − ut)` with constant `u`, `p`.
fn contact_wave(n: usize, intervals: usize) -> YoungMeasureField {
    let (u, p, gamma, t_end) = (0.5, 1.0, 5.0 / 3.0, 0.4);
    let times: Vec<f64> = (0..=intervals).map(|j| t_end * j as f64 / intervals as f64).collect();
    let atoms = times
        .iter()
        .map(|&t| {
            (0..n)
                .map(|i| {
                    let x = (i as f64 + 0.5) / n as f64;
                    let rho = 1.0 + 0.2 * (2.0 * PI * (x - u * t)).sin();
                    vec![[rho, rho * u, 0.5 * rho * u * u + p / (gamma - 1.0)]]
                })
                .collect()
        })
        .collect();
    YoungMeasureField::from_atoms(SolverKind::Nsf, vec![0.0], times, atoms).unwrap()
}

#[test]
fn exact_contact_wave_residuals_converge_at_second_order() {
    let model = GasModel::ideal_gas(1.5).unwrap();
    let cfg = VerifierConfig::default();
    let aggregates: Vec<(f64, f64)> = [(32, 8), (64, 16), (128, 32)]
        .iter()
        .map(|&(n, k)| {
            let y = contact_wave(n, k);
            let r = verify(&y, &measure_defect(&y), &model, &cfg).unwrap();
            (r.clause("MV1").unwrap().aggregate, r.clause("MV2").unwrap().aggregate)
        })
        .collect();
    for w in aggregates.windows(2) {
        let (r1, r2) = (w[0].0 / w[1].0, w[0].1 / w[1].1);
        assert!(r1 > 3.5 && r2 > 3.5, "refinement ratios {r1}, {r2} from {aggregates:?}");
    }
}

#[test]
fn ideal_gas_pressure_from_measure_matches_density_temperature() {
    let model = GasModel::ideal_gas(1.5).unwrap();
    let gamma = model.gamma();
    let states = [(1.0, 1.0, 0.3), (0.5, 2.0, -1.0), (2.0, 0.7, 0.0), (1.3, 1.1, 0.8)];
    let atoms: Vec<[f64; 3]> = states
        .iter()
        .map(|&(r, th, u)| {
            let c = model.primitive_to_conservative(&PrimitiveState::new(r, th, u)).unwrap();
            [c.rho, c.m, c.energy]
        })
        .collect();
    let y = YoungMeasureField::from_atoms(
        SolverKind::Nsf,
        vec![0.1, 0.05, 0.025, 0.0125],
        vec![0.0, 0.1],
        vec![vec![atoms.clone()], vec![atoms]],
    )
    .unwrap();
    let p = y.expectation(|a| (gamma - 1.0) * (a[2] - 0.5 * a[1] * a[1] / a[0]));
    let rho_theta: f64 = states.iter().map(|s| s.0 * s.1).sum::<f64>() / states.len() as f64;
    assert!((p[0][0] - rho_theta).abs() < 1e-13, "{} vs {rho_theta}", p[0][0]);
}

#[test]
fn concentration_ratio_scales_inversely_with_injected_defect() {
    let cfg: ExperimentConfig = small_config("nsf", "monatomic_degenerate");
    let outcome = run_sweep(&cfg, &RunOptions::default()).unwrap();
    let y = outcome.measure.unwrap();
    let base = measure_defect(&y);
    let basis = TestFunctionBasis::new(4, *y.times.last().unwrap());
    let gamma = cfg.model.build().unwrap().gamma();
    let r1 = concentration_estimate(&y, &base, &basis, gamma);
    for scale in [2.0, 10.0] {
        let scaled = DefectReport {
            defect: base.defect.iter().map(|d| d * scale).collect(),
            integrated: base.integrated.iter().map(|d| d * scale).collect(),
            ..base.clone()
        };
        let r2 = concentration_estimate(&y, &scaled, &basis, gamma);
        assert_eq!(r1.proxy, r2.proxy);
        for (a, b) in r1.ratio.iter().zip(&r2.ratio) {
            if let (Some(a), Some(b)) = (a, b) {
                assert!((a / b - scale).abs() < 1e-10 * scale, "{a} / {b}");
            }
        }
    }
}

#[test]
fn large_cap_renormalized_slack_matches_plain_entropy_slack() {
    let mut cfg = small_config("brenner", "ideal_gas");
    cfg.verifier.caps = vec![1e6];
    let outcome = run_sweep(&cfg, &RunOptions::default()).unwrap();
    let report = outcome.report.unwrap();
    let mv4 = report.clause("MV4").unwrap().aggregate;
    let mv6 = report.clause("MV6[M=1000000]").unwrap().aggregate;
    assert!((mv4 - mv6).abs() < 1e-6, "{mv4} vs {mv6}");
}

fn small_config(kind: &str, variant: &str) -> ExperimentConfig {
    let model = if variant == "ideal_gas" { "variant = \"ideal_gas\"\nc_v = 1.5" } else { "variant = \"monatomic_degenerate\"" };
    ExperimentConfig::from_toml_str(&format!(
        r#"
[model]
{model}

[solver]
kind = "{kind}"
n = 32
t_end = 0.1
snapshot_intervals = 8

[sweep]
epsilons = [0.1, 0.05, 0.025]
theta_bar = 0.9

[initial]
profile = "perturbed"
rho = 1.0
u = 0.0
theta = 1.0
amplitude = 0.1
mode = 1
"#
    ))
    .unwrap()
}
