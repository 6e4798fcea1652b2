use dmvlab::dmv_verifier::{residual_continuity, TestFunctionBasis};
use dmvlab::field::{snapshots_from_csv, snapshots_to_csv, Snapshot, SolverKind};
use dmvlab::relative_energy::{identity_audit, relative_energy_conservative, relative_energy_primitive, sample_state_pairs};
use dmvlab::thermodynamics::{GasModel, PrimitiveState};
use dmvlab::young_measure::{flux_defect, YoungMeasureField};
use dmvlab::z_m;
use proptest::prelude::*;

fn ideal() -> GasModel {
    GasModel::ideal_gas(1.5).unwrap()
}

fn degenerate() -> GasModel {
    GasModel::monatomic_degenerate(1.0, 1e-10).unwrap()
}

fn state() -> impl Strategy<Value = PrimitiveState> {
    (0.2f64..5.0, 0.2f64..5.0, -2.0f64..2.0).prop_map(|(rho, theta, u)| PrimitiveState::new(rho, theta, u))
}

/// Keeps `ρ/θ^{3/2}` below about 10, where the degenerate temperature
/// inversion still resolves the thermal part above the cold curve.
fn moderate_state() -> impl Strategy<Value = PrimitiveState> {
    (0.2f64..3.0, 0.5f64..5.0, -2.0f64..2.0).prop_map(|(rho, theta, u)| PrimitiveState::new(rho, theta, u))
}

/// Random measure: `times × n` cells with `k` positive-density atoms each.
fn measure(n: usize, times: usize, k: usize) -> impl Strategy<Value = YoungMeasureField> {
    let atom = (0.5f64..2.0, -1.0f64..1.0, 0.5f64..1.5).prop_map(|(r, u, e)| [r, r * u, r * (e + 0.5 * u * u)]);
    proptest::collection::vec(atom, times * n * k).prop_map(move |flat| {
        let atoms = (0..times)
            .map(|t| (0..n).map(|x| flat[(t * n + x) * k..(t * n + x + 1) * k].to_vec()).collect())
            .collect();
        let ts = (0..times).map(|j| 0.1 * j as f64).collect();
        let eps = (0..k).map(|j| 0.1 / 2f64.powi(j as i32)).collect();
        YoungMeasureField::from_atoms(SolverKind::Nsf, eps, ts, atoms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn relative_energy_is_nonnegative_ideal(s in state(), r in state()) {
        let v = relative_energy_primitive(&ideal(), &s, &r).unwrap().value.finite().unwrap();
        prop_assert!(v >= -1e-12 * (1.0 + s.rho * s.theta));
    }

    #[test]
    fn relative_energy_is_nonnegative_degenerate(s in moderate_state(), r in moderate_state()) {
        let m = degenerate();
        let cs = m.primitive_to_conservative(&s).unwrap();
        let cr = m.primitive_to_conservative(&r).unwrap();
        let v = relative_energy_conservative(&m, &cs, &cr).unwrap().value.finite().unwrap();
        prop_assert!(v >= -1e-8 * (1.0 + cs.energy));
    }

    #[test]
    fn relative_energy_vanishes_on_the_diagonal(s in moderate_state()) {
        for m in [ideal(), degenerate()] {
            let v = relative_energy_primitive(&m, &s, &s).unwrap().value.finite().unwrap();
            prop_assert!(v.abs() < 1e-9 * (1.0 + s.rho * s.theta), "{v}");
        }
    }

    #[test]
    fn primitive_conservative_round_trip(s in moderate_state()) {
        for m in [ideal(), degenerate()] {
            let c = m.primitive_to_conservative(&s).unwrap();
            prop_assert!((c.velocity() - s.u).abs() < 1e-12 * (1.0 + s.u.abs()));
            let theta = m.temperature_from_conservative(&c, 0.0).unwrap();
            prop_assert!((theta - s.theta).abs() < 1e-8 * s.theta, "{theta} vs {}", s.theta);
        }
    }

    #[test]
    fn continuity_residual_is_linear_in_the_test_function(y in measure(6, 4, 3), scale in -5.0f64..5.0) {
        let basis = TestFunctionBasis::new(2, 0.3).members();
        let scaled: Vec<_> = basis.iter().map(|phi| phi.scaled(scale)).collect();
        for (a, b) in residual_continuity(&y, &basis).iter().zip(residual_continuity(&y, &scaled)) {
            for (va, vb) in a.values.iter().zip(&b.values) {
                prop_assert!((scale * va - vb).abs() <= 1e-12 * (1.0 + vb.abs()));
            }
        }
    }

    #[test]
    fn expectation_is_monotone(y in measure(5, 3, 4), shift in 0.0f64..1.0) {
        let low = y.expectation(|a| a[0]);
        let high = y.expectation(|a| a[0] + shift * a[2].abs());
        for (l, h) in low.iter().flatten().zip(high.iter().flatten()) {
            prop_assert!(l <= h);
        }
    }

    #[test]
    fn momentum_flux_gap_is_nonnegative(y in measure(5, 3, 4), gamma in 1.1f64..2.9) {
        for v in flux_defect(&y, gamma).iter().flatten() {
            prop_assert!(*v >= -1e-12);
        }
    }

    #[test]
    fn renormalization_is_concave_and_below_identity(s in -20.0f64..50.0, cap in 0.5f64..1e3) {
        let (z, dz, ddz) = z_m(s, cap);
        prop_assert!(z <= s + 1e-12 * s.abs().max(1.0));
        prop_assert!(dz > 0.0 && ddz < 0.0);
        prop_assert!(z < cap);
        prop_assert_eq!(z_m(0.0, cap).0, 0.0);
    }

    #[test]
    fn renormalization_recovers_identity_for_large_caps(s in -10.0f64..10.0) {
        let (z, dz, _) = z_m(s, 1e9);
        prop_assert!((z - s).abs() < 1e-7);
        prop_assert!((dz - 1.0).abs() < 1e-7);
    }

    #[test]
    fn snapshot_csv_round_trip(vals in proptest::collection::vec(-1e6f64..1e6, 5 * 7), t in 0.0f64..10.0) {
        let col = |k: usize| vals[k * 7..(k + 1) * 7].to_vec();
        let snap = Snapshot { t, rho: col(0), m: col(1), energy: col(2), theta: col(3), u: col(4) };
        let text = snapshots_to_csv(std::slice::from_ref(&snap));
        prop_assert_eq!(snapshots_from_csv(text.as_bytes()).unwrap(), vec![snap]);
    }

    #[test]
    fn measure_ndjson_round_trip(y in measure(4, 3, 3)) {
        let mut buf = Vec::new();
        y.write_ndjson(&mut buf).unwrap();
        prop_assert_eq!(YoungMeasureField::read_ndjson(buf.as_slice()).unwrap(), y);
    }
}

#[test]
fn relative_energy_nonnegative_on_ten_thousand_seeded_pairs() {
    for m in [ideal(), degenerate()] {
        let rows = identity_audit(&m, &sample_state_pairs(7, 10_000)).unwrap();
        let worst = rows.iter().map(|r| r.primitive.min(r.conservative)).fold(f64::INFINITY, f64::min);
        assert!(worst >= -1e-10, "{worst}");
    }
}
