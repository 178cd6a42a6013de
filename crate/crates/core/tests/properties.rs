use hammock::closed_form::resistance_general;
use hammock::numeric::relative_deviation as rel;
use hammock::oracle::resistance_dense;
use hammock::recursion::{potential_path_check, reconstruct_currents, resistance_rt};
use hammock::spectral::resistance_spectral;
use hammock::{Arithmetic, DenseCaps, HammockSpec, NodeRef};
use proptest::prelude::*;

fn instance(max: usize) -> impl Strategy<Value = (HammockSpec, NodeRef, NodeRef)> {
    (1..=max, 1..=max, 0.05f64..20.0, 0.05f64..20.0)
        .prop_flat_map(|(m, n, r, s)| {
            let spec = HammockSpec::new(m, n, r, s).unwrap();
            (Just(spec), 1..=n, 1..=m, 1..=n, 1..=m)
        })
        .prop_map(|(spec, x1, y1, x2, y2)| (spec, NodeRef::interior(x1, y1), NodeRef::interior(x2, y2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn methods_agree((spec, a, b) in instance(14)) {
        let closed = resistance_general(&spec, a, b).unwrap().ohms;
        let spectral = resistance_spectral(&spec, a, b).unwrap().ohms;
        let rt = resistance_rt(&spec, a, b).unwrap().ohms;
        prop_assert!(rel(closed, spectral) < 1e-10, "{closed} vs {spectral}");
        prop_assert!(rel(closed, rt) < 1e-10, "{closed} vs {rt}");
    }

    #[test]
    fn float_oracle_agrees((spec, a, b) in instance(7)) {
        let closed = resistance_general(&spec, a, b).unwrap().ohms;
        let dense = resistance_dense(&spec, a, b, Arithmetic::Float, DenseCaps::default()).unwrap().ohms;
        prop_assert!(rel(closed, dense) < 1e-9, "{closed} vs {dense}");
    }

    #[test]
    fn positive_and_symmetric((spec, a, b) in instance(20)) {
        let ab = resistance_general(&spec, a, b).unwrap().ohms;
        let ba = resistance_general(&spec, b, a).unwrap().ohms;
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!(ab.is_finite());
        prop_assert_eq!(ab == 0.0, a == b);
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn homogeneous((spec, a, b) in instance(10), c in 0.01f64..100.0) {
        let base = resistance_rt(&spec, a, b).unwrap().ohms;
        let scaled = resistance_rt(&spec.scaled(c).unwrap(), a, b).unwrap().ohms;
        prop_assert!(rel(scaled, c * base) < 1e-12);
    }

    #[test]
    fn bounded_by_direct_paths((spec, a, b) in instance(12)) {
        // Rayleigh: removing resistors never lowers R, so any single path bounds it.
        let (NodeRef::Interior { x: x1, y: y1 }, NodeRef::Interior { x: x2, y: y2 }) = (a, b) else { unreachable!() };
        let staircase = spec.r() * x1.abs_diff(x2) as f64 + spec.s() * y1.abs_diff(y2) as f64;
        let r = resistance_general(&spec, a, b).unwrap().ohms;
        prop_assert!(r <= staircase * (1.0 + 1e-12));
    }

    #[test]
    fn monotone_in_resistors((spec, a, b) in instance(8), bump in 1.0f64..4.0) {
        let base = resistance_general(&spec, a, b).unwrap().ohms;
        let more_r = HammockSpec::new(spec.rows(), spec.cols(), spec.r() * bump, spec.s()).unwrap();
        let more_s = HammockSpec::new(spec.rows(), spec.cols(), spec.r(), spec.s() * bump).unwrap();
        prop_assert!(resistance_general(&more_r, a, b).unwrap().ohms >= base * (1.0 - 1e-12));
        prop_assert!(resistance_general(&more_s, a, b).unwrap().ohms >= base * (1.0 - 1e-12));
    }

    #[test]
    fn field_obeys_circuit_laws((spec, a, b) in instance(9), j in -50.0f64..50.0) {
        if a == b || j.abs() < 1e-3 {
            return Ok(());
        }
        let field = reconstruct_currents(&spec, a, b, j).unwrap();
        let audit = field.kirchhoff_audit();
        prop_assert!(audit.max_node_imbalance <= 1e-10 * j.abs(), "{audit:?}");
        prop_assert!(audit.max_rail_mismatch <= 1e-10 * j.abs(), "{audit:?}");
        prop_assert!(field.recurrence_residual() <= 1e-10 * j.abs());
        let (rail, stair) = potential_path_check(&field, a, b).unwrap();
        let want = resistance_general(&spec, a, b).unwrap().ohms;
        prop_assert!(rel(rail, want) < 1e-9, "{rail} vs {want}");
        prop_assert!(rel(stair, want) < 1e-9, "{stair} vs {want}");
    }

    #[test]
    fn field_energy_matches_resistance((spec, a, b) in instance(8)) {
        if a == b {
            return Ok(());
        }
        // Power dissipated with 1 A equals R.
        let field = reconstruct_currents(&spec, a, b, 1.0).unwrap();
        let vertical: f64 = field.columns.iter().flatten().map(|i| i * i * spec.s()).sum();
        let horizontal: f64 = field.horizontal_currents().iter().flatten().map(|i| i * i * spec.r()).sum();
        let want = resistance_general(&spec, a, b).unwrap().ohms;
        prop_assert!(rel(vertical + horizontal, want) < 1e-9);
    }
}
