use ddu_planner::instances;
use ddu_planner::network::*;
use proptest::prelude::*;

fn tiny2_doc() -> &'static str {
    instances::document("tiny2").unwrap()
}

#[test]
fn shipped_instances_load_and_validate() {
    for (name, doc) in instances::SHIPPED {
        let net = load_config(doc).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(net.name, name);
        assert!(validate(&net).is_empty());
    }
}

#[test]
fn shipped_instance_sizes() {
    let sizes: Vec<(usize, usize)> = instances::SHIPPED
        .iter()
        .map(|(_, d)| {
            let net = load_config(d).unwrap();
            let scenarios = net.hydrogen.nodes.iter().map(|n| n.levels.len()).product();
            (net.num_nodes(), scenarios)
        })
        .collect();
    assert_eq!(sizes, vec![(2, 4), (4, 81), (6, 64), (8, 256)]);
}

#[test]
fn missing_key_is_named() {
    let doc = tiny2_doc().replace("days_per_year = 365.0\n", "");
    let err = load_config(&doc).unwrap_err().to_string();
    assert!(err.contains("days_per_year"), "{err}");
}

#[test]
fn probabilities_not_summing_to_one_are_rejected() {
    let doc = tiny2_doc().replacen("p0 = [0.6, 0.4]", "p0 = [0.6, 0.3]", 1);
    match load_config(&doc) {
        Err(ConfigError::Invalid(errors)) => {
            assert!(errors.iter().any(|e| e.contains("p0")), "{errors:?}")
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn toml_round_trip() {
    let net = load_config(tiny2_doc()).unwrap();
    assert_eq!(load_config(&net.to_toml()).unwrap(), net);
}

#[test]
fn unknown_unit_annotation_is_rejected() {
    let doc = tiny2_doc().replace("mass = \"kg\"", "mass = \"lb\"");
    assert!(matches!(load_config(&doc), Err(ConfigError::Invalid(_))));
}

#[test]
fn daily_demand_and_p2g_yield() {
    let net = load_config(tiny2_doc()).unwrap();
    assert_eq!(net.daily_hfcv_demand(), 650.0);
    assert!((net.hydrogen.p2g_yield() - 0.79 * 28.7).abs() < 1e-12);
}

#[test]
fn bpr_delay_at_capacity() {
    assert!((bpr_delay(5.0, 60.0, 60.0) - 0.15 * 5.0 * 60.0).abs() < 1e-12);
    assert_eq!(bpr_delay(5.0, 60.0, 0.0), 0.0);
}

#[test]
fn quadratic_secant_slopes() {
    let s = power_secant_slopes(2, 200.0, 4);
    let expected: Vec<f64> = (1..=4).map(|k| (2 * k - 1) as f64 * 50.0).collect();
    assert_eq!(s, expected);
}

#[test]
fn weymouth_closed_forms() {
    let g = PipeGeometry {
        diameter: 0.5,
        length: 1000.0,
        efficiency: 0.9,
        density: 0.08,
        compressibility: 1.0,
        gas_constant: 4124.0,
        temperature: 288.0,
    };
    let pi = std::f64::consts::PI;
    let f = 4.0 / (20.621 * 0.5f64.powf(1.0 / 6.0)).powi(2);
    assert!((weymouth_friction(0.5) - f).abs() < 1e-15);
    let phi = 0.9 * pi * pi * 0.5f64.powi(5) / (16.0 * 0.08 * 0.08 * 4124.0 * 288.0 * 1000.0 * f);
    assert!((weymouth_constant(&g).unwrap() - phi).abs() <= 1e-12 * phi);
    let psi = pi * 0.25 * 1000.0 / (4.0 * 0.08 * 4124.0 * 288.0);
    assert!((linepack_constant(&g).unwrap() - psi).abs() <= 1e-12 * psi);
    let bad = PipeGeometry { diameter: 0.0, ..g };
    assert!(weymouth_constant(&bad).is_err());
}

#[test]
fn demand_profile_splits_the_daily_total() {
    let p = demand_profile(&[0.25, 0.75], 3650.0, 365.0, &[1.0, 3.0]).unwrap();
    assert_eq!(p, vec![vec![0.625, 1.875], vec![1.875, 5.625]]);
    assert!(demand_profile(&[1.0], 1.0, 365.0, &[0.0, 0.0]).is_err());
}

proptest! {
    #[test]
    fn hourly_realization_sums_to_level(
        level in 0.0f64..1000.0,
        trip in proptest::collection::vec(0.1f64..5.0, 1..12),
    ) {
        let h = hourly_realization(level, &trip);
        prop_assert!((h.iter().sum::<f64>() - level).abs() <= 1e-9 * (1.0 + level));
    }

    // A secant interpolant of a convex map lies above it and touches it at
    // the knots.
    #[test]
    fn piecewise_overestimates_convex_powers(
        exponent in prop_oneof![Just(2i32), Just(5i32)],
        range in 1.0f64..200.0,
        segments in 1usize..25,
        t in 0.0f64..1.0,
    ) {
        let slopes = power_secant_slopes(exponent, range, segments);
        let w = range / segments as f64;
        let x = t * range;
        let exact = x.powi(exponent);
        let scale = range.powi(exponent);
        prop_assert!(piecewise_value(&slopes, w, x) >= exact - 1e-12 * scale);
        let k = (t * segments as f64).floor();
        let knot = k * w;
        prop_assert!((piecewise_value(&slopes, w, knot) - knot.powi(exponent)).abs() <= 1e-9 * scale);
    }
}
