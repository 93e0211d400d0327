use ddu_milp::*;
use proptest::prelude::*;

#[test]
fn simplex_corner_ranges() {
    // x + y + z = 1, x ≤ 0.2, y ≥ 0.5
    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::continuous("x").upper(1.0)).unwrap();
    let y = m.add_variable(VarSpec::continuous("y").upper(1.0)).unwrap();
    let z = m.add_variable(VarSpec::continuous("z").upper(1.0)).unwrap();
    m.add_constraint([(x, 1.0), (y, 1.0), (z, 1.0)], Sense::Eq, 1.0, "sum")
        .unwrap();
    m.add_constraint([(x, 1.0)], Sense::Le, 0.2, "x").unwrap();
    m.add_constraint([(y, 1.0)], Sense::Ge, 0.5, "y").unwrap();
    let r = lp_upper_ranges(&m, &[x, y, z]).unwrap();
    assert!((r[0] - 0.2).abs() < 1e-12);
    assert!((r[1] - 1.0).abs() < 1e-12);
    assert!((r[2] - 0.5).abs() < 1e-12);
}

#[test]
fn unbounded_target_is_rejected() {
    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::continuous("x")).unwrap();
    assert!(lp_upper_ranges(&m, &[x]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Warm-started ranges against one cold maximization per variable.
    #[test]
    fn ranges_match_cold_solves(
        rows in proptest::collection::vec(
            (proptest::collection::vec(-3i32..4, 4), 1i32..8),
            1..5,
        ),
    ) {
        let mut m = MilpModel::new("t");
        let vars: Vec<VarId> = (0..4)
            .map(|i| m.add_variable(VarSpec::continuous(format!("x{i}")).upper(2.0)).unwrap())
            .collect();
        for (k, (coef, rhs)) in rows.iter().enumerate() {
            let terms: Vec<(VarId, f64)> =
                vars.iter().zip(coef).map(|(&v, &a)| (v, a as f64)).collect();
            m.add_constraint(terms, Sense::Le, *rhs as f64, format!("r{k}")).unwrap();
        }
        let warm = lp_upper_ranges(&m, &vars).unwrap();
        for (i, &v) in vars.iter().enumerate() {
            let mut cold = m.clone();
            cold.clear_objective();
            cold.add_objective(v, -1.0, "max").unwrap();
            let r = solve_lp(&cold).unwrap();
            prop_assert_eq!(r.status, SolveStatus::Optimal);
            prop_assert!((warm[i] - r.value(v)).abs() <= 1e-7, "{} vs {}", warm[i], r.value(v));
        }
    }
}
