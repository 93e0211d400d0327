use ddu_milp::*;
use proptest::prelude::*;

fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn lp_bounded_maximum() {
    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::continuous("x")).unwrap();
    m.add_constraint([(x, 1.0)], Sense::Le, 1.0, "cap").unwrap();
    m.add_objective(x, -1.0, "obj").unwrap();
    let r = solve_lp(&m).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!(approx(r.value(x), 1.0, 1e-12));
    assert!(approx(r.objective, -1.0, 1e-12));
}

#[test]
fn lp_infeasible_and_unbounded() {
    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::free("x")).unwrap();
    m.add_constraint([(x, 1.0)], Sense::Ge, 1.0, "lo").unwrap();
    m.add_constraint([(x, 1.0)], Sense::Le, 0.0, "hi").unwrap();
    m.add_objective(x, 1.0, "obj").unwrap();
    assert_eq!(solve_lp(&m).unwrap().status, SolveStatus::Infeasible);

    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::continuous("x")).unwrap();
    m.add_objective(x, -1.0, "obj").unwrap();
    assert_eq!(solve_lp(&m).unwrap().status, SolveStatus::Unbounded);
}

#[test]
fn empty_row_with_false_rhs_is_infeasible() {
    let mut m = MilpModel::new("t");
    let x = m.add_variable(VarSpec::continuous("x")).unwrap();
    m.add_objective(x, 1.0, "obj").unwrap();
    m.add_constraint(Vec::<(VarId, f64)>::new(), Sense::Le, -1.0, "empty")
        .unwrap();
    assert_eq!(solve_lp(&m).unwrap().status, SolveStatus::Infeasible);
    assert_eq!(
        solve_milp(&m, &MilpOptions::default()).unwrap().status,
        SolveStatus::Infeasible
    );
}

#[test]
fn registration_errors() {
    let mut m = MilpModel::new("t");
    let w = m.add_variable(VarSpec::binary("w_hy_3")).unwrap();
    assert_eq!(m.variable(w).lower, 0.0);
    assert_eq!(m.variable(w).upper, 1.0);
    let y = m.add_variable(VarSpec::continuous("y")).unwrap();
    assert_eq!(m.variable(y).upper, f64::INFINITY);
    assert!(matches!(
        m.add_variable(VarSpec::binary("w_hy_3")),
        Err(ModelError::DuplicateName(_))
    ));
    assert!(matches!(
        m.add_variable(VarSpec::continuous("z").bounds(2.0, 1.0)),
        Err(ModelError::InvertedBounds { .. })
    ));
    assert!(matches!(
        m.add_constraint([(w, f64::NAN)], Sense::Le, 1.0, "bad"),
        Err(ModelError::NonFiniteCoefficient { .. })
    ));
    assert!(m
        .add_constraint([(w, 1.0), (y, 1.0)], Sense::Le, 1.0, "ok")
        .is_ok());
}

#[test]
fn knapsack_picks_best_item() {
    let mut m = MilpModel::new("knap");
    let a = m.add_variable(VarSpec::binary("a")).unwrap();
    let b = m.add_variable(VarSpec::binary("b")).unwrap();
    m.add_constraint([(a, 1.0), (b, 1.0)], Sense::Le, 1.0, "cap")
        .unwrap();
    m.add_objective(a, -3.0, "v").unwrap();
    m.add_objective(b, -2.0, "v").unwrap();
    let r = solve_milp(&m, &MilpOptions::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!(approx(r.objective, -3.0, 1e-12));
    assert!(approx(r.value(a), 1.0, 1e-9));
}

#[test]
fn integral_relaxation_needs_no_branching() {
    let mut m = MilpModel::new("int");
    let a = m.add_variable(VarSpec::binary("a")).unwrap();
    let b = m.add_variable(VarSpec::binary("b")).unwrap();
    m.add_constraint([(a, 1.0), (b, 1.0)], Sense::Le, 2.0, "cap")
        .unwrap();
    m.add_objective(a, -1.0, "v").unwrap();
    m.add_objective(b, -1.0, "v").unwrap();
    let r = solve_milp(&m, &MilpOptions::default()).unwrap();
    assert_eq!(r.nodes, 1);
    assert!(approx(r.objective, -2.0, 1e-12));
}

#[test]
fn count_by_tag_prefix() {
    let mut m = MilpModel::new("tags");
    let x = m
        .add_variable(VarSpec::continuous("x").tag("eq44z"))
        .unwrap();
    for _ in 0..3 {
        m.add_constraint([(x, 1.0)], Sense::Le, 1.0, "eq44b")
            .unwrap();
    }
    m.add_constraint([(x, 1.0)], Sense::Le, 1.0, "eq45a")
        .unwrap();
    assert_eq!(m.count_by_tag("eq44"), (3, 1));
    assert_eq!(m.count_by_tag("eq4"), (4, 1));
    assert_eq!(m.count_by_tag("eq9"), (0, 0));
}

#[test]
fn node_limit_reports_incumbent_and_bound() {
    // Ten items with fractional capacity force branching.
    let mut m = MilpModel::new("limit");
    let xs: Vec<VarId> = (0..10)
        .map(|i| m.add_variable(VarSpec::binary(format!("x{i}"))).unwrap())
        .collect();
    let weights = [3.0, 5.0, 7.0, 2.0, 9.0, 4.0, 6.0, 8.0, 1.0, 5.5];
    m.add_constraint(
        xs.iter().zip(weights).map(|(&x, w)| (x, w)),
        Sense::Le,
        17.5,
        "cap",
    )
    .unwrap();
    for (i, &x) in xs.iter().enumerate() {
        m.add_objective(x, -(weights[i] + 0.3 * i as f64), "v")
            .unwrap();
    }
    let full = solve_milp(&m, &MilpOptions::default()).unwrap();
    assert_eq!(full.status, SolveStatus::Optimal);
    let opts = MilpOptions {
        node_limit: Some(3),
        ..MilpOptions::default()
    };
    let cut = solve_milp(&m, &opts).unwrap();
    assert_eq!(cut.status, SolveStatus::IterationLimit);
    assert!(cut.best_bound <= full.objective + 1e-9);
    if cut.has_solution() {
        assert!(cut.objective >= full.objective - 1e-9);
    }
}

/// Independent oracle: every binary pattern fixed by bounds, LP for the rest.
fn enumerate(model: &MilpModel) -> Option<f64> {
    let bins: Vec<VarId> = model
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.id)
        .collect();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << bins.len()) {
        let mut m = model.clone();
        for (k, &b) in bins.iter().enumerate() {
            let v = ((mask >> k) & 1) as f64;
            m.set_bounds(b, v, v).unwrap();
        }
        let r = solve_lp(&m).unwrap();
        if r.status == SolveStatus::Optimal {
            best = Some(best.map_or(r.objective, |b: f64| b.min(r.objective)));
        }
    }
    best
}

#[derive(Debug, Clone)]
struct RandomMilp {
    n_bin: usize,
    n_cont: usize,
    rows: Vec<(Vec<i32>, i32, u8)>,
    obj: Vec<i32>,
}

fn random_milp() -> impl Strategy<Value = RandomMilp> {
    (1usize..=8, 0usize..=3).prop_flat_map(|(n_bin, n_cont)| {
        let n = n_bin + n_cont;
        (
            proptest::collection::vec(
                (proptest::collection::vec(-5i32..=5, n), -4i32..=12, 0u8..3),
                1..=5,
            ),
            proptest::collection::vec(-6i32..=6, n),
        )
            .prop_map(move |(rows, obj)| RandomMilp {
                n_bin,
                n_cont,
                rows,
                obj,
            })
    })
}

fn to_model(r: &RandomMilp) -> MilpModel {
    let mut m = MilpModel::new("rand");
    let mut ids = Vec::new();
    for i in 0..r.n_bin {
        ids.push(m.add_variable(VarSpec::binary(format!("b{i}"))).unwrap());
    }
    for i in 0..r.n_cont {
        ids.push(
            m.add_variable(VarSpec::continuous(format!("c{i}")).bounds(0.0, 4.0))
                .unwrap(),
        );
    }
    for (coeffs, rhs, s) in &r.rows {
        let sense = [Sense::Le, Sense::Ge, Sense::Eq][*s as usize % 3];
        // Equality rows on random data are mostly infeasible; keep them rare.
        let sense = if sense == Sense::Eq && coeffs.iter().sum::<i32>() % 2 != 0 {
            Sense::Le
        } else {
            sense
        };
        m.add_constraint(
            ids.iter().zip(coeffs).map(|(&v, &a)| (v, a as f64)),
            sense,
            *rhs as f64,
            "row",
        )
        .unwrap();
    }
    for (&v, &c) in ids.iter().zip(&r.obj) {
        m.add_objective(v, c as f64, "obj").unwrap();
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn milp_matches_exhaustive_enumeration(r in random_milp()) {
        let m = to_model(&r);
        let res = solve_milp(&m, &MilpOptions::default()).unwrap();
        match enumerate(&m) {
            None => prop_assert_eq!(res.status, SolveStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(res.status, SolveStatus::Optimal);
                prop_assert!(approx(res.objective, best, 1e-8), "{} vs {}", res.objective, best);
                let (viol, integral) = m.check_assignment(&res.values, INTEGRALITY_TOL);
                prop_assert!(viol <= FEASIBILITY_TOL);
                prop_assert!(integral);
                let relax = solve_lp(&m).unwrap();
                prop_assert!(relax.objective <= res.objective + 1e-8);
            }
        }
    }

    #[test]
    fn milp_is_deterministic(r in random_milp()) {
        let m = to_model(&r);
        let a = solve_milp(&m, &MilpOptions::default()).unwrap();
        let b = solve_milp(&m, &MilpOptions::default()).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.values, b.values);
        prop_assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn lp_optimum_is_below_every_feasible_point(r in random_milp(), probe in proptest::collection::vec(0.0f64..1.0, 11)) {
        let m = to_model(&r);
        let relax = solve_lp(&m).unwrap();
        if relax.status == SolveStatus::Optimal {
            let point: Vec<f64> = m.variables().iter().enumerate()
                .map(|(i, v)| v.lower + probe[i] * (v.upper - v.lower)).collect();
            let (viol, _) = m.check_assignment(&point, f64::INFINITY);
            if viol <= FEASIBILITY_TOL {
                prop_assert!(m.evaluate_objective(&point) >= relax.objective - 1e-8);
            }
        }
    }
}
