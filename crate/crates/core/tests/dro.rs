use ddu_planner::dro::*;
use ddu_planner::instances;
use ddu_planner::network::CoupledNetwork;
use ddu_planner::PlanError;

fn net(name: &str) -> CoupledNetwork {
    instances::shipped(name).unwrap().unwrap()
}

fn cfg(n: &CoupledNetwork, mode: Mode, reduction: Reduction) -> PlanConfig {
    PlanConfig {
        reduction,
        ..PlanConfig::from_network(n, mode)
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// tiny2 with every scenario admitted by the traffic screen.
fn tiny2_all_feasible() -> CoupledNetwork {
    let mut n = net("tiny2");
    n.economics.annual_hfcv_demand = 700.0 * n.days_per_year;
    n
}

#[test]
fn full_and_comonotone_blocks_match_closed_forms() {
    let n = net("tiny2");
    for form in [EpigraphForm::Full, EpigraphForm::Comonotone] {
        let c = cfg(
            &n,
            Mode::DduDro,
            Reduction {
                form,
                bundling: false,
            },
        );
        let scen = prepare_scenarios(&n, c.mode, false).unwrap();
        let asm = assemble(&n, &scen, &c, Some(&[true, false])).unwrap();
        let rep = reformulation_report(&asm, &scen, c.reduction);
        assert_eq!(rep.matches_formula(), Some(true), "{form:?}: {rep:?}");
    }
}

#[test]
fn full_block_matches_closed_form_on_small4() {
    let n = net("small4");
    let c = cfg(
        &n,
        Mode::DiuDro,
        Reduction {
            form: EpigraphForm::Full,
            bundling: true,
        },
    );
    let scen = prepare_scenarios(&n, c.mode, true).unwrap();
    let asm = assemble(&n, &scen, &c, None).unwrap();
    let rep = reformulation_report(&asm, &scen, c.reduction);
    assert_eq!(rep.active, 15);
    assert_eq!(rep.matches_formula(), Some(true));
    let nn = 15.0;
    assert_eq!(rep.block.rows, 6.0 * nn * nn * 4.0 + nn);
}

#[test]
fn redundancy_form_is_smaller_than_full() {
    let n = net("tiny2");
    let scen = prepare_scenarios(&n, Mode::DiuDro, false).unwrap();
    let size = |form| {
        let c = cfg(
            &n,
            Mode::DiuDro,
            Reduction {
                form,
                bundling: false,
            },
        );
        reformulation_report(&assemble(&n, &scen, &c, None).unwrap(), &scen, c.reduction).block
    };
    let (full, red, com) = (
        size(EpigraphForm::Full),
        size(EpigraphForm::Redundancy),
        size(EpigraphForm::Comonotone),
    );
    assert!(red.rows < full.rows && com.rows < red.rows);
    assert!(red.vars < full.vars);
}

#[test]
fn every_row_and_column_is_tagged() {
    let n = net("tiny2");
    let c = PlanConfig {
        bilinear: Bilinear::McCormick,
        ..cfg(&n, Mode::DduDro, Reduction::NONE)
    };
    let scen = prepare_scenarios(&n, c.mode, false).unwrap();
    let asm = assemble(&n, &scen, &c, None).unwrap();
    let m = &asm.model;
    assert!(m.variables().iter().all(|v| !v.tag.is_empty()));
    assert!(m.constraints().iter().all(|r| !r.tag.is_empty()));
    let tags = m.tags();
    for t in [
        "eq03", "eq07", "eq08", "eq09", "eq17", "eq18", "eq19", "eq20", "eq41a", "eq42mc",
        "eq42psi", "eq44b", "eq44c",
    ] {
        assert!(tags.iter().any(|x| x == t), "missing {t} in {tags:?}");
    }
    for t in ["eq02", "eq57a"] {
        assert!(
            m.objective_terms().iter().any(|o| o.tag.starts_with(t)),
            "objective lacks {t}"
        );
    }
    assert!(asm.shaping.is_some());
    assert_eq!(asm.envelope.len(), scen.units.len());
}

#[test]
fn siting_must_cover_every_node() {
    let n = net("tiny2");
    let c = cfg(&n, Mode::DduDro, Reduction::ALL);
    let scen = prepare_scenarios(&n, c.mode, true).unwrap();
    assert!(matches!(
        assemble(&n, &scen, &c, Some(&[true])),
        Err(PlanError::Options(_))
    ));
}

#[test]
fn invalid_options_are_rejected() {
    let n = net("tiny2");
    for bad in [
        PlanConfig {
            radius: -1.0,
            ..PlanConfig::from_network(&n, Mode::DduDro)
        },
        PlanConfig {
            beta: 1.5,
            ..PlanConfig::from_network(&n, Mode::DduDro)
        },
        PlanConfig {
            traffic_segments: 0,
            ..PlanConfig::from_network(&n, Mode::DduDro)
        },
    ] {
        assert!(matches!(solve_plan(&n, &bad), Err(PlanError::Options(_))));
    }
}

#[test]
fn mode_ordering_on_tiny2() {
    let n = net("tiny2");
    let base = PlanConfig::from_network(&n, Mode::So);
    let got: Vec<(Mode, f64)> = compare_modes(&n, &base)
        .into_iter()
        .map(|(m, r)| (m, r.unwrap().total_cost))
        .collect();
    let v = |m: Mode| got.iter().find(|x| x.0 == m).unwrap().1;
    assert!(v(Mode::So) <= v(Mode::DiuDro) + 1e-6);
    assert!(v(Mode::DiuDro) <= v(Mode::Ro) + 1e-6);
}

#[test]
fn solution_accounting_is_consistent() {
    let n = net("tiny2");
    let s = solve_plan(&n, &PlanConfig::from_network(&n, Mode::DduDro)).unwrap();
    let sum: f64 = s.breakdown.iter().map(|b| b.1).sum();
    assert!(close(sum, s.total_cost, 1e-9));
    assert!(close(
        s.investment_cost() + s.operation_cost(),
        s.total_cost,
        1e-9
    ));
    assert!(close(s.objective, s.total_cost, 1e-6));
    assert!(close(s.worst_case.iter().sum::<f64>(), 1.0, 1e-9));
    assert!(close(s.empirical.iter().sum::<f64>(), 1.0, 1e-9));
    assert!(s.transport <= n.ambiguity.radius + 1e-6);
    assert!(s.certificates.ok(), "{:?}", s.certificates);
    assert_eq!(s.models_solved, 4);
}

#[test]
fn worst_case_of_the_solution_matches_a_fresh_transport_lp() {
    let n = net("tiny2");
    let s = solve_plan(&n, &PlanConfig::from_network(&n, Mode::DiuDro)).unwrap();
    let wc = worst_case_distribution(&s.scenarios, &s.empirical, &s.outcomes, n.ambiguity.radius)
        .unwrap();
    let expected: f64 = wc
        .probabilities
        .iter()
        .zip(&s.outcomes)
        .map(|(p, h)| p * h)
        .sum();
    assert!(close(wc.value, expected, 1e-9));
    let from_solution: f64 = s
        .worst_case
        .iter()
        .zip(&s.outcomes)
        .map(|(p, h)| p * h)
        .sum();
    assert!(close(wc.value, from_solution, 1e-7));
}

#[test]
fn reductions_leave_the_optimum_unchanged_on_tiny2() {
    let n = net("tiny2");
    let reference = solve_plan(&n, &cfg(&n, Mode::DduDro, Reduction::NONE)).unwrap();
    for r in ["redundancy", "comonotone", "bundling", "all"] {
        let s = solve_plan(&n, &cfg(&n, Mode::DduDro, r.parse().unwrap())).unwrap();
        assert!(
            close(s.objective, reference.objective, 1e-6),
            "{r}: {} vs {}",
            s.objective,
            reference.objective
        );
    }
}

#[test]
fn envelope_bound_brackets_the_enumerated_optimum() {
    let n = net("tiny2");
    let en = solve_plan(&n, &PlanConfig::from_network(&n, Mode::DduDro)).unwrap();
    let mc = solve_plan(
        &n,
        &PlanConfig {
            bilinear: Bilinear::McCormick,
            ..PlanConfig::from_network(&n, Mode::DduDro)
        },
    )
    .unwrap();
    assert!(mc.objective <= en.objective + 1e-6 * en.objective);
    assert!(en.objective <= mc.total_cost + 1e-6 * en.objective);
    assert!(close(mc.total_cost - mc.objective, mc.envelope_gap, 1e-6));
}

#[test]
fn zero_radius_with_unmoved_probabilities_is_stochastic() {
    let mut n = net("tiny2");
    for node in &mut n.hydrogen.nodes {
        node.p1 = node.p0.clone();
    }
    let so = solve_plan(&n, &PlanConfig::from_network(&n, Mode::So)).unwrap();
    let ddu = solve_plan(
        &n,
        &PlanConfig {
            radius: 0.0,
            ..PlanConfig::from_network(&n, Mode::DduDro)
        },
    )
    .unwrap();
    assert!(
        close(so.objective, ddu.objective, 1e-6),
        "{} vs {}",
        so.objective,
        ddu.objective
    );
}

#[test]
fn large_radius_reaches_the_robust_plan() {
    let n = tiny2_all_feasible();
    let scen = prepare_scenarios(&n, Mode::Ro, false).unwrap();
    assert!(scen.feasible.iter().all(|&f| f));
    let ro = solve_plan(&n, &PlanConfig::from_network(&n, Mode::Ro)).unwrap();
    let d = scen.support.diameter();
    for mode in [Mode::DiuDro, Mode::DduDro] {
        let s = solve_plan(
            &n,
            &PlanConfig {
                radius: d,
                ..PlanConfig::from_network(&n, mode)
            },
        )
        .unwrap();
        assert!(
            close(s.objective, ro.objective, 1e-6),
            "{mode}: {} vs {}",
            s.objective,
            ro.objective
        );
    }
}

#[test]
fn radius_sweep_is_monotone_for_the_independent_case() {
    let n = net("tiny2");
    let radii = [0.0, 50.0, 100.0, 200.0];
    let sweep = radius_sweep(&n, &PlanConfig::from_network(&n, Mode::DiuDro), &radii);
    let v: Vec<f64> = sweep
        .into_iter()
        .map(|(_, r)| r.unwrap().objective)
        .collect();
    assert!(v.windows(2).all(|w| w[0] <= w[1] + 1e-6 * w[1]), "{v:?}");
}

#[test]
fn mode_and_reduction_names_round_trip() {
    for m in Mode::ALL {
        assert_eq!(m.label().parse::<Mode>().unwrap(), m);
    }
    for r in ["none", "redundancy", "comonotone", "bundling", "all"] {
        assert_eq!(r.parse::<Reduction>().unwrap().label(), r);
    }
    assert!("fast".parse::<Reduction>().is_err());
    assert!("exact".parse::<Bilinear>().is_err());
}
