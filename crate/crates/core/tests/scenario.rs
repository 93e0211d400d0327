use ddu_planner::instances;
use ddu_planner::oracle::{probability_oracle, shaping_range};
use ddu_planner::scenario::*;
use proptest::prelude::*;

fn sitings(nb: usize) -> Vec<Vec<bool>> {
    (0..1usize << nb)
        .map(|m| (0..nb).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Random support with 1..=3 nodes and 1..=3 levels per node.
fn random_support() -> impl Strategy<Value = ScenarioSupport> {
    proptest::collection::vec(1usize..=3, 1..=3).prop_flat_map(|sizes| {
        let per_node: Vec<_> = sizes
            .iter()
            .map(|&s| {
                (
                    proptest::collection::vec(1.0f64..50.0, s),
                    proptest::collection::vec(0.05f64..1.0, s),
                    proptest::collection::vec(0.0f64..1.0, s),
                )
            })
            .collect();
        per_node.prop_map(|nodes| {
            let mut levels = Vec::new();
            let mut p0 = Vec::new();
            let mut p1 = Vec::new();
            for (steps, a, b) in nodes {
                let mut acc = 0.0;
                levels.push(
                    steps
                        .iter()
                        .map(|s| {
                            acc += s;
                            acc
                        })
                        .collect(),
                );
                let norm = |v: &[f64]| {
                    let t: f64 = v.iter().sum();
                    if t > 0.0 {
                        v.iter().map(|x| x / t).collect()
                    } else {
                        vec![1.0 / v.len() as f64; v.len()]
                    }
                };
                p0.push(norm(&a));
                p1.push(norm(&b));
            }
            ScenarioSupport::new(levels, p0, p1, vec![1.0, 2.0]).unwrap()
        })
    })
}

#[test]
fn lexicographic_order_first_node_most_significant() {
    assert_eq!(
        lexicographic_tuples(&[2, 3]),
        vec![
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![1, 0],
            vec![1, 1],
            vec![1, 2]
        ]
    );
}

#[test]
fn tiny2_screen() {
    let net = instances::shipped("tiny2").unwrap().unwrap();
    let s = ScenarioSupport::from_network(&net).unwrap();
    // Only (400, 300) exceeds the daily demand of 650.
    assert_eq!(
        screen_feasible(&s, &net).unwrap(),
        vec![true, true, true, false]
    );
}

/// Capture is feasible only if every node set S can be served by the OD
/// pairs whose paths pass a station in S (Hall's condition per period,
/// with paths chosen freely inside each pair).
fn hall_admits(net: &ddu_planner::network::CoupledNetwork, totals: &[f64]) -> bool {
    let nodes = &net.hydrogen.nodes;
    let daily = net.daily_hfcv_demand();
    for t in 0..net.hours {
        let q: f64 = net.traffic.od.iter().map(|od| od.hfcv[t]).sum();
        for mask in 1usize..(1 << nodes.len()) {
            let inside = |id: &str| {
                nodes
                    .iter()
                    .enumerate()
                    .any(|(i, n)| mask >> i & 1 == 1 && n.id == id)
            };
            let need: f64 = (0..nodes.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| totals[i] * q / daily)
                .sum();
            let reach: f64 = net
                .traffic
                .od
                .iter()
                .filter(|od| {
                    od.paths
                        .iter()
                        .any(|p| p.stations.iter().any(|s| inside(s)))
                })
                .map(|od| od.hfcv[t])
                .sum();
            if need > reach + 1e-9 {
                return false;
            }
        }
    }
    true
}

#[test]
fn screens_match_hall_condition() {
    for name in ["tiny2", "small4"] {
        let net = instances::shipped(name).unwrap().unwrap();
        let s = ScenarioSupport::from_network(&net).unwrap();
        let feasible = screen_feasible(&s, &net).unwrap();
        let hall: Vec<bool> = (0..s.len())
            .map(|n| hall_admits(&net, &s.daily_totals(n)))
            .collect();
        assert_eq!(feasible, hall, "{name}");
    }
}

#[test]
fn small4_screen_census() {
    let net = instances::shipped("small4").unwrap().unwrap();
    let s = ScenarioSupport::from_network(&net).unwrap();
    let feasible = screen_feasible(&s, &net).unwrap();
    let daily = net.daily_hfcv_demand();
    let over_total: Vec<usize> = (0..s.len())
        .filter(|&n| s.daily_totals(n).iter().sum::<f64>() > daily)
        .collect();
    let infeasible: Vec<usize> = (0..s.len()).filter(|&n| !feasible[n]).collect();
    assert_eq!(infeasible.len(), 66);
    assert_eq!(over_total.len(), 64);
    // Within the total, only A + C (stations seen by od1 alone) can
    // overflow: (200, 100, 160, 80) and (300, 100, 80, 80).
    let extra: Vec<usize> = infeasible
        .iter()
        .copied()
        .filter(|n| !over_total.contains(n))
        .collect();
    assert_eq!(extra, vec![30, 54]);
}

#[test]
fn small4_bundling_shrinks_the_unit_count() {
    let net = instances::shipped("small4").unwrap().unwrap();
    let s = ScenarioSupport::from_network(&net).unwrap();
    let feasible = screen_feasible(&s, &net).unwrap();
    let identity = bundle_scenarios(&s, &feasible, false).unwrap();
    let bundled = bundle_scenarios(&s, &feasible, true).unwrap();
    assert_eq!(identity.len(), 81);
    assert_eq!(bundled.num_active(), 15);
    assert_eq!(bundled.len(), 29);
}

#[test]
fn restriction_renormalizes() {
    let net = instances::shipped("small4").unwrap().unwrap();
    let s = ScenarioSupport::from_network(&net).unwrap();
    let r = s.restrict_levels(&vec![vec![0, 1]; 4]).unwrap();
    assert_eq!(r.len(), 16);
    for i in 0..4 {
        assert!((r.p0(i).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((r.p0(i)[0] - 0.7 / 0.9).abs() < 1e-15);
    }
    assert!(s.restrict_levels(&vec![vec![]; 4]).is_err());
}

#[test]
fn comonotonicity_depends_on_order() {
    let levels = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
    let p = vec![vec![0.5, 0.5]; 2];
    let lex = ScenarioSupport::new(levels.clone(), p.clone(), p.clone(), vec![1.0]).unwrap();
    assert!(lex.is_comonotone());
    let shuffled = vec![vec![1, 1], vec![0, 0], vec![0, 1], vec![1, 0]];
    let other = ScenarioSupport::with_order(levels, p.clone(), p, vec![1.0], shuffled).unwrap();
    assert!(!other.is_comonotone());
}

#[test]
fn zero_baseline_probability_is_rejected() {
    let r = ScenarioSupport::new(
        vec![vec![1.0, 2.0]],
        vec![vec![1.0, 0.0]],
        vec![vec![0.5, 0.5]],
        vec![1.0],
    );
    assert!(matches!(r, Err(ScenarioError::ZeroBaseline { .. })));
}

// Three nodes, two levels: the 8 × 8 table of shaped probabilities against
// direct products.
#[test]
fn shaping_pins_products_three_nodes() {
    let s = ScenarioSupport::new(
        vec![vec![1.0, 2.0], vec![3.0, 5.0], vec![2.0, 7.0]],
        vec![vec![0.6, 0.4], vec![0.7, 0.3], vec![0.5, 0.5]],
        vec![vec![0.2, 0.8], vec![0.4, 0.6], vec![0.1, 0.9]],
        vec![1.0],
    )
    .unwrap();
    let units = BundleSet::identity(&s, &vec![true; s.len()]);
    for w in sitings(3) {
        let direct = probability_oracle(&s, &w);
        let r = shaping_range(&s, &units, &w, false).unwrap();
        for n in 0..8 {
            assert!((r.upper[n] - direct[n]).abs() <= 1e-9, "w {w:?} n {n}");
        }
        assert!(r.slack.abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_match_direct_products_and_sum_to_one(s in random_support(), mask in 0usize..8) {
        let w: Vec<bool> = (0..s.num_nodes()).map(|i| mask >> i & 1 == 1).collect();
        let p = s.probabilities(&w);
        let direct = probability_oracle(&s, &w);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for (a, b) in p.iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn baseline_is_the_uninvested_distribution(s in random_support()) {
        let p = s.probabilities(&vec![false; s.num_nodes()]);
        for (n, &x) in p.iter().enumerate() {
            prop_assert_eq!(x, s.baseline_probability(n));
        }
    }

    #[test]
    fn tuples_round_trip_through_index(s in random_support()) {
        for n in 0..s.len() {
            prop_assert_eq!(s.index_of(s.tuple(n)), Some(n));
        }
        prop_assert!(s.is_comonotone());
    }

    #[test]
    fn distance_is_a_metric_with_the_stated_diameter(s in random_support()) {
        let n = s.len();
        let mut max: f64 = 0.0;
        for a in 0..n {
            prop_assert_eq!(s.distance(a, a), 0.0);
            for b in 0..n {
                prop_assert_eq!(s.distance(a, b), s.distance(b, a));
                max = max.max(s.distance(a, b));
                for c in 0..n {
                    prop_assert!(s.distance(a, c) <= s.distance(a, b) + s.distance(b, c) + 1e-9);
                }
            }
        }
        let spread: f64 = (0..s.num_nodes())
            .map(|i| s.levels(i).last().unwrap() - s.levels(i)[0])
            .sum();
        prop_assert!((s.diameter() - spread).abs() <= 1e-9);
        prop_assert!((max - spread).abs() <= 1e-9);
    }

    // Bundles partition the scenarios, carry exactly their members' mass
    // and never absorb a screened-in scenario.
    #[test]
    fn bundles_partition_and_preserve_mass(
        s in random_support(),
        flags in proptest::collection::vec(any::<bool>(), 27),
        mask in 0usize..8,
    ) {
        let feasible: Vec<bool> = (0..s.len()).map(|n| flags[n]).collect();
        let set = bundle_scenarios(&s, &feasible, true).unwrap();
        let w: Vec<bool> = (0..s.num_nodes()).map(|i| mask >> i & 1 == 1).collect();
        let direct = probability_oracle(&s, &w);
        let mut seen = vec![0; s.len()];
        for (u, unit) in set.units().iter().enumerate() {
            for &m in &unit.members {
                seen[m] += 1;
                prop_assert_eq!(set.unit_of(m), u);
                prop_assert_eq!(unit.active, feasible[m]);
            }
            if unit.active {
                prop_assert_eq!(unit.members.len(), 1);
            }
            let expect: f64 = unit.members.iter().map(|&m| direct[m]).sum();
            prop_assert!((unit.mass(&s, &w) - expect).abs() <= 1e-12);
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert_eq!(set.num_active(), feasible.iter().filter(|f| **f).count());
    }

    #[test]
    fn bundled_shaping_matches_member_sums(
        s in random_support(),
        flags in proptest::collection::vec(any::<bool>(), 27),
        mask in 0usize..8,
    ) {
        let feasible: Vec<bool> = (0..s.len()).map(|n| flags[n]).collect();
        let set = bundle_scenarios(&s, &feasible, true).unwrap();
        let w: Vec<bool> = (0..s.num_nodes()).map(|i| mask >> i & 1 == 1).collect();
        let direct = probability_oracle(&s, &w);
        let r = shaping_range(&s, &set, &w, true).unwrap();
        for (u, unit) in set.units().iter().enumerate() {
            let expect: f64 = unit.members.iter().map(|&m| direct[m]).sum();
            prop_assert!((r.upper[u] - expect).abs() <= 1e-9);
        }
        prop_assert!(r.slack.abs() <= 1e-9);
    }
}
