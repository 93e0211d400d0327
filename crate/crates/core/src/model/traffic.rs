use ddu_milp::{solve_lp, MilpModel, ModelError, Sense, SolveError, VarId, VarSpec};

use super::{CostFamily, CostTerm};
use crate::network::{power_secant_slopes, CoupledNetwork, BPR_FACTOR};

#[derive(Debug, Clone)]
pub struct TrafficVars {
    /// Aggregate link flow x_{l,t}.
    pub link: Vec<Vec<VarId>>,
    /// HFCV flow captured at hydrogen node i, x^{HFCV}_{i,t}.
    pub capture: Vec<Vec<VarId>>,
    /// Path flows f_{p,t}^{od,v} as (od, path, class, t) → var; class 0 is HFCV.
    pub paths: Vec<(usize, usize, usize, usize, VarId)>,
}

const CLASSES: [&str; 2] = ["h", "o"];

/// Link aggregation and caps, OD balance, link–path incidence, capture
/// balance, path-capture and node-capture caps for every period.
///
/// With `levels`, also adds the capture rows
/// x^{HFCV}_{i,t} ≥ level_i · Q_t / G_day, which tie the scenario's node
/// demands to traffic through the trip-ratio demand formula.
pub fn build_traffic(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    levels: Option<&[f64]>,
    label: &str,
) -> Result<TrafficVars, ModelError> {
    let tr = &net.traffic;
    let nodes = &net.hydrogen.nodes;
    let daily = net.daily_hfcv_demand();
    let mut out = TrafficVars {
        link: Vec::new(),
        capture: vec![Vec::new(); nodes.len()],
        paths: Vec::new(),
    };
    for t in 0..net.hours {
        // f[od][p][class]
        let mut f: Vec<Vec<[VarId; 2]>> = Vec::with_capacity(tr.od.len());
        for (o, od) in tr.od.iter().enumerate() {
            let mut per_path = Vec::with_capacity(od.paths.len());
            for (p, _) in od.paths.iter().enumerate() {
                let mut pair = Vec::with_capacity(2);
                for (v, cls) in CLASSES.iter().enumerate() {
                    let var = model.add_variable(
                        VarSpec::continuous(format!("f{cls}_{o}_{p}_t{t}{label}")).tag("eq05f"),
                    )?;
                    out.paths.push((o, p, v, t, var));
                    pair.push(var);
                }
                per_path.push([pair[0], pair[1]]);
            }
            for (v, demand) in [&od.hfcv, &od.otv].iter().enumerate() {
                model.add_constraint(
                    per_path.iter().map(|pair| (pair[v], 1.0)),
                    Sense::Eq,
                    demand[t],
                    "eq05",
                )?;
            }
            f.push(per_path);
        }
        let mut links_t = Vec::with_capacity(tr.links.len());
        for (l, link) in tr.links.iter().enumerate() {
            let mut class_flow = Vec::with_capacity(2);
            for (v, cls) in CLASSES.iter().enumerate() {
                let x = model.add_variable(
                    VarSpec::continuous(format!("x{cls}_{l}_t{t}{label}")).tag("eq06x"),
                )?;
                let mut terms = vec![(x, 1.0)];
                for (o, od) in tr.od.iter().enumerate() {
                    for (p, path) in od.paths.iter().enumerate() {
                        if path.links.iter().any(|id| *id == link.id) {
                            terms.push((f[o][p][v], -1.0));
                        }
                    }
                }
                model.add_constraint(terms, Sense::Eq, 0.0, "eq06")?;
                class_flow.push(x);
            }
            let x = model.add_variable(
                VarSpec::continuous(format!("x_{l}_t{t}{label}"))
                    .upper(link.flow_cap)
                    .tag("eq04x"),
            )?;
            model.add_constraint(
                [(x, 1.0), (class_flow[0], -1.0), (class_flow[1], -1.0)],
                Sense::Eq,
                0.0,
                "eq04",
            )?;
            links_t.push(x);
        }
        out.link.push(links_t);

        let q: f64 = tr.hfcv_total(t);
        let mut cap_t = Vec::with_capacity(nodes.len());
        for i in 0..nodes.len() {
            cap_t.push(
                model.add_variable(
                    VarSpec::continuous(format!("xc_{i}_t{t}{label}")).tag("eq07x"),
                )?,
            );
        }
        model.add_constraint(cap_t.iter().map(|&x| (x, 1.0)), Sense::Eq, q, "eq07")?;
        for (o, od) in tr.od.iter().enumerate() {
            for (p, path) in od.paths.iter().enumerate() {
                let mut terms = vec![(f[o][p][0], 1.0)];
                for s in &path.stations {
                    if let Some(i) = net.hydrogen.node_index(s) {
                        terms.push((cap_t[i], -1.0));
                    }
                }
                model.add_constraint(terms, Sense::Le, 0.0, "eq08")?;
            }
        }
        for (i, node) in nodes.iter().enumerate() {
            let mut terms = vec![(cap_t[i], 1.0)];
            for (o, od) in tr.od.iter().enumerate() {
                for (p, path) in od.paths.iter().enumerate() {
                    if path.stations.iter().any(|s| *s == node.id) {
                        terms.push((f[o][p][0], -1.0));
                        if tr.capture_all_classes {
                            terms.push((f[o][p][1], -1.0));
                        }
                    }
                }
            }
            model.add_constraint(terms, Sense::Le, 0.0, "eq09")?;
        }
        if let Some(levels) = levels {
            if daily > 0.0 {
                for (i, &lv) in levels.iter().enumerate() {
                    model.add_constraint([(cap_t[i], 1.0)], Sense::Ge, lv * q / daily, "eq17")?;
                }
            }
        }
        for (i, x) in cap_t.into_iter().enumerate() {
            out.capture[i].push(x);
        }
    }
    Ok(out)
}

/// Incremental piecewise model of the congestion term per link and period:
/// x = Σ_h Δx_h, 0 ≤ Δx_h ≤ x^max/H, t^de = Σ_h κ_h Δx_h with κ_h the
/// secant slope of 0.15 t⁰ x⁵ / C⁴ on segment h. Also records the total
/// link time t⁰x + t^de. Returns the congestion cost terms.
pub fn build_bpr_delay(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    traffic: &TrafficVars,
    segments: usize,
    label: &str,
) -> Result<Vec<CostTerm>, ModelError> {
    let mut cost = Vec::new();
    let h = segments.max(1);
    for (t, links_t) in traffic.link.iter().enumerate() {
        for (l, link) in net.traffic.links.iter().enumerate() {
            let width = link.flow_cap / h as f64;
            let scale = BPR_FACTOR * link.free_flow_time / link.capacity.powi(4);
            let slopes = power_secant_slopes(5, link.flow_cap, h);
            let mut pieces = Vec::with_capacity(h);
            for k in 1..=h {
                pieces.push(
                    model.add_variable(
                        VarSpec::continuous(format!("dx_{l}_{k}_t{t}{label}"))
                            .upper(width)
                            .tag("eq46b"),
                    )?,
                );
            }
            let x = links_t[l];
            model.add_constraint(
                std::iter::once((x, 1.0)).chain(pieces.iter().map(|&d| (d, -1.0))),
                Sense::Eq,
                0.0,
                "eq46a",
            )?;
            let de = model
                .add_variable(VarSpec::continuous(format!("tde_{l}_t{t}{label}")).tag("eq11"))?;
            let mut terms = vec![(de, 1.0)];
            for (&d, &slope) in pieces.iter().zip(&slopes) {
                terms.push((d, -scale * slope));
            }
            model.add_constraint(terms, Sense::Eq, 0.0, "eq46c")?;
            let tt = model
                .add_variable(VarSpec::continuous(format!("tt_{l}_t{t}{label}")).tag("eq10t"))?;
            model.add_constraint(
                [(tt, 1.0), (x, -link.free_flow_time), (de, -1.0)],
                Sense::Eq,
                0.0,
                "eq10",
            )?;
            cost.push(CostTerm {
                var: de,
                coeff: net.economics.congestion_price,
                family: CostFamily::TrafficCongestion,
            });
        }
    }
    Ok(cost)
}

/// LP feasibility of the assignment rows with capture rows for `levels`.
pub fn traffic_admits(
    net: &CoupledNetwork,
    levels: &[f64],
) -> Result<bool, crate::scenario::ScenarioError> {
    let mut m = MilpModel::new("screen");
    build_traffic(&mut m, net, Some(levels), "")?;
    let r = solve_lp(&m).map_err(|e: SolveError| e)?;
    Ok(r.is_optimal())
}
