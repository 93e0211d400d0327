use ddu_milp::{MilpModel, ModelError, Sense, VarId, VarSpec};

use super::traffic::{build_bpr_delay, build_traffic, TrafficVars};
use super::{CostFamily, CostTerm, InvestmentVars};
use crate::network::{hourly_realization, power_secant_slopes, CoupledNetwork};

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchOptions {
    /// K, pipeline flow segments.
    pub pipeline_segments: usize,
    /// H, link flow segments.
    pub traffic_segments: usize,
    /// β, minimum fulfilled share of the scenario's daily demand.
    pub beta: f64,
}

impl DispatchOptions {
    pub fn from_network(net: &CoupledNetwork, beta: f64) -> Self {
        Self {
            pipeline_segments: net.segments.pipeline,
            traffic_segments: net.segments.traffic,
            beta,
        }
    }
}

/// One demand realization: daily totals per node and their hourly split.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub daily: Vec<f64>,
    pub hourly: Vec<Vec<f64>>,
}

impl Realization {
    pub fn from_daily(daily: Vec<f64>, trip: &[f64]) -> Self {
        let hourly = daily.iter().map(|&d| hourly_realization(d, trip)).collect();
        Self { daily, hourly }
    }
}

/// Handles of one scenario's operational variables, indexed `[i][t]`
/// (node/bus/unit first, period second).
#[derive(Debug, Clone)]
pub struct Dispatch {
    pub traffic: TrafficVars,
    pub g_served: Vec<Vec<VarId>>,
    pub g_unserved: Vec<Vec<VarId>>,
    pub g_m: Vec<Vec<VarId>>,
    pub g_p2g: Vec<Vec<VarId>>,
    pub g_ch: Vec<Vec<VarId>>,
    pub g_dis: Vec<Vec<VarId>>,
    /// Storage level H_{i,t} for t = 0..=T.
    pub soc: Vec<Vec<VarId>>,
    /// Source purchase per node; `None` at non-source nodes.
    pub purchase: Vec<Option<Vec<VarId>>>,
    pub pipe_flow: Vec<Vec<VarId>>,
    pub pipe_in: Vec<Vec<VarId>>,
    pub pipe_out: Vec<Vec<VarId>>,
    /// Linepack e_{l,t} for t = 1..=T.
    pub linepack: Vec<Vec<VarId>>,
    /// Squared pressure per node touching a pipeline.
    pub pressure_sq: Vec<Option<Vec<VarId>>>,
    pub p_p2g: Vec<Vec<VarId>>,
    pub p_grid: Vec<Option<Vec<VarId>>>,
    pub p_shed: Vec<Vec<VarId>>,
    pub p_curtail: Vec<Vec<VarId>>,
    /// Daily operation cost Σ_t C_t^{ope} as linear terms.
    pub cost: Vec<CostTerm>,
}

/// Served/unserved split, station cap and the fulfillment floor.
pub fn build_hydrogen_demand(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    inv: &InvestmentVars,
    demand: &Realization,
    beta: f64,
    label: &str,
) -> Result<(Vec<Vec<VarId>>, Vec<Vec<VarId>>, Vec<CostTerm>), ModelError> {
    let mut served = Vec::new();
    let mut unserved = Vec::new();
    let mut cost = Vec::new();
    for i in 0..net.hydrogen.nodes.len() {
        let mut d_i = Vec::with_capacity(net.hours);
        let mut s_i = Vec::with_capacity(net.hours);
        for t in 0..net.hours {
            let d = model
                .add_variable(VarSpec::continuous(format!("gd_{i}_t{t}{label}")).tag("eq19d"))?;
            let s = model
                .add_variable(VarSpec::continuous(format!("gsh_{i}_t{t}{label}")).tag("eq19s"))?;
            model.add_constraint([(d, 1.0), (s, 1.0)], Sense::Eq, demand.hourly[i][t], "eq18")?;
            model.add_constraint([(d, 1.0), (inv.h_hy[i], -1.0)], Sense::Le, 0.0, "eq19")?;
            cost.push(CostTerm {
                var: s,
                coeff: net.economics.unserved_hydrogen_penalty,
                family: CostFamily::UnservedHydrogen,
            });
            d_i.push(d);
            s_i.push(s);
        }
        served.push(d_i);
        unserved.push(s_i);
    }
    let total: f64 = demand.daily.iter().sum();
    model.add_constraint(
        served.iter().flatten().map(|&d| (d, 1.0)),
        Sense::Ge,
        beta * total,
        "eq20",
    )?;
    Ok((served, unserved, cost))
}

pub struct PipelineVars {
    pub flow: Vec<Vec<VarId>>,
    pub inflow: Vec<Vec<VarId>>,
    pub outflow: Vec<Vec<VarId>>,
    pub linepack: Vec<Vec<VarId>>,
    pub pressure_sq: Vec<Option<Vec<VarId>>>,
}

/// Weymouth relation with piecewise g², flow averaging and caps, linepack
/// dynamics, bounds and daily cycling. The pressure row is relaxed by
/// Big-M when the pipeline is not built.
pub fn build_pipeline(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    inv: &InvestmentVars,
    segments: usize,
    label: &str,
) -> Result<PipelineVars, ModelError> {
    let h = &net.hydrogen;
    let lo2 = h.pressure_min * h.pressure_min;
    let hi2 = h.pressure_max * h.pressure_max;
    let mut pressure_sq: Vec<Option<Vec<VarId>>> = vec![None; h.nodes.len()];
    for p in &h.pipelines {
        for id in [&p.from, &p.to] {
            let i = h.node_index(id).expect("validated pipeline endpoint");
            if pressure_sq[i].is_none() {
                let mut v = Vec::with_capacity(net.hours);
                for t in 0..net.hours {
                    v.push(
                        model.add_variable(
                            VarSpec::continuous(format!("s_{i}_t{t}{label}"))
                                .bounds(lo2, hi2)
                                .tag("eq22"),
                        )?,
                    );
                }
                pressure_sq[i] = Some(v);
            }
        }
    }
    let k = segments.max(1);
    let mut out = PipelineVars {
        flow: Vec::new(),
        inflow: Vec::new(),
        outflow: Vec::new(),
        linepack: Vec::new(),
        pressure_sq: Vec::new(),
    };
    for (l, p) in h.pipelines.iter().enumerate() {
        let w = inv.w_pipe[l];
        let cap = p.flow_cap;
        let phi = p.phi();
        let psi = p.psi();
        let big_m = phi * (hi2 - lo2);
        let width = cap / k as f64;
        let slopes = power_secant_slopes(2, cap, k);
        let s_from = pressure_sq[h.node_index(&p.from).expect("validated")]
            .clone()
            .expect("registered");
        let s_to = pressure_sq[h.node_index(&p.to).expect("validated")]
            .clone()
            .expect("registered");
        let (mut flow, mut fin, mut fout, mut pack) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for t in 0..net.hours {
            let g = model.add_variable(
                VarSpec::continuous(format!("gl_{l}_t{t}{label}"))
                    .upper(cap)
                    .tag("eq24g"),
            )?;
            let gi = model.add_variable(
                VarSpec::continuous(format!("gin_{l}_t{t}{label}"))
                    .upper(cap)
                    .tag("eq24g"),
            )?;
            let go = model.add_variable(
                VarSpec::continuous(format!("gout_{l}_t{t}{label}"))
                    .upper(cap)
                    .tag("eq24g"),
            )?;
            for v in [g, gi, go] {
                model.add_constraint([(v, 1.0), (w, -cap)], Sense::Le, 0.0, "eq24")?;
            }
            model.add_constraint([(g, 1.0), (gi, -0.5), (go, -0.5)], Sense::Eq, 0.0, "eq23")?;
            let mut pieces = Vec::with_capacity(k);
            for s in 1..=k {
                pieces.push(
                    model.add_variable(
                        VarSpec::continuous(format!("dg_{l}_{s}_t{t}{label}"))
                            .upper(width)
                            .tag("eq45b"),
                    )?,
                );
            }
            model.add_constraint(
                std::iter::once((g, 1.0)).chain(pieces.iter().map(|&d| (d, -1.0))),
                Sense::Eq,
                0.0,
                "eq45a",
            )?;
            // Σ λ_k Δg_k − φ (s_from − s_to) = 0 when built.
            let mut terms: Vec<(VarId, f64)> = pieces
                .iter()
                .zip(&slopes)
                .map(|(&d, &lam)| (d, lam))
                .collect();
            terms.push((s_from[t], -phi));
            terms.push((s_to[t], phi));
            let mut upper = terms.clone();
            upper.push((w, big_m));
            model.add_constraint(upper, Sense::Le, big_m, "eq21")?;
            terms.push((w, -big_m));
            model.add_constraint(terms, Sense::Ge, -big_m, "eq21")?;

            let e = model.add_variable(
                VarSpec::continuous(format!("e_{l}_t{}{label}", t + 1))
                    .upper(p.linepack_cap)
                    .tag("eq26e"),
            )?;
            model.add_constraint([(e, 1.0), (w, -p.linepack_cap)], Sense::Le, 0.0, "eq26")?;
            match pack.last() {
                None => model.add_constraint(
                    [(e, 1.0), (gi, -1.0), (go, 1.0), (w, -psi * h.pressure_min)],
                    Sense::Eq,
                    0.0,
                    "eq25",
                )?,
                Some(&prev) => model.add_constraint(
                    [(e, 1.0), (prev, -1.0), (gi, -1.0), (go, 1.0)],
                    Sense::Eq,
                    0.0,
                    "eq25",
                )?,
            };
            flow.push(g);
            fin.push(gi);
            fout.push(go);
            pack.push(e);
        }
        let last = *pack.last().expect("at least one period");
        model.add_constraint(
            [(last, 1.0), (w, -psi * h.pressure_min)],
            Sense::Eq,
            0.0,
            "eq26c",
        )?;
        out.flow.push(flow);
        out.inflow.push(fin);
        out.outflow.push(fout);
        out.linepack.push(pack);
    }
    out.pressure_sq = pressure_sq;
    Ok(out)
}

pub struct StorageBalanceVars {
    pub g_m: Vec<Vec<VarId>>,
    pub g_p2g: Vec<Vec<VarId>>,
    pub g_ch: Vec<Vec<VarId>>,
    pub g_dis: Vec<Vec<VarId>>,
    pub soc: Vec<Vec<VarId>>,
    pub purchase: Vec<Option<Vec<VarId>>>,
    pub p_p2g: Vec<Vec<VarId>>,
    pub cost: Vec<CostTerm>,
}

/// Storage dynamics and caps, daily cycling, nodal balance, net pipeline
/// supply, the supply cap and P2G conversion.
#[allow(clippy::too_many_arguments)]
pub fn build_storage_and_balance(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    inv: &InvestmentVars,
    pipes: &PipelineVars,
    served: &[Vec<VarId>],
    label: &str,
) -> Result<StorageBalanceVars, ModelError> {
    let h = &net.hydrogen;
    let e = &net.economics;
    let mut out = StorageBalanceVars {
        g_m: Vec::new(),
        g_p2g: Vec::new(),
        g_ch: Vec::new(),
        g_dis: Vec::new(),
        soc: Vec::new(),
        purchase: Vec::new(),
        p_p2g: Vec::new(),
        cost: Vec::new(),
    };
    let yield_ = h.p2g_yield();
    for (i, node) in h.nodes.iter().enumerate() {
        let h0 =
            model.add_variable(VarSpec::continuous(format!("soc_{i}_t0{label}")).tag("eq29h"))?;
        model.add_constraint([(h0, 1.0), (inv.h_hs[i], -1.0)], Sense::Le, 0.0, "eq29")?;
        let mut soc = vec![h0];
        let (mut gm_i, mut gp_i, mut ch_i, mut dis_i, mut pp_i) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut buy_i = Vec::new();
        for t in 0..net.hours {
            let ch = model.add_variable(
                VarSpec::continuous(format!("gch_{i}_t{t}{label}"))
                    .upper(node.storage_rate)
                    .tag("eq28c"),
            )?;
            let dis = model.add_variable(
                VarSpec::continuous(format!("gdis_{i}_t{t}{label}"))
                    .upper(node.storage_rate)
                    .tag("eq28d"),
            )?;
            model.add_constraint(
                [(ch, 1.0), (inv.w_hs[i], -node.storage_rate)],
                Sense::Le,
                0.0,
                "eq28",
            )?;
            model.add_constraint(
                [(dis, 1.0), (inv.w_hs[i], -node.storage_rate)],
                Sense::Le,
                0.0,
                "eq28",
            )?;
            let level = model.add_variable(
                VarSpec::continuous(format!("soc_{i}_t{}{label}", t + 1)).tag("eq29h"),
            )?;
            let prev = *soc.last().expect("initial level");
            model.add_constraint(
                [
                    (level, 1.0),
                    (prev, -1.0),
                    (ch, -h.charge_efficiency),
                    (dis, 1.0 / h.discharge_efficiency),
                ],
                Sense::Eq,
                0.0,
                "eq27",
            )?;
            model.add_constraint([(level, 1.0), (inv.h_hs[i], -1.0)], Sense::Le, 0.0, "eq29")?;
            soc.push(level);

            let gm = model.add_variable(
                VarSpec::continuous(format!("gm_{i}_t{t}{label}"))
                    .upper(h.source_purchase_cap)
                    .tag("eq32m"),
            )?;
            model.add_constraint(
                [(gm, 1.0), (inv.w_hy[i], -h.source_purchase_cap)],
                Sense::Le,
                0.0,
                "eq32a",
            )?;
            let pp = model.add_variable(
                VarSpec::continuous(format!("pp2g_{i}_t{t}{label}"))
                    .upper(node.p2g[1])
                    .tag("eq54p"),
            )?;
            model.add_constraint([(pp, 1.0), (inv.h_p2g[i], -1.0)], Sense::Le, 0.0, "eq54")?;
            let gp = model
                .add_variable(VarSpec::continuous(format!("gp2g_{i}_t{t}{label}")).tag("eq32p"))?;
            model.add_constraint([(gp, 1.0), (pp, -yield_)], Sense::Eq, 0.0, "eq32b")?;
            model.add_constraint(
                [
                    (gm, 1.0),
                    (gp, 1.0),
                    (dis, 1.0),
                    (ch, -1.0),
                    (served[i][t], -1.0),
                ],
                Sense::Eq,
                0.0,
                "eq30",
            )?;
            let mut terms = vec![(gm, 1.0)];
            for (l, p) in h.pipelines.iter().enumerate() {
                if p.to == node.id {
                    terms.push((pipes.outflow[l][t], -1.0));
                }
                if p.from == node.id {
                    terms.push((pipes.inflow[l][t], 1.0));
                }
            }
            if node.source {
                let buy = model.add_variable(
                    VarSpec::continuous(format!("buy_{i}_t{t}{label}"))
                        .upper(h.source_purchase_cap)
                        .tag("eq31b"),
                )?;
                terms.push((buy, -1.0));
                out.cost.push(CostTerm {
                    var: buy,
                    coeff: e.hydrogen_price[t],
                    family: CostFamily::PurchasingHydrogen,
                });
                buy_i.push(buy);
            }
            model.add_constraint(terms, Sense::Eq, 0.0, "eq31")?;
            gm_i.push(gm);
            gp_i.push(gp);
            ch_i.push(ch);
            dis_i.push(dis);
            pp_i.push(pp);
        }
        let last = *soc.last().expect("final level");
        model.add_constraint([(last, 1.0), (h0, -1.0)], Sense::Eq, 0.0, "eq29c")?;
        out.g_m.push(gm_i);
        out.g_p2g.push(gp_i);
        out.g_ch.push(ch_i);
        out.g_dis.push(dis_i);
        out.soc.push(soc);
        out.purchase
            .push(if node.source { Some(buy_i) } else { None });
        out.p_p2g.push(pp_i);
    }
    Ok(out)
}

pub struct PowerVars {
    pub p_grid: Vec<Option<Vec<VarId>>>,
    pub p_shed: Vec<Vec<VarId>>,
    pub p_curtail: Vec<Vec<VarId>>,
    pub cost: Vec<CostTerm>,
}

/// System balance, PTDF line limits, grid purchase and shedding bounds, PV
/// curtailment bounds. `p_p2g[i][t]` is the electrolyser draw of hydrogen
/// node `i`, located at its bus.
pub fn build_power(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    p_p2g: &[Vec<VarId>],
    label: &str,
) -> Result<PowerVars, ModelError> {
    let pw = &net.power;
    let e = &net.economics;
    let mut out = PowerVars {
        p_grid: Vec::new(),
        p_shed: Vec::new(),
        p_curtail: Vec::new(),
        cost: Vec::new(),
    };
    for (b, bus) in pw.buses.iter().enumerate() {
        let mut sh = Vec::new();
        let mut gr = Vec::new();
        for t in 0..net.hours {
            let s = model
                .add_variable(VarSpec::continuous(format!("psh_{b}_t{t}{label}")).tag("eq53s"))?;
            out.cost.push(CostTerm {
                var: s,
                coeff: e.unserved_power_penalty,
                family: CostFamily::UnservedElectricity,
            });
            sh.push(s);
            if bus.grid_cap > 0.0 {
                let g = model.add_variable(
                    VarSpec::continuous(format!("pm_{b}_t{t}{label}"))
                        .upper(bus.grid_cap)
                        .tag("eq53m"),
                )?;
                out.cost.push(CostTerm {
                    var: g,
                    coeff: e.electricity_price[t],
                    family: CostFamily::PurchasingElectricity,
                });
                gr.push(g);
            }
        }
        out.p_shed.push(sh);
        out.p_grid
            .push(if bus.grid_cap > 0.0 { Some(gr) } else { None });
    }
    for (g, pv) in pw.pv.iter().enumerate() {
        let mut cur = Vec::new();
        for t in 0..net.hours {
            let c = model.add_variable(
                VarSpec::continuous(format!("pcur_{g}_t{t}{label}"))
                    .upper(pv.forecast[t])
                    .tag("eq54c"),
            )?;
            out.cost.push(CostTerm {
                var: c,
                coeff: e.pv_curtailment_penalty,
                family: CostFamily::PvCurtailment,
            });
            cur.push(c);
        }
        out.p_curtail.push(cur);
    }
    let node_bus: Vec<usize> = net
        .hydrogen
        .nodes
        .iter()
        .map(|n| pw.bus_index(&n.bus).expect("validated bus"))
        .collect();
    let pv_bus: Vec<usize> = pw
        .pv
        .iter()
        .map(|g| pw.bus_index(&g.bus).expect("validated bus"))
        .collect();
    for t in 0..net.hours {
        // Net injection per bus as (terms, constant).
        let mut inj: Vec<(Vec<(VarId, f64)>, f64)> = vec![(Vec::new(), 0.0); pw.buses.len()];
        for (b, bus) in pw.buses.iter().enumerate() {
            inj[b].1 -= bus.load[t];
            inj[b].0.push((out.p_shed[b][t], 1.0));
            if let Some(g) = &out.p_grid[b] {
                inj[b].0.push((g[t], 1.0));
            }
        }
        for (g, pv) in pw.pv.iter().enumerate() {
            inj[pv_bus[g]].1 += pv.forecast[t];
            inj[pv_bus[g]].0.push((out.p_curtail[g][t], -1.0));
        }
        for (i, &b) in node_bus.iter().enumerate() {
            inj[b].0.push((p_p2g[i][t], -1.0));
        }
        let total_const: f64 = inj.iter().map(|x| x.1).sum();
        model.add_constraint(
            inj.iter().flat_map(|x| x.0.iter().copied()),
            Sense::Eq,
            -total_const,
            "eq51",
        )?;
        for line in &pw.lines {
            let mut terms = Vec::new();
            let mut constant = 0.0;
            for (b, (bt, bc)) in inj.iter().enumerate() {
                let f = line.ptdf[b];
                if f == 0.0 {
                    continue;
                }
                constant += f * bc;
                terms.extend(bt.iter().map(|&(v, a)| (v, f * a)));
            }
            model.add_constraint(terms.clone(), Sense::Le, line.cap - constant, "eq52")?;
            model.add_constraint(terms, Sense::Ge, -line.cap - constant, "eq52")?;
        }
    }
    Ok(out)
}

/// Full operational block of one scenario, with its daily cost terms.
pub fn build_dispatch(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    inv: &InvestmentVars,
    demand: &Realization,
    options: &DispatchOptions,
    label: &str,
) -> Result<Dispatch, ModelError> {
    let traffic = build_traffic(model, net, Some(&demand.daily), label)?;
    let mut cost = build_bpr_delay(model, net, &traffic, options.traffic_segments, label)?;
    let (served, unserved, c) =
        build_hydrogen_demand(model, net, inv, demand, options.beta, label)?;
    cost.extend(c);
    let pipes = build_pipeline(model, net, inv, options.pipeline_segments, label)?;
    let sb = build_storage_and_balance(model, net, inv, &pipes, &served, label)?;
    cost.extend(sb.cost.iter().copied());
    let power = build_power(model, net, &sb.p_p2g, label)?;
    cost.extend(power.cost.iter().copied());
    Ok(Dispatch {
        traffic,
        g_served: served,
        g_unserved: unserved,
        g_m: sb.g_m,
        g_p2g: sb.g_p2g,
        g_ch: sb.g_ch,
        g_dis: sb.g_dis,
        soc: sb.soc,
        purchase: sb.purchase,
        pipe_flow: pipes.flow,
        pipe_in: pipes.inflow,
        pipe_out: pipes.outflow,
        linepack: pipes.linepack,
        pressure_sq: pipes.pressure_sq,
        p_p2g: sb.p_p2g,
        p_grid: power.p_grid,
        p_shed: power.p_shed,
        p_curtail: power.p_curtail,
        cost,
    })
}
