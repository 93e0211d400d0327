use std::time::{Duration, Instant};

use ddu_milp::{solve_milp, SolveResult, SolveStatus};

use super::inner::worst_case_distribution;
use super::report::{reformulation_report, ReformulationReport};
use super::{assemble, prepare_scenarios, Assembly, Bilinear, Mode, PlanConfig, ScenarioSet};
use crate::error::PlanError;
use crate::model::{evaluate_families, read_pattern, CostFamily, InvestmentPattern};
use crate::network::CoupledNetwork;

/// Post-solve checks of the bounds the model relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificates {
    /// (ε*, M_ε) when ε is bounded.
    pub eps: Option<(f64, f64)>,
    /// (max_u |ν_u + η|, V̄) when ν is bounded for the envelopes.
    pub nu: Option<(f64, f64)>,
}

impl Certificates {
    /// Each bound is certified when the optimum stays below 99 % of it.
    pub fn ok(&self) -> bool {
        let inside = |c: Option<(f64, f64)>| c.map_or(true, |(x, b)| x < 0.99 * b);
        inside(self.eps) && inside(self.nu)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub node: String,
    pub w_hy: bool,
    pub w_p2g: bool,
    pub w_hs: bool,
    pub h_hy: f64,
    pub h_p2g: f64,
    pub h_hs: f64,
}

/// Hourly hydrogen production of one node in one unit's dispatch.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductionRow {
    pub unit: String,
    pub node: String,
    pub t: usize,
    pub p2g: f64,
    pub supply: f64,
    pub discharge: f64,
    pub charge: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptureRow {
    pub unit: String,
    pub node: String,
    pub t: usize,
    pub capture: f64,
}

/// Optimized plan with its cost allocation and diagnostics.
#[derive(Debug, Clone)]
pub struct PlanningSolution {
    pub instance: String,
    pub config: PlanConfig,
    /// Solver objective. For envelope models this is a lower bound.
    pub objective: f64,
    /// Investment plus Da times the worst-case expected operation cost of
    /// the chosen plan.
    pub total_cost: f64,
    /// Da·Σ_u (π_u ν_u − ψ_u); zero without envelopes.
    pub envelope_gap: f64,
    pub pattern: InvestmentPattern,
    pub capacities: Vec<CapacityRow>,
    pub pipelines: Vec<(String, bool)>,
    pub unit_labels: Vec<String>,
    /// θ per unit, zero for screened-out units.
    pub outcomes: Vec<f64>,
    pub empirical: Vec<f64>,
    pub worst_case: Vec<f64>,
    pub transport: f64,
    /// Annual cost per family: investment directly, operation as
    /// Da·Σ_u p*_u·cost_u.
    pub breakdown: Vec<(CostFamily, f64)>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub certificates: Certificates,
    pub production: Vec<ProductionRow>,
    pub capture: Vec<CaptureRow>,
    pub nodes_explored: u64,
    pub iterations: u64,
    pub models_solved: usize,
    pub wall: Duration,
    pub report: ReformulationReport,
    pub scenarios: ScenarioSet,
    pub assembly: Assembly,
    pub result: SolveResult,
}

impl PlanningSolution {
    pub fn cost(&self, family: CostFamily) -> f64 {
        self.breakdown
            .iter()
            .find(|(f, _)| *f == family)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    pub fn investment_cost(&self) -> f64 {
        self.breakdown
            .iter()
            .filter(|(f, _)| f.is_investment())
            .map(|(_, v)| v)
            .sum()
    }

    pub fn operation_cost(&self) -> f64 {
        self.breakdown
            .iter()
            .filter(|(f, _)| !f.is_investment())
            .map(|(_, v)| v)
            .sum()
    }
}

fn siting_patterns(nodes: usize) -> Vec<Vec<bool>> {
    (0..1usize << nodes)
        .map(|mask| {
            (0..nodes)
                .map(|i| mask >> (nodes - 1 - i) & 1 == 1)
                .collect()
        })
        .collect()
}

fn solve_one(asm: &Assembly, cfg: &PlanConfig) -> Result<SolveResult, PlanError> {
    Ok(solve_milp(&asm.model, &cfg.milp)?)
}

/// Solves the planning problem of `cfg.mode`.
///
/// The decision-dependent mode with [`Bilinear::Enumerate`] solves one
/// model per HRS siting pattern and keeps the lowest objective, ties going
/// to the earlier bit string. Every other combination is one monolithic
/// model.
pub fn solve_plan(net: &CoupledNetwork, cfg: &PlanConfig) -> Result<PlanningSolution, PlanError> {
    cfg.validate()?;
    let started = Instant::now();
    let scen = prepare_scenarios(net, cfg.mode, cfg.reduction.bundling)?;
    let mut nodes = 0;
    let mut iterations = 0;
    let (asm, result, solved) = if cfg.mode == Mode::DduDro && cfg.bilinear == Bilinear::Enumerate {
        let mut best: Option<(Assembly, SolveResult)> = None;
        let mut solved = 0;
        for w in siting_patterns(net.num_nodes()) {
            let asm = assemble(net, &scen, cfg, Some(&w))?;
            let r = solve_one(&asm, cfg)?;
            solved += 1;
            nodes += r.nodes;
            iterations += r.iterations;
            match r.status {
                SolveStatus::Optimal => {}
                SolveStatus::Infeasible => continue,
                status => {
                    return Err(PlanError::NotOptimal {
                        context: format!("siting pattern {w:?}"),
                        status,
                    })
                }
            }
            let better = match &best {
                None => true,
                Some((_, b)) => r.objective < b.objective - 1e-9 * b.objective.abs().max(1.0),
            };
            if better {
                best = Some((asm, r));
            }
        }
        let (asm, r) = best.ok_or_else(|| PlanError::NotOptimal {
            context: "every siting pattern".into(),
            status: SolveStatus::Infeasible,
        })?;
        (asm, r, solved)
    } else {
        let asm = assemble(net, &scen, cfg, None)?;
        let r = solve_one(&asm, cfg)?;
        nodes += r.nodes;
        iterations += r.iterations;
        if !r.is_optimal() {
            return Err(PlanError::NotOptimal {
                context: format!("{} model", cfg.mode),
                status: r.status,
            });
        }
        (asm, r, 1)
    };
    let mut sol = finalize(net, scen, cfg, asm, result)?;
    sol.nodes_explored = nodes;
    sol.iterations = iterations;
    sol.models_solved = solved;
    sol.wall = started.elapsed();
    Ok(sol)
}

fn finalize(
    net: &CoupledNetwork,
    scen: ScenarioSet,
    cfg: &PlanConfig,
    asm: Assembly,
    result: SolveResult,
) -> Result<PlanningSolution, PlanError> {
    let values = &result.values;
    let units = scen.units.units();
    let pattern = read_pattern(&asm.inv, values);
    let outcomes: Vec<f64> = asm
        .outcomes
        .iter()
        .map(|o| o.map_or(0.0, |v| values[v.index()].max(0.0)))
        .collect();
    let empirical = match &asm.probabilities {
        Some(p) => p.clone(),
        None => scen.masses(&pattern.w_hy),
    };
    let (worst_case, transport) = match cfg.mode {
        Mode::So => (empirical.clone(), 0.0),
        Mode::Ro => {
            let mut p = vec![0.0; units.len()];
            let top =
                asm.blocks
                    .iter()
                    .map(|b| b.unit)
                    .fold(None, |acc: Option<usize>, u| match acc {
                        Some(a) if outcomes[a] >= outcomes[u] => Some(a),
                        _ => Some(u),
                    });
            if let Some(u) = top {
                p[u] = 1.0;
            }
            (p, 0.0)
        }
        Mode::DiuDro | Mode::DduDro => {
            let wc = worst_case_distribution(&scen, &empirical, &outcomes, asm.radius)?;
            (wc.probabilities, wc.transport)
        }
    };

    let da = net.days_per_year;
    let mut breakdown = evaluate_families(&asm.inv.cost, values);
    for b in &asm.blocks {
        let fam = evaluate_families(&b.dispatch.cost, values);
        for (k, (f, v)) in fam.into_iter().enumerate() {
            debug_assert_eq!(breakdown[k].0, f);
            breakdown[k].1 += da * worst_case[b.unit] * v;
        }
    }
    for (_, v) in &mut breakdown {
        if v.abs() < 1e-6 {
            *v = 0.0;
        }
    }
    let total_cost = breakdown.iter().map(|(_, v)| v).sum();

    let envelope_gap = match &asm.shaping {
        Some(s) if !asm.envelope.is_empty() => {
            let nu = &asm
                .epigraph
                .as_ref()
                .expect("envelopes sit on the dual block")
                .dual
                .nu;
            da * s
                .last()
                .iter()
                .zip(nu)
                .zip(&asm.envelope)
                .map(|((pi, nu), psi)| {
                    values[pi.index()] * values[nu.index()] - values[psi.index()]
                })
                .sum::<f64>()
        }
        _ => 0.0,
    };
    let (epsilon, eta) = match &asm.epigraph {
        Some(e) => (
            Some(values[e.dual.eps.index()]),
            Some(values[e.dual.eta.index()]),
        ),
        None => (None, None),
    };
    let certificates = Certificates {
        eps: asm
            .epigraph
            .as_ref()
            .and_then(|e| e.eps_bound.map(|b| (values[e.dual.eps.index()], b))),
        nu: match (&asm.epigraph, asm.envelope.is_empty()) {
            (Some(e), false) => {
                let eta = values[e.dual.eta.index()];
                let worst = e
                    .dual
                    .nu
                    .iter()
                    .map(|v| (values[v.index()] + eta).abs())
                    .fold(0.0, f64::max);
                Some((worst, asm.nu_bound))
            }
            _ => None,
        },
    };

    let h = &net.hydrogen;
    let capacities = h
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| CapacityRow {
            node: n.id.clone(),
            w_hy: pattern.w_hy[i],
            w_p2g: pattern.w_p2g[i],
            w_hs: pattern.w_hs()[i],
            h_hy: values[asm.inv.h_hy[i].index()],
            h_p2g: values[asm.inv.h_p2g[i].index()],
            h_hs: values[asm.inv.h_hs[i].index()],
        })
        .collect();
    let pipelines = h
        .pipelines
        .iter()
        .zip(&pattern.w_pipe)
        .map(|(p, &b)| (p.id.clone(), b))
        .collect();
    let unit_labels: Vec<String> = units.iter().map(|u| u.label(&scen.support)).collect();
    let mut production = Vec::new();
    let mut capture = Vec::new();
    for b in &asm.blocks {
        let d = &b.dispatch;
        for (i, node) in h.nodes.iter().enumerate() {
            for t in 0..net.hours {
                let v = |x: &Vec<Vec<ddu_milp::VarId>>| values[x[i][t].index()];
                production.push(ProductionRow {
                    unit: unit_labels[b.unit].clone(),
                    node: node.id.clone(),
                    t,
                    p2g: v(&d.g_p2g),
                    supply: v(&d.g_m),
                    discharge: v(&d.g_dis),
                    charge: v(&d.g_ch),
                });
                capture.push(CaptureRow {
                    unit: unit_labels[b.unit].clone(),
                    node: node.id.clone(),
                    t,
                    capture: values[d.traffic.capture[i][t].index()],
                });
            }
        }
    }
    let report = reformulation_report(&asm, &scen, cfg.reduction);
    Ok(PlanningSolution {
        instance: net.name.clone(),
        config: cfg.clone(),
        objective: result.objective,
        total_cost,
        envelope_gap,
        pattern,
        capacities,
        pipelines,
        unit_labels,
        outcomes,
        empirical,
        worst_case,
        transport,
        breakdown,
        epsilon,
        eta,
        certificates,
        production,
        capture,
        nodes_explored: result.nodes,
        iterations: result.iterations,
        models_solved: 1,
        wall: result.wall,
        report,
        scenarios: scen,
        assembly: asm,
        result,
    })
}

/// Solves every mode on the same instance, in [`Mode::ALL`] order.
pub fn compare_modes(
    net: &CoupledNetwork,
    base: &PlanConfig,
) -> Vec<(Mode, Result<PlanningSolution, PlanError>)> {
    Mode::ALL
        .iter()
        .map(|&mode| {
            let cfg = PlanConfig {
                mode,
                ..base.clone()
            };
            (mode, solve_plan(net, &cfg))
        })
        .collect()
}

/// Solves `base.mode` at each radius in turn.
pub fn radius_sweep(
    net: &CoupledNetwork,
    base: &PlanConfig,
    radii: &[f64],
) -> Vec<(f64, Result<PlanningSolution, PlanError>)> {
    radii
        .iter()
        .map(|&radius| {
            let cfg = PlanConfig {
                radius,
                ..base.clone()
            };
            (radius, solve_plan(net, &cfg))
        })
        .collect()
}
