use ddu_milp::{solve_milp, MilpModel, Sense, SolveStatus, VarSpec};

use super::probability::probability_oracle;
use crate::dro::{Mode, PlanConfig};
use crate::error::PlanError;
use crate::model::{
    build_dispatch, build_investment, build_objective, fix_pattern, investment_patterns,
    traffic_admits, DispatchOptions, InvestmentPattern, Realization,
};
use crate::network::CoupledNetwork;
use crate::scenario::ScenarioSupport;

pub const MAX_ORACLE_NODES: usize = 4;
pub const MAX_ORACLE_PIPELINES: usize = 4;
pub const MAX_ORACLE_HOURS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustivePlan {
    pub pattern: InvestmentPattern,
    pub objective: f64,
    /// Patterns solved, feasible or not.
    pub evaluated: usize,
    /// Objective of every feasible pattern, in enumeration order.
    pub values: Vec<(InvestmentPattern, f64)>,
}

fn guard(net: &CoupledNetwork) -> Result<(), PlanError> {
    let nb = net.num_nodes();
    let nl = net.hydrogen.pipelines.len();
    if nb > MAX_ORACLE_NODES || nl > MAX_ORACLE_PIPELINES || net.hours > MAX_ORACLE_HOURS {
        return Err(PlanError::ScaleGuard(format!(
            "exhaustive plan oracle needs at most {MAX_ORACLE_NODES} nodes, \
             {MAX_ORACLE_PIPELINES} pipelines and {MAX_ORACLE_HOURS} periods; \
             got {nb}, {nl} and {}",
            net.hours
        )));
    }
    Ok(())
}

/// Solves the planning problem of `cfg.mode` by enumerating every
/// investment pattern and solving the remaining continuous problem with
/// exact probabilities, one unbundled dispatch block per screened-in
/// scenario and the dual of the inner problem written with constant
/// distances. Ties keep the earlier pattern.
pub fn exhaustive_plan_oracle(
    net: &CoupledNetwork,
    cfg: &PlanConfig,
) -> Result<ExhaustivePlan, PlanError> {
    guard(net)?;
    cfg.validate()?;
    let support = ScenarioSupport::from_network(net)?;
    let levels: Vec<Vec<f64>> = (0..support.len())
        .map(|n| {
            support
                .tuple(n)
                .iter()
                .enumerate()
                .map(|(i, &k)| support.levels(i)[k])
                .collect()
        })
        .collect();
    let feasible: Vec<bool> = levels
        .iter()
        .map(|l| traffic_admits(net, l))
        .collect::<Result<_, _>>()?;
    let distance = |a: usize, b: usize| -> f64 {
        levels[a]
            .iter()
            .zip(&levels[b])
            .map(|(x, y)| (x - y).abs())
            .sum()
    };
    let options = DispatchOptions {
        pipeline_segments: cfg.pipeline_segments,
        traffic_segments: cfg.traffic_segments,
        beta: cfg.beta,
    };
    let da = net.days_per_year;
    let radius = cfg.effective_radius();
    let baseline = probability_oracle(&support, &vec![false; net.num_nodes()]);

    let mut best: Option<(InvestmentPattern, f64)> = None;
    let mut values = Vec::new();
    let mut evaluated = 0;
    for pattern in investment_patterns(net) {
        let mut m = MilpModel::new("exhaustive");
        let inv = build_investment(&mut m, net)?;
        fix_pattern(&mut m, &inv, &pattern)?;
        build_objective(&mut m, net, &inv, &[])?;
        let mut theta = vec![None; support.len()];
        for n in (0..support.len()).filter(|&n| feasible[n]) {
            let demand = Realization::from_daily(levels[n].clone(), support.trip());
            let d = build_dispatch(&mut m, net, &inv, &demand, &options, &format!("_s{n}"))?;
            let th = m.add_variable(VarSpec::continuous(format!("theta_s{n}")).tag("oracle"))?;
            m.add_constraint(
                std::iter::once((th, 1.0)).chain(d.cost.iter().map(|c| (c.var, -c.coeff))),
                Sense::Eq,
                0.0,
                "oracle",
            )?;
            theta[n] = Some(th);
        }
        let active: Vec<(usize, ddu_milp::VarId)> = theta
            .iter()
            .enumerate()
            .filter_map(|(n, t)| t.map(|v| (n, v)))
            .collect();
        match cfg.mode {
            Mode::So => {
                for &(n, th) in &active {
                    m.add_objective(th, da * baseline[n], "oracle")?;
                }
            }
            Mode::Ro => {
                let top = m.add_variable(VarSpec::continuous("theta_max").tag("oracle"))?;
                for &(_, th) in &active {
                    m.add_constraint([(top, 1.0), (th, -1.0)], Sense::Ge, 0.0, "oracle")?;
                }
                m.add_objective(top, da, "oracle")?;
            }
            Mode::DiuDro | Mode::DduDro => {
                let p_hat = if cfg.mode == Mode::DduDro {
                    probability_oracle(&support, &pattern.w_hy)
                } else {
                    baseline.clone()
                };
                let eps = m.add_variable(VarSpec::continuous("eps").tag("oracle"))?;
                m.add_objective(eps, da * radius, "oracle")?;
                for n in 0..support.len() {
                    let nu = m.add_variable(VarSpec::free(format!("nu_s{n}")).tag("oracle"))?;
                    m.add_objective(nu, da * p_hat[n], "oracle")?;
                    if !feasible[n] {
                        m.add_constraint([(nu, 1.0)], Sense::Ge, 0.0, "oracle")?;
                        continue;
                    }
                    for &(j, th) in &active {
                        m.add_constraint(
                            [(nu, 1.0), (eps, distance(n, j)), (th, -1.0)],
                            Sense::Ge,
                            0.0,
                            "oracle",
                        )?;
                    }
                }
            }
        }
        let r = solve_milp(&m, &cfg.milp)?;
        evaluated += 1;
        match r.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => continue,
            status => {
                return Err(PlanError::NotOptimal {
                    context: format!("exhaustive oracle at pattern {}", pattern.bits()),
                    status,
                })
            }
        }
        values.push((pattern.clone(), r.objective));
        let better = match &best {
            None => true,
            Some((_, b)) => r.objective < b - 1e-9 * b.abs().max(1.0),
        };
        if better {
            best = Some((pattern, r.objective));
        }
    }
    let (pattern, objective) = best.ok_or_else(|| PlanError::NotOptimal {
        context: "exhaustive oracle: every pattern".into(),
        status: SolveStatus::Infeasible,
    })?;
    Ok(ExhaustivePlan {
        pattern,
        objective,
        evaluated,
        values,
    })
}
