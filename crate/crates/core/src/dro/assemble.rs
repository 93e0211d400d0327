use ddu_milp::{MilpModel, Sense, VarId, VarSpec};

use super::epigraph::{build_dual_epigraph, EpigraphBlock};
use super::{Mode, PlanConfig, ScenarioSet};
use crate::error::PlanError;
use crate::model::{
    build_dispatch, build_investment, build_objective, fix_siting, Dispatch, DispatchOptions,
    InvestmentVars, Realization,
};
use crate::network::{bpr_delay, CoupledNetwork};
use crate::scenario::{build_shaping, ScenarioSupport, ShapingBlock};

/// Dispatch block of one active unit.
#[derive(Debug, Clone)]
pub struct UnitBlock {
    pub unit: usize,
    pub dispatch: Dispatch,
    /// θ, the unit's daily operation cost.
    pub outcome: VarId,
}

/// An assembled planning model with handles to its blocks.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub model: MilpModel,
    pub mode: Mode,
    pub inv: InvestmentVars,
    pub blocks: Vec<UnitBlock>,
    /// θ per unit; `None` for screened-out units.
    pub outcomes: Vec<Option<VarId>>,
    pub epigraph: Option<EpigraphBlock>,
    pub shaping: Option<ShapingBlock>,
    /// Envelope variables ψ_u standing in for π_u·ν_u.
    pub envelope: Vec<VarId>,
    pub theta_max: Option<VarId>,
    /// Constant empirical probabilities per unit, when they do not depend on
    /// free variables.
    pub probabilities: Option<Vec<f64>>,
    /// HRS siting fixed by bounds, if any.
    pub siting: Option<Vec<bool>>,
    /// V̄, bound on |ν| in the envelope rows.
    pub nu_bound: f64,
    /// M_ε, bound on ε in the Big-M forms.
    pub eps_bound: f64,
    pub radius: f64,
}

/// Upper bound on any unit's daily operation cost: every cost variable at
/// its largest meaningful value.
pub fn operation_cost_bound(net: &CoupledNetwork, support: &ScenarioSupport) -> f64 {
    let e = &net.economics;
    let h = &net.hydrogen;
    let pw = &net.power;
    let peak_demand: f64 = (0..support.num_nodes())
        .map(|i| support.levels(i).last().copied().unwrap_or(0.0))
        .sum();
    let mut bound = e.unserved_hydrogen_penalty * peak_demand;
    let grid: f64 = pw.buses.iter().map(|b| b.grid_cap).sum();
    let p2g: f64 = h.nodes.iter().map(|n| n.p2g[1]).sum();
    for t in 0..net.hours {
        bound += e.hydrogen_price[t] * h.source_purchase_cap * h.num_sources() as f64;
        bound += e.electricity_price[t] * grid;
        let load: f64 = pw.buses.iter().map(|b| b.load[t]).sum();
        let pv: f64 = pw.pv.iter().map(|g| g.forecast[t]).sum();
        bound += e.unserved_power_penalty * (load + p2g + pv);
        bound += e.pv_curtailment_penalty * pv;
        bound += e.congestion_price
            * net
                .traffic
                .links
                .iter()
                .map(|l| bpr_delay(l.free_flow_time, l.capacity, l.flow_cap))
                .sum::<f64>();
    }
    bound
}

/// Builds the planning model of `cfg.mode`.
///
/// With `siting`, the HRS and storage binaries are fixed and the empirical
/// probabilities become constants. Without it, the decision-dependent mode
/// couples the shaping block to the duals through envelope variables; the
/// other modes have siting-independent probabilities and need no coupling.
pub fn assemble(
    net: &CoupledNetwork,
    scen: &ScenarioSet,
    cfg: &PlanConfig,
    siting: Option<&[bool]>,
) -> Result<Assembly, PlanError> {
    cfg.validate()?;
    let mut model = MilpModel::new(format!("{}-{}", net.name, cfg.mode.label()));
    let inv = build_investment(&mut model, net)?;
    if let Some(w) = siting {
        if w.len() != net.num_nodes() {
            return Err(PlanError::Options(format!(
                "siting has {} entries for {} nodes",
                w.len(),
                net.num_nodes()
            )));
        }
        fix_siting(&mut model, &inv, w)?;
    }
    let options = DispatchOptions {
        pipeline_segments: cfg.pipeline_segments,
        traffic_segments: cfg.traffic_segments,
        beta: cfg.beta,
    };
    let units = scen.units.units();
    let mut outcomes = vec![None; units.len()];
    let mut blocks = Vec::new();
    for (u, unit) in units.iter().enumerate() {
        if !unit.active {
            continue;
        }
        let n = unit.representative();
        let demand = Realization::from_daily(scen.support.daily_totals(n), scen.support.trip());
        let dispatch = build_dispatch(&mut model, net, &inv, &demand, &options, &format!("_u{u}"))?;
        let theta = model.add_variable(VarSpec::continuous(format!("theta_u{u}")).tag("eq03"))?;
        model.add_constraint(
            std::iter::once((theta, 1.0)).chain(dispatch.cost.iter().map(|c| (c.var, -c.coeff))),
            Sense::Eq,
            0.0,
            "eq03",
        )?;
        outcomes[u] = Some(theta);
        blocks.push(UnitBlock {
            unit: u,
            dispatch,
            outcome: theta,
        });
    }

    build_objective(&mut model, net, &inv, &[])?;
    let da = net.days_per_year;
    let nu_bound = operation_cost_bound(net, &scen.support);
    let eps_bound = net.economics.unserved_hydrogen_penalty;
    let radius = cfg.effective_radius();
    let baseline = scen.masses(&vec![false; net.num_nodes()]);

    let mut asm = Assembly {
        model,
        mode: cfg.mode,
        inv,
        blocks,
        outcomes,
        epigraph: None,
        shaping: None,
        envelope: Vec::new(),
        theta_max: None,
        probabilities: None,
        siting: siting.map(<[bool]>::to_vec),
        nu_bound,
        eps_bound,
        radius,
    };
    let m = &mut asm.model;
    match cfg.mode {
        Mode::So => {
            for b in &asm.blocks {
                m.add_objective(b.outcome, da * baseline[b.unit], "eq57a")?;
            }
            asm.probabilities = Some(baseline);
        }
        Mode::Ro => {
            let top = m.add_variable(VarSpec::continuous("theta_max").tag("ro"))?;
            for b in &asm.blocks {
                m.add_constraint([(top, 1.0), (b.outcome, -1.0)], Sense::Ge, 0.0, "ro")?;
            }
            m.add_objective(top, da, "eq57a")?;
            asm.theta_max = Some(top);
            asm.probabilities = Some(baseline);
        }
        Mode::DiuDro | Mode::DduDro => {
            let epi = build_dual_epigraph(m, scen, &asm.outcomes, cfg.reduction.form, eps_bound)?;
            // (ν + c, η − c) is an equivalent solution for any c, so η can
            // be pinned to a box; leaving it free lets probability round-off
            // turn into an unbounded ray.
            m.set_bounds(epi.dual.eta, -nu_bound, nu_bound)?;
            m.add_objective(epi.dual.eps, da * radius, "eq57a")?;
            m.add_objective(epi.dual.eta, da, "eq57a")?;
            let constant = match (cfg.mode, siting) {
                (Mode::DiuDro, _) => Some(baseline),
                (_, Some(w)) => Some(scen.masses(w)),
                _ => None,
            };
            match constant {
                Some(p) => {
                    for (u, &nu) in epi.dual.nu.iter().enumerate() {
                        m.add_objective(nu, da * p[u], "eq57a")?;
                    }
                    asm.probabilities = Some(p);
                }
                None => {
                    let shaping = build_shaping(
                        m,
                        &scen.support,
                        &scen.units,
                        &asm.inv.w_hy,
                        cfg.reduction.bundling,
                    )?;
                    // With η = 0 every ν_n lies in [0, V̄], and each π_u in
                    // its mass range over all siting vectors.
                    m.set_bounds(epi.dual.eta, 0.0, 0.0)?;
                    for (u, &nu) in epi.dual.nu.iter().enumerate() {
                        m.set_bounds(nu, 0.0, nu_bound)?;
                        let (lo, hi) = units[u].mass_bounds(&scen.support);
                        let pi = shaping.last()[u];
                        let psi =
                            m.add_variable(VarSpec::free(format!("psi_u{u}")).tag("eq42psi"))?;
                        // ψ ≥ π_lo·ν and ψ ≥ π_hi·ν + V̄π − V̄π_hi
                        m.add_constraint([(psi, 1.0), (nu, -lo)], Sense::Ge, 0.0, "eq42mc")?;
                        m.add_constraint(
                            [(psi, 1.0), (nu, -hi), (pi, -nu_bound)],
                            Sense::Ge,
                            -nu_bound * hi,
                            "eq42mc",
                        )?;
                        m.add_objective(psi, da, "eq57a")?;
                        asm.envelope.push(psi);
                    }
                    asm.shaping = Some(shaping);
                }
            }
            asm.epigraph = Some(epi);
        }
    }
    Ok(asm)
}
