//! Row builders for the deterministic coupled-network model.
//!
//! Every row, variable and objective term carries a tag of the form `eqNN`
//! naming the relation it encodes, with a letter suffix where one relation
//! expands into several row families. [`REQUIRED_TAGS`] lists the relations a
//! fully built model must cover.

mod dispatch;
mod traffic;

use ddu_milp::{MilpModel, ModelError, Sense, VarId, VarSpec};

use crate::network::CoupledNetwork;

pub use dispatch::{build_dispatch, Dispatch, DispatchOptions, Realization};
pub use traffic::{build_bpr_delay, build_traffic, traffic_admits, TrafficVars};

/// Relations every fully built model covers (prefix match).
pub const REQUIRED_TAGS: [&str; 35] = [
    "eq02", "eq03", "eq04", "eq05", "eq06", "eq07", "eq08", "eq09", "eq10", "eq11", "eq12", "eq13",
    "eq14", "eq15", "eq16", "eq17", "eq18", "eq19", "eq20", "eq21", "eq22", "eq23", "eq24", "eq25",
    "eq26", "eq27", "eq28", "eq29", "eq30", "eq31", "eq32", "eq51", "eq52", "eq53", "eq54",
];

/// Cost categories of the objective, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CostFamily {
    HrsInvestment,
    P2gInvestment,
    HsInvestment,
    PipelineInvestment,
    PvCurtailment,
    PurchasingHydrogen,
    TrafficCongestion,
    UnservedHydrogen,
    PurchasingElectricity,
    UnservedElectricity,
}

impl CostFamily {
    pub const ALL: [CostFamily; 10] = [
        CostFamily::HrsInvestment,
        CostFamily::P2gInvestment,
        CostFamily::HsInvestment,
        CostFamily::PipelineInvestment,
        CostFamily::PvCurtailment,
        CostFamily::PurchasingHydrogen,
        CostFamily::TrafficCongestion,
        CostFamily::UnservedHydrogen,
        CostFamily::PurchasingElectricity,
        CostFamily::UnservedElectricity,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CostFamily::HrsInvestment => "HRS investment",
            CostFamily::P2gInvestment => "P2G investment",
            CostFamily::HsInvestment => "HS investment",
            CostFamily::PipelineInvestment => "Pipeline investment",
            CostFamily::PvCurtailment => "PV curtailment",
            CostFamily::PurchasingHydrogen => "Purchasing hydrogen",
            CostFamily::TrafficCongestion => "Traffic congestion time",
            CostFamily::UnservedHydrogen => "Unserved hydrogen demand",
            CostFamily::PurchasingElectricity => "Purchasing electricity",
            CostFamily::UnservedElectricity => "Unserved electricity",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CostFamily::HrsInvestment => "eq02hrs",
            CostFamily::P2gInvestment => "eq02p2g",
            CostFamily::HsInvestment => "eq02hs",
            CostFamily::PipelineInvestment => "eq02pip",
            CostFamily::PvCurtailment => "eq03cur",
            CostFamily::PurchasingHydrogen => "eq03mh",
            CostFamily::TrafficCongestion => "eq03tn",
            CostFamily::UnservedHydrogen => "eq03hpe",
            CostFamily::PurchasingElectricity => "eq03mp",
            CostFamily::UnservedElectricity => "eq03epe",
        }
    }

    pub fn is_investment(self) -> bool {
        matches!(
            self,
            CostFamily::HrsInvestment
                | CostFamily::P2gInvestment
                | CostFamily::HsInvestment
                | CostFamily::PipelineInvestment
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostTerm {
    pub var: VarId,
    pub coeff: f64,
    pub family: CostFamily,
}

/// Sums cost terms per family at an assignment.
pub fn evaluate_families(terms: &[CostTerm], values: &[f64]) -> Vec<(CostFamily, f64)> {
    CostFamily::ALL
        .iter()
        .map(|&f| {
            let v = terms
                .iter()
                .filter(|t| t.family == f)
                .map(|t| t.coeff * values[t.var.index()])
                .sum();
            (f, v)
        })
        .collect()
}

/// Investment decisions: siting binaries and capacities per node, build
/// binaries per candidate pipeline.
#[derive(Debug, Clone)]
pub struct InvestmentVars {
    pub w_hy: Vec<VarId>,
    pub w_p2g: Vec<VarId>,
    pub w_hs: Vec<VarId>,
    pub h_hy: Vec<VarId>,
    pub h_p2g: Vec<VarId>,
    pub h_hs: Vec<VarId>,
    pub w_pipe: Vec<VarId>,
    /// Annual investment cost terms.
    pub cost: Vec<CostTerm>,
}

/// Registers investment variables with the capacity windows, siting logic
/// and radial pipeline count.
pub fn build_investment(
    model: &mut MilpModel,
    net: &CoupledNetwork,
) -> Result<InvestmentVars, ModelError> {
    let h = &net.hydrogen;
    let e = &net.economics;
    let mut inv = InvestmentVars {
        w_hy: Vec::new(),
        w_p2g: Vec::new(),
        w_hs: Vec::new(),
        h_hy: Vec::new(),
        h_p2g: Vec::new(),
        h_hs: Vec::new(),
        w_pipe: Vec::new(),
        cost: Vec::new(),
    };
    for (i, node) in h.nodes.iter().enumerate() {
        let w_hy = model.add_variable(VarSpec::binary(format!("w_hy_{i}")).tag("eq12w"))?;
        let w_p2g = model.add_variable(VarSpec::binary(format!("w_p2g_{i}")).tag("eq14w"))?;
        let w_hs = model.add_variable(VarSpec::binary(format!("w_hs_{i}")).tag("eq13w"))?;
        let h_hy = model.add_variable(
            VarSpec::continuous(format!("h_hy_{i}"))
                .upper(node.hrs[1])
                .tag("eq12h"),
        )?;
        let h_p2g = model.add_variable(
            VarSpec::continuous(format!("h_p2g_{i}"))
                .upper(node.p2g[1])
                .tag("eq14h"),
        )?;
        let h_hs = model.add_variable(
            VarSpec::continuous(format!("h_hs_{i}"))
                .upper(node.hs[1])
                .tag("eq13h"),
        )?;
        for (cap, w, win, tag) in [
            (h_hy, w_hy, node.hrs, "eq12"),
            (h_hs, w_hs, node.hs, "eq13"),
            (h_p2g, w_p2g, node.p2g, "eq14"),
        ] {
            model.add_constraint([(cap, 1.0), (w, -win[0])], Sense::Ge, 0.0, tag)?;
            model.add_constraint([(cap, 1.0), (w, -win[1])], Sense::Le, 0.0, tag)?;
        }
        model.add_constraint([(w_p2g, 1.0), (w_hy, -1.0)], Sense::Le, 0.0, "eq15a")?;
        model.add_constraint([(w_hy, 1.0), (w_hs, -1.0)], Sense::Eq, 0.0, "eq15b")?;
        inv.cost.push(CostTerm {
            var: h_hy,
            coeff: e.hrs_cost,
            family: CostFamily::HrsInvestment,
        });
        inv.cost.push(CostTerm {
            var: h_p2g,
            coeff: e.p2g_cost,
            family: CostFamily::P2gInvestment,
        });
        inv.cost.push(CostTerm {
            var: h_hs,
            coeff: e.hs_cost,
            family: CostFamily::HsInvestment,
        });
        inv.w_hy.push(w_hy);
        inv.w_p2g.push(w_p2g);
        inv.w_hs.push(w_hs);
        inv.h_hy.push(h_hy);
        inv.h_p2g.push(h_p2g);
        inv.h_hs.push(h_hs);
    }
    for (l, pipe) in h.pipelines.iter().enumerate() {
        let w = model.add_variable(VarSpec::binary(format!("w_pipe_{l}")).tag("eq16w"))?;
        inv.cost.push(CostTerm {
            var: w,
            coeff: pipe.annual_cost,
            family: CostFamily::PipelineInvestment,
        });
        inv.w_pipe.push(w);
    }
    if !inv.w_pipe.is_empty() {
        let limit = h.nodes.len() as f64 - h.num_sources() as f64;
        model.add_constraint(
            inv.w_pipe.iter().map(|&w| (w, 1.0)),
            Sense::Le,
            limit,
            "eq16",
        )?;
    }
    Ok(inv)
}

/// A fixed pattern of investment binaries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvestmentPattern {
    pub w_hy: Vec<bool>,
    pub w_p2g: Vec<bool>,
    pub w_pipe: Vec<bool>,
}

impl InvestmentPattern {
    /// Storage follows the HRS decision.
    pub fn w_hs(&self) -> &[bool] {
        &self.w_hy
    }

    /// `hy/p2g/pipe` bit strings, e.g. `10/10/1`.
    pub fn bits(&self) -> String {
        let s = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        format!("{}/{}/{}", s(&self.w_hy), s(&self.w_p2g), s(&self.w_pipe))
    }
}

fn fix(model: &mut MilpModel, var: VarId, on: bool) -> Result<(), ModelError> {
    let v = if on { 1.0 } else { 0.0 };
    model.set_bounds(var, v, v)
}

/// Fixes only the HRS (and hence storage) siting binaries.
pub fn fix_siting(
    model: &mut MilpModel,
    inv: &InvestmentVars,
    w_hy: &[bool],
) -> Result<(), ModelError> {
    for (i, &on) in w_hy.iter().enumerate() {
        fix(model, inv.w_hy[i], on)?;
        fix(model, inv.w_hs[i], on)?;
    }
    Ok(())
}

/// Fixes every investment binary; capacities stay free within their windows.
pub fn fix_pattern(
    model: &mut MilpModel,
    inv: &InvestmentVars,
    pattern: &InvestmentPattern,
) -> Result<(), ModelError> {
    fix_siting(model, inv, &pattern.w_hy)?;
    for (i, &on) in pattern.w_p2g.iter().enumerate() {
        fix(model, inv.w_p2g[i], on)?;
    }
    for (l, &on) in pattern.w_pipe.iter().enumerate() {
        fix(model, inv.w_pipe[l], on)?;
    }
    Ok(())
}

/// Reads the binary pattern from a solution vector.
pub fn read_pattern(inv: &InvestmentVars, values: &[f64]) -> InvestmentPattern {
    let b = |v: &[VarId]| v.iter().map(|x| values[x.index()] > 0.5).collect();
    InvestmentPattern {
        w_hy: b(&inv.w_hy),
        w_p2g: b(&inv.w_p2g),
        w_pipe: b(&inv.w_pipe),
    }
}

/// Investment patterns consistent with the siting logic and the radial
/// pipeline count, in ascending bit order.
pub fn investment_patterns(net: &CoupledNetwork) -> Vec<InvestmentPattern> {
    let nb = net.hydrogen.nodes.len();
    let nl = net.hydrogen.pipelines.len();
    let limit = nb - net.hydrogen.num_sources();
    let bits = |mask: usize, n: usize| {
        (0..n)
            .map(|i| mask >> (n - 1 - i) & 1 == 1)
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for hy in 0..1usize << nb {
        let w_hy = bits(hy, nb);
        for p2g in 0..1usize << nb {
            if p2g & !hy != 0 {
                continue;
            }
            let w_p2g = bits(p2g, nb);
            for pipe in 0..1usize << nl {
                if (pipe.count_ones() as usize) > limit {
                    continue;
                }
                out.push(InvestmentPattern {
                    w_hy: w_hy.clone(),
                    w_p2g: w_p2g.clone(),
                    w_pipe: bits(pipe, nl),
                });
            }
        }
    }
    out
}

/// Adds `Σ investment + Σ_k weight_k · Da · operation_k` to the objective,
/// each term tagged with its cost family.
pub fn build_objective(
    model: &mut MilpModel,
    net: &CoupledNetwork,
    inv: &InvestmentVars,
    weighted: &[(f64, &[CostTerm])],
) -> Result<(), ModelError> {
    for t in &inv.cost {
        model.add_objective(t.var, t.coeff, t.family.tag())?;
    }
    for &(weight, terms) in weighted {
        for t in terms {
            model.add_objective(t.var, weight * net.days_per_year * t.coeff, t.family.tag())?;
        }
    }
    Ok(())
}
