use ddu_milp::{solve_lp, MilpModel, Sense, VarSpec};

use crate::error::PlanError;
use crate::scenario::ScenarioSupport;

/// Largest support the primal transport LP accepts.
pub const INNER_SCALE_LIMIT: usize = 64;

/// Constraint residuals of a transport plan.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransportResiduals {
    /// max_n |Σ_j ω_nj − p̂_n|
    pub source: f64,
    /// max_j |Σ_n ω_nj − p_j|
    pub target: f64,
    /// max(0, Σ d ω − r)
    pub budget: f64,
    /// max(0, −min ω)
    pub negativity: f64,
}

impl TransportResiduals {
    pub fn max(&self) -> f64 {
        self.source
            .max(self.target)
            .max(self.budget)
            .max(self.negativity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerPrimal {
    /// Worst-case expected outcome.
    pub value: f64,
    /// Worst-case probabilities p.
    pub probabilities: Vec<f64>,
    /// Transport entries (from, to, mass) with positive mass.
    pub plan: Vec<(usize, usize, f64)>,
    pub transport_cost: f64,
    pub residuals: TransportResiduals,
}

fn level_distance(support: &ScenarioSupport, n: usize, j: usize) -> f64 {
    let (a, b) = (support.tuple(n), support.tuple(j));
    (0..support.num_nodes())
        .map(|i| (support.levels(i)[a[i]] - support.levels(i)[b[i]]).abs())
        .sum()
}

/// Inner worst-case expectation as a transport LP over scenarios:
/// max Σ_j p_j h_j over plans ω with row sums p̂, column sums p and
/// transport cost at most `radius`.
///
/// Scenarios with `feasible[n] == false` have outcome zero and keep their
/// mass; `outcomes` is ignored for them.
pub fn primal_inner_lp(
    support: &ScenarioSupport,
    feasible: &[bool],
    p_hat: &[f64],
    outcomes: &[f64],
    radius: f64,
) -> Result<InnerPrimal, PlanError> {
    let n = support.len();
    if n > INNER_SCALE_LIMIT {
        return Err(PlanError::ScaleGuard(format!(
            "primal inner LP on {n} scenarios (limit {INNER_SCALE_LIMIT})"
        )));
    }
    if feasible.len() != n || p_hat.len() != n || outcomes.len() != n {
        return Err(PlanError::Options(
            "inner LP inputs differ in length".into(),
        ));
    }
    let h: Vec<f64> = (0..n)
        .map(|j| if feasible[j] { outcomes[j] } else { 0.0 })
        .collect();
    let mut m = MilpModel::new("inner-primal");
    let mut omega = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || (feasible[a] && feasible[b]) {
                let v =
                    m.add_variable(VarSpec::continuous(format!("omega_{a}_{b}")).tag("eq58e"))?;
                omega.push((a, b, level_distance(support, a, b), v));
            }
        }
    }
    let p: Vec<_> = (0..n)
        .map(|j| m.add_variable(VarSpec::continuous(format!("p_{j}")).tag("eq58p")))
        .collect::<Result<_, _>>()?;
    for a in 0..n {
        m.add_constraint(
            omega.iter().filter(|o| o.0 == a).map(|o| (o.3, 1.0)),
            Sense::Eq,
            p_hat[a],
            "eq58b",
        )?;
    }
    for b in 0..n {
        m.add_constraint(
            omega
                .iter()
                .filter(|o| o.1 == b)
                .map(|o| (o.3, 1.0))
                .chain([(p[b], -1.0)]),
            Sense::Eq,
            0.0,
            "eq58c",
        )?;
    }
    m.add_constraint(omega.iter().map(|o| (o.3, o.2)), Sense::Le, radius, "eq58d")?;
    for j in 0..n {
        m.add_objective(p[j], -h[j], "eq58a")?;
    }
    let r = solve_lp(&m)?;
    if !r.is_optimal() {
        return Err(PlanError::NotOptimal {
            context: "primal inner LP".into(),
            status: r.status,
        });
    }
    let probabilities: Vec<f64> = p.iter().map(|&v| r.value(v)).collect();
    let mut res = TransportResiduals::default();
    let mut row = vec![0.0; n];
    let mut col = vec![0.0; n];
    let mut cost = 0.0;
    let mut plan = Vec::new();
    for &(a, b, d, v) in &omega {
        let x = r.value(v);
        row[a] += x;
        col[b] += x;
        cost += d * x;
        res.negativity = res.negativity.max(-x);
        if x > 0.0 {
            plan.push((a, b, x));
        }
    }
    for k in 0..n {
        res.source = res.source.max((row[k] - p_hat[k]).abs());
        res.target = res.target.max((col[k] - probabilities[k]).abs());
    }
    res.budget = (cost - radius).max(0.0);
    Ok(InnerPrimal {
        value: probabilities.iter().zip(&h).map(|(p, h)| p * h).sum(),
        probabilities,
        plan,
        transport_cost: cost,
        residuals: res,
    })
}

/// Σ_i (max level − min level): the largest transport distance.
pub fn support_diameter(support: &ScenarioSupport) -> f64 {
    (0..support.num_nodes())
        .map(|i| {
            let l = support.levels(i);
            let hi = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = l.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .sum()
}
