use ddu_milp::{solve_lp, MilpModel, Sense, VarSpec};

use super::ScenarioSet;
use crate::error::PlanError;

/// Worst-case distribution over units for fixed outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    /// sup over the ball of the expected outcome.
    pub value: f64,
    /// p*, the worst-case probability of each unit.
    pub probabilities: Vec<f64>,
    /// Transport cost Σ d ω of the optimal plan.
    pub transport: f64,
}

/// Transport LP: move mass from `p_hat` to maximize the expected outcome at
/// transport cost at most `radius`. Screened-out units keep their mass.
pub fn worst_case_distribution(
    scen: &ScenarioSet,
    p_hat: &[f64],
    outcomes: &[f64],
    radius: f64,
) -> Result<WorstCase, PlanError> {
    let units = scen.units.units();
    let mut m = MilpModel::new("worst-case");
    let mut flows = Vec::new();
    for (n, un) in units.iter().enumerate() {
        for (j, uj) in units.iter().enumerate() {
            let allowed = if un.active { uj.active } else { n == j };
            if !allowed {
                continue;
            }
            let d = if n == j {
                0.0
            } else {
                scen.support
                    .distance(un.representative(), uj.representative())
            };
            let w = m.add_variable(VarSpec::continuous(format!("w_{n}_{j}")).tag("plan"))?;
            m.add_objective(w, -outcomes[j], "value")?;
            flows.push((n, j, d, w));
        }
    }
    for n in 0..units.len() {
        m.add_constraint(
            flows.iter().filter(|f| f.0 == n).map(|f| (f.3, 1.0)),
            Sense::Eq,
            p_hat[n],
            "source",
        )?;
    }
    m.add_constraint(
        flows.iter().map(|f| (f.3, f.2)),
        Sense::Le,
        radius,
        "budget",
    )?;
    let r = solve_lp(&m)?;
    if !r.is_optimal() {
        return Err(PlanError::NotOptimal {
            context: "worst-case distribution".into(),
            status: r.status,
        });
    }
    let mut probabilities = vec![0.0; units.len()];
    let mut transport = 0.0;
    for &(_, j, d, w) in &flows {
        let v = r.value(w).max(0.0);
        probabilities[j] += v;
        transport += d * v;
    }
    Ok(WorstCase {
        value: -r.objective,
        probabilities,
        transport,
    })
}
