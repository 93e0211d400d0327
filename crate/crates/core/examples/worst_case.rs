//! Solves the decision-dependent case and prints, per scenario unit, the
//! daily cost with its empirical and worst-case probability.
//!
//! cargo run --release --example worst_case -- tiny2

use ddu_planner::dro::{solve_plan, Mode, PlanConfig};
use ddu_planner::instances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "tiny2".into());
    let net = instances::resolve(&spec)?;
    let sol = solve_plan(&net, &PlanConfig::from_network(&net, Mode::DduDro))?;
    println!(
        "pattern {} objective {:.2}",
        sol.pattern.bits(),
        sol.objective
    );
    for u in 0..sol.unit_labels.len() {
        println!(
            "{:<16} cost {:>10.2}  empirical {:.4}  worst case {:.4}",
            sol.unit_labels[u], sol.outcomes[u], sol.empirical[u], sol.worst_case[u]
        );
    }
    println!(
        "transport {:.4} of radius {}",
        sol.transport, sol.config.radius
    );
    Ok(())
}
