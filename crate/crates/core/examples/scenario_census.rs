//! Enumerates the demand scenarios, screens them against the traffic rows
//! and prints the census with bundle assignments.
//!
//! cargo run --example scenario_census -- small4

use ddu_planner::instances;
use ddu_planner::scenario::{bundle_scenarios, screen_feasible, ScenarioSupport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "small4".into());
    let net = instances::resolve(&spec)?;
    let support = ScenarioSupport::from_network(&net)?;
    let feasible = screen_feasible(&support, &net)?;
    let units = bundle_scenarios(&support, &feasible, true)?;
    print!("{}", support.census_csv(&feasible, &units));
    eprintln!(
        "{} scenarios, {} screened in, {} units after bundling, diameter {}",
        support.len(),
        feasible.iter().filter(|&&f| f).count(),
        units.len(),
        support.diameter()
    );
    Ok(())
}
