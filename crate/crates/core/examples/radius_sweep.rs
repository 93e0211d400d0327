//! Sweeps the Wasserstein radius from zero to the support diameter.
//!
//! cargo run --release --example radius_sweep -- tiny2 ddu-dro 5

use ddu_planner::dro::{radius_sweep, Mode, PlanConfig};
use ddu_planner::instances;
use ddu_planner::scenario::ScenarioSupport;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let net = instances::resolve(&args.next().unwrap_or_else(|| "tiny2".into()))?;
    let mode: Mode = args.next().unwrap_or_else(|| "ddu-dro".into()).parse()?;
    let points: usize = args.next().unwrap_or_else(|| "5".into()).parse()?;
    let diameter = ScenarioSupport::from_network(&net)?.diameter();
    let radii: Vec<f64> = (0..points)
        .map(|k| diameter * k as f64 / (points.max(2) - 1) as f64)
        .collect();
    let base = PlanConfig::from_network(&net, mode);
    for (r, sol) in radius_sweep(&net, &base, &radii) {
        let sol = sol?;
        println!(
            "r {r:>8.2}  objective {:>14.2}  pattern {}  epsilon {:.4}",
            sol.objective,
            sol.pattern.bits(),
            sol.epsilon.unwrap_or(0.0)
        );
    }
    Ok(())
}
