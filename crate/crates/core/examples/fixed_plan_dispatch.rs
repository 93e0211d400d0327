//! Solves the daily dispatch of one demand scenario under a fixed
//! investment pattern and prints the operation cost by family.
//!
//! cargo run --example fixed_plan_dispatch -- tiny2

use ddu_milp::{solve_milp, MilpModel, MilpOptions};
use ddu_planner::instances;
use ddu_planner::model::{
    build_dispatch, build_investment, fix_pattern, investment_patterns, CostFamily,
    DispatchOptions, Realization,
};
use ddu_planner::scenario::{screen_feasible, ScenarioSupport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "tiny2".into());
    let net = instances::resolve(&spec)?;
    let support = ScenarioSupport::from_network(&net)?;
    let feasible = screen_feasible(&support, &net)?;
    let n = (0..support.len())
        .rev()
        .find(|&n| feasible[n])
        .ok_or("no feasible scenario")?;
    let pattern = investment_patterns(&net)
        .pop()
        .ok_or("no investment pattern")?;

    let mut m = MilpModel::new("dispatch");
    let inv = build_investment(&mut m, &net)?;
    fix_pattern(&mut m, &inv, &pattern)?;
    let demand = Realization::from_daily(support.daily_totals(n), support.trip());
    let options = DispatchOptions {
        pipeline_segments: net.segments.pipeline,
        traffic_segments: net.segments.traffic,
        beta: net.economics.fulfillment_rate,
    };
    let d = build_dispatch(&mut m, &net, &inv, &demand, &options, "")?;
    for c in &d.cost {
        m.add_objective(c.var, c.coeff, "cost")?;
    }
    let r = solve_milp(&m, &MilpOptions::default())?;
    println!(
        "scenario {n} {:?}, pattern {}: {:?}, daily cost {:.2}",
        support.daily_totals(n),
        pattern.bits(),
        r.status,
        r.objective
    );
    for family in CostFamily::ALL.iter().filter(|f| !f.is_investment()) {
        let v: f64 = d
            .cost
            .iter()
            .filter(|c| c.family == *family)
            .map(|c| c.coeff * r.value(c.var))
            .sum();
        println!("  {:<26} {v:>12.2}", family.label());
    }
    Ok(())
}
