//! Solves the robust, stochastic and both distributionally robust cases
//! and prints their cost breakdowns side by side.
//!
//! cargo run --release --example compare_cases -- tiny2

use ddu_planner::dro::{compare_modes, Mode, PlanConfig};
use ddu_planner::instances;
use ddu_planner::model::CostFamily;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "tiny2".into());
    let net = instances::resolve(&spec)?;
    let base = PlanConfig::from_network(&net, Mode::DduDro);
    let results = compare_modes(&net, &base);
    print!("{:<26}", "");
    for (mode, _) in &results {
        print!("{:>14}", mode.label());
    }
    println!();
    for family in CostFamily::ALL {
        print!("{:<26}", family.label());
        for (_, r) in &results {
            match r {
                Ok(s) => print!("{:>14.0}", s.cost(family)),
                Err(_) => print!("{:>14}", "-"),
            }
        }
        println!();
    }
    print!("{:<26}", "Total");
    for (mode, r) in &results {
        match r {
            Ok(s) => print!("{:>14.0}", s.total_cost),
            Err(e) => eprintln!("{mode}: {e}"),
        }
    }
    println!();
    Ok(())
}
