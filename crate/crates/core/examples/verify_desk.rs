//! Runs the oracle checks on an instance and prints one line per
//! comparison.
//!
//! cargo run --release --example verify_desk -- tiny2 [check ...]

use ddu_planner::dro::{Mode, PlanConfig};
use ddu_planner::instances;
use ddu_planner::oracle::{verify_instance, Check, VerifyPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let net = instances::resolve(&args.next().unwrap_or_else(|| "tiny2".into()))?;
    let checks: Vec<Check> = args.map(|a| a.parse()).collect::<Result<_, _>>()?;
    let mut plan = VerifyPlan::for_network(&net);
    if !checks.is_empty() {
        plan.checks = checks;
    }
    let base = PlanConfig::from_network(&net, Mode::DduDro);
    for r in verify_instance(&net, &base, &plan)? {
        println!(
            "{:<5} {:<12} {:<28} oracle {:>16.6} pipeline {:>16.6} rel {:.2e} ({:.2}s)",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.case,
            r.oracle,
            r.pipeline,
            r.rel_dev,
            r.runtime.as_secs_f64()
        );
    }
    Ok(())
}
