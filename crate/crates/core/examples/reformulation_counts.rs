//! Assembles the decision-independent model under every reduction and
//! compares the epigraph block with its closed-form size.
//!
//! cargo run --example reformulation_counts -- small4

use ddu_planner::dro::{assemble, prepare_scenarios, reformulation_report, Mode, PlanConfig};
use ddu_planner::instances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "small4".into());
    let net = instances::resolve(&spec)?;
    for label in ["none", "redundancy", "comonotone", "bundling", "all"] {
        let mut cfg = PlanConfig::from_network(&net, Mode::DiuDro);
        cfg.reduction = label.parse()?;
        let scen = prepare_scenarios(&net, cfg.mode, cfg.reduction.bundling)?;
        let asm = assemble(&net, &scen, &cfg, None)?;
        let r = reformulation_report(&asm, &scen, cfg.reduction);
        let expected = r
            .expected
            .map(|e| format!("{} / {}", e.rows, e.vars))
            .unwrap_or_else(|| "-".into());
        println!(
            "{label:<11} units {:>3} active {:>3} block {} / {} expected {expected:<14} total {} rows {} vars",
            r.units, r.active, r.block.rows, r.block.vars, r.total_rows, r.total_vars
        );
    }
    Ok(())
}
