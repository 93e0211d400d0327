//! Loads an instance and prints the derived network constants.
//!
//! cargo run --example network_summary -- small4

use ddu_planner::instances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "tiny2".into());
    let net = instances::resolve(&spec)?;
    println!(
        "{}: {} periods, {} days per year",
        net.name, net.hours, net.days_per_year
    );
    println!("daily HFCV demand {:.1} kg", net.daily_hfcv_demand());
    println!("P2G yield {:.3} kg/MWh", net.hydrogen.p2g_yield());
    for n in &net.hydrogen.nodes {
        println!(
            "node {:<3} bus {:<4} levels {:?} p0 {:?} p1 {:?}",
            n.id, n.bus, n.levels, n.p0, n.p1
        );
    }
    for p in &net.hydrogen.pipelines {
        println!(
            "pipeline {} {}-{}: phi {:.1} psi {:.2}",
            p.id,
            p.from,
            p.to,
            p.phi(),
            p.psi()
        );
    }
    for l in &net.traffic.links {
        println!(
            "link {} {}->{}: t0 {} C {} x_max {}",
            l.id, l.from, l.to, l.free_flow_time, l.capacity, l.flow_cap
        );
    }
    Ok(())
}
