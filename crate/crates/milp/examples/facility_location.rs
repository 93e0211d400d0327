//! Open facilities and serve customers at least cost, then print the plan
//! and the search statistics.

use ddu_milp::{solve_milp, MilpModel, MilpOptions, Sense, VarSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let open_cost = [120.0, 90.0, 150.0];
    let capacity = [60.0, 40.0, 80.0];
    let demand = [25.0, 30.0, 20.0, 35.0];
    let unit_cost = [
        [4.0, 6.0, 9.0, 5.0],
        [5.0, 3.0, 7.0, 8.0],
        [8.0, 7.0, 2.0, 3.0],
    ];

    let mut m = MilpModel::new("facility-location");
    let mut open = Vec::new();
    let mut ship = Vec::new();
    for f in 0..open_cost.len() {
        let y = m.add_variable(VarSpec::binary(format!("open_{f}")).tag("open"))?;
        m.add_objective(y, open_cost[f], "fixed")?;
        let row: Vec<_> = (0..demand.len())
            .map(|c| m.add_variable(VarSpec::continuous(format!("ship_{f}_{c}")).tag("ship")))
            .collect::<Result<_, _>>()?;
        for (c, &x) in row.iter().enumerate() {
            m.add_objective(x, unit_cost[f][c], "transport")?;
        }
        let mut cap: Vec<_> = row.iter().map(|&x| (x, 1.0)).collect();
        cap.push((y, -capacity[f]));
        m.add_constraint(cap, Sense::Le, 0.0, "capacity")?;
        open.push(y);
        ship.push(row);
    }
    for (c, &d) in demand.iter().enumerate() {
        m.add_constraint(ship.iter().map(|row| (row[c], 1.0)), Sense::Eq, d, "demand")?;
    }

    let r = solve_milp(&m, &MilpOptions::default())?;
    println!("status {:?}, cost {:.2}", r.status, r.objective);
    for (f, &y) in open.iter().enumerate() {
        if r.value(y) > 0.5 {
            let served: Vec<String> = ship[f]
                .iter()
                .enumerate()
                .filter(|(_, &x)| r.value(x) > 1e-9)
                .map(|(c, &x)| format!("c{c}:{:.0}", r.value(x)))
                .collect();
            println!("facility {f} open, serves {}", served.join(" "));
        }
    }
    println!("{} nodes, {} simplex iterations", r.nodes, r.iterations);
    Ok(())
}
