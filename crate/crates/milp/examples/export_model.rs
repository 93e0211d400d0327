//! Writes a small model as MPS and LP text to standard output.

use ddu_milp::{lp_string, mps_string, MilpModel, Sense, VarSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut m = MilpModel::new("blend");
    let x = m.add_variable(VarSpec::continuous("x").upper(10.0).tag("mix"))?;
    let y = m.add_variable(VarSpec::continuous("y").tag("mix"))?;
    let z = m.add_variable(VarSpec::binary("use_z").tag("switch"))?;
    m.add_constraint([(x, 1.0), (y, 1.0)], Sense::Ge, 4.0, "need")?;
    m.add_constraint([(y, 1.0), (z, -8.0)], Sense::Le, 0.0, "link")?;
    m.add_objective(x, 3.0, "cost")?;
    m.add_objective(y, 1.0, "cost")?;
    m.add_objective(z, 2.0, "cost")?;
    println!("{}", mps_string(&m));
    println!("{}", lp_string(&m));
    Ok(())
}
