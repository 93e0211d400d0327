use ddu_milp::{lp_upper_ranges, MilpModel, VarSpec};

use crate::error::PlanError;
use crate::scenario::{build_shaping, BundleSet, ScenarioSupport};

/// Product-form scenario probabilities under siting `w`, evaluated directly.
pub fn probability_oracle(support: &ScenarioSupport, w: &[bool]) -> Vec<f64> {
    (0..support.len())
        .map(|n| {
            let mut p = 1.0;
            for (i, &k) in support.tuple(n).iter().enumerate() {
                p *= if w[i] {
                    support.p1(i)[k]
                } else {
                    support.p0(i)[k]
                };
            }
            p
        })
        .collect()
}

/// Range of each unit's last-layer shaping value over the shaping polyhedron
/// with `w` fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapingRange {
    pub upper: Vec<f64>,
    /// 1 − Σ_u upper_u: zero (up to round-off) exactly when the polyhedron
    /// is a single point.
    pub slack: f64,
}

/// Maximizes every last-layer variable of the shaping block separately.
/// Because the layer sums to one, the block pins the distribution when the
/// maxima also sum to one.
pub fn shaping_range(
    support: &ScenarioSupport,
    units: &BundleSet,
    w: &[bool],
    bundled: bool,
) -> Result<ShapingRange, PlanError> {
    let mut m = MilpModel::new("shaping-range");
    let mut wv = Vec::with_capacity(w.len());
    for (i, &on) in w.iter().enumerate() {
        let v = if on { 1.0 } else { 0.0 };
        wv.push(m.add_variable(VarSpec::continuous(format!("w_{i}")).bounds(v, v).tag("w"))?);
    }
    let block = build_shaping(&mut m, support, units, &wv, bundled)?;
    let upper = lp_upper_ranges(&m, block.last())?;
    let slack = 1.0 - upper.iter().sum::<f64>();
    Ok(ShapingRange { upper, slack })
}
