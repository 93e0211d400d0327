use ddu_milp::{MilpModel, Sense, VarId, VarSpec};

use super::{BundleSet, ScenarioError, ScenarioSupport};

/// Shaping variables: one layer per node, one column per unit.
#[derive(Debug, Clone)]
pub struct ShapingBlock {
    /// `layers[b - 1][u]` is π_{b,u} (σ_{b,u} for bundled units).
    pub layers: Vec<Vec<VarId>>,
    /// π_{0,u}: baseline mass of each unit.
    pub baseline: Vec<f64>,
    /// Row and variable tag used (`eq41` or `eq49`).
    pub tag: &'static str,
}

impl ShapingBlock {
    /// π_{N_b,·}, the probabilities under the full siting vector.
    pub fn last(&self) -> &[VarId] {
        self.layers.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Registers the truncation layers. For each node `b` and unit `u`:
///
/// * π_{b,u} − ratio_b(u)·π_{b−1,u} + w_b ≤ 1
/// * π_{b,u} − π_{b−1,u} − w_b ≤ 0
/// * Σ_u π_{b,u} = 1
///
/// With `w` binary the rows admit exactly the product-form masses.
pub fn build_shaping(
    model: &mut MilpModel,
    support: &ScenarioSupport,
    units: &BundleSet,
    w: &[VarId],
    bundled: bool,
) -> Result<ShapingBlock, ScenarioError> {
    let tag = if bundled { "eq49" } else { "eq41" };
    let sym = if bundled { "sigma" } else { "pi" };
    let baseline: Vec<f64> = units
        .units()
        .iter()
        .map(|u| u.baseline_mass(support))
        .collect();
    let mut layers: Vec<Vec<VarId>> = Vec::with_capacity(support.num_nodes());
    for b in 0..support.num_nodes() {
        let mut layer = Vec::with_capacity(units.len());
        for u in 0..units.len() {
            layer.push(
                model.add_variable(
                    VarSpec::continuous(format!("{sym}_b{}_u{u}", b + 1))
                        .bounds(0.0, 1.0)
                        .tag(tag),
                )?,
            );
        }
        for (u, unit) in units.units().iter().enumerate() {
            let ratio = unit.ratio(support, b);
            let cur = layer[u];
            match layers.last() {
                None => {
                    model.add_constraint(
                        [(cur, 1.0), (w[b], 1.0)],
                        Sense::Le,
                        1.0 + ratio * baseline[u],
                        format!("{tag}a"),
                    )?;
                    model.add_constraint(
                        [(cur, 1.0), (w[b], -1.0)],
                        Sense::Le,
                        baseline[u],
                        format!("{tag}b"),
                    )?;
                }
                Some(prev) => {
                    model.add_constraint(
                        [(cur, 1.0), (prev[u], -ratio), (w[b], 1.0)],
                        Sense::Le,
                        1.0,
                        format!("{tag}a"),
                    )?;
                    model.add_constraint(
                        [(cur, 1.0), (prev[u], -1.0), (w[b], -1.0)],
                        Sense::Le,
                        0.0,
                        format!("{tag}b"),
                    )?;
                }
            }
        }
        model.add_constraint(
            layer.iter().map(|&v| (v, 1.0)),
            Sense::Eq,
            1.0,
            format!("{tag}c"),
        )?;
        layers.push(layer);
    }
    Ok(ShapingBlock {
        layers,
        baseline,
        tag,
    })
}
