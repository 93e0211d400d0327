use super::{ScenarioError, ScenarioSupport};

/// A product set of level indices, one set per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioUnit {
    /// Level indices per node, ascending.
    pub sets: Vec<Vec<usize>>,
    /// Member scenario indices, ascending.
    pub members: Vec<usize>,
    /// Active units carry a dispatch block; inactive units failed the traffic
    /// screen and have outcome zero.
    pub active: bool,
}

impl ScenarioUnit {
    pub fn singleton(support: &ScenarioSupport, n: usize, active: bool) -> Self {
        Self {
            sets: support.tuple(n).iter().map(|&k| vec![k]).collect(),
            members: vec![n],
            active,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    /// Scenario standing in for the unit (its first member).
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    /// Ratio Σ_{k∈S_b} p1 / Σ_{k∈S_b} p0 at node `b`.
    pub fn ratio(&self, support: &ScenarioSupport, b: usize) -> f64 {
        let s1: f64 = self.sets[b].iter().map(|&k| support.p1(b)[k]).sum();
        let s0: f64 = self.sets[b].iter().map(|&k| support.p0(b)[k]).sum();
        s1 / s0
    }

    /// Probability mass of the unit under siting `w`.
    pub fn mass(&self, support: &ScenarioSupport, w: &[bool]) -> f64 {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.iter()
                    .map(|&k| support.level_probability(i, k, w[i]))
                    .sum::<f64>()
            })
            .product()
    }

    /// Smallest and largest mass over all siting vectors.
    pub fn mass_bounds(&self, support: &ScenarioSupport) -> (f64, f64) {
        let mut lo = 1.0;
        let mut hi = 1.0;
        for (i, s) in self.sets.iter().enumerate() {
            let m0: f64 = s.iter().map(|&k| support.p0(i)[k]).sum();
            let m1: f64 = s.iter().map(|&k| support.p1(i)[k]).sum();
            lo *= m0.min(m1);
            hi *= m0.max(m1);
        }
        (lo, hi)
    }

    pub fn baseline_mass(&self, support: &ScenarioSupport) -> f64 {
        self.mass(support, &vec![false; support.num_nodes()])
    }

    /// Meta-value label: a level index per node, `*` when the node ranges
    /// over all of its levels, or `{a|b}` for other subsets.
    pub fn label(&self, support: &ScenarioSupport) -> String {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.len() == 1 {
                    s[0].to_string()
                } else if s.len() == support.num_levels(i) {
                    "*".to_string()
                } else {
                    let parts: Vec<String> = s.iter().map(|k| k.to_string()).collect();
                    format!("{{{}}}", parts.join("|"))
                }
            })
            .collect::<Vec<_>>()
            .join("-")
    }
}

fn members_of(support: &ScenarioSupport, sets: &[Vec<usize>]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..support.len())
        .filter(|&n| {
            support
                .tuple(n)
                .iter()
                .zip(sets)
                .all(|(k, s)| s.contains(k))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Partition of the scenario set into units.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleSet {
    units: Vec<ScenarioUnit>,
    unit_of: Vec<usize>,
}

impl BundleSet {
    /// Validates that `units` partition the support and that no unit mixes
    /// screened-in and screened-out scenarios.
    pub fn from_units(
        support: &ScenarioSupport,
        units: Vec<ScenarioUnit>,
        feasible: &[bool],
    ) -> Result<Self, ScenarioError> {
        let mut unit_of = vec![usize::MAX; support.len()];
        for (u, unit) in units.iter().enumerate() {
            if unit.members != members_of(support, &unit.sets) {
                return Err(ScenarioError::NotPartition(format!(
                    "unit {u} members do not match its level sets"
                )));
            }
            if unit.members.iter().any(|&n| feasible[n] != unit.active) {
                return Err(ScenarioError::MixedBundle { bundle: u });
            }
            if unit.active && unit.members.len() != 1 {
                return Err(ScenarioError::MixedBundle { bundle: u });
            }
            for &n in &unit.members {
                if unit_of[n] != usize::MAX {
                    return Err(ScenarioError::NotPartition(format!(
                        "scenario {n} is in units {} and {u}",
                        unit_of[n]
                    )));
                }
                unit_of[n] = u;
            }
        }
        if let Some(n) = unit_of.iter().position(|&u| u == usize::MAX) {
            return Err(ScenarioError::NotPartition(format!(
                "scenario {n} is uncovered"
            )));
        }
        Ok(Self { units, unit_of })
    }

    /// One unit per scenario.
    pub fn identity(support: &ScenarioSupport, feasible: &[bool]) -> Self {
        let units = (0..support.len())
            .map(|n| ScenarioUnit::singleton(support, n, feasible[n]))
            .collect();
        Self {
            units,
            unit_of: (0..support.len()).collect(),
        }
    }

    pub fn units(&self) -> &[ScenarioUnit] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn unit_of(&self, n: usize) -> usize {
        self.unit_of[n]
    }

    pub fn num_active(&self) -> usize {
        self.units.iter().filter(|u| u.active).count()
    }

    pub fn active_units(&self) -> impl Iterator<Item = usize> + '_ {
        self.units
            .iter()
            .enumerate()
            .filter(|(_, u)| u.active)
            .map(|(i, _)| i)
    }

    pub fn masses(&self, support: &ScenarioSupport, w: &[bool]) -> Vec<f64> {
        self.units.iter().map(|u| u.mass(support, w)).collect()
    }
}

/// Groups screened-out scenarios into product-set bundles.
///
/// Greedy and deterministic: the lowest uncovered screened-out scenario seeds
/// a box, which then grows one node at a time (nodes in order, candidate
/// levels ascending) while every scenario in the grown box is screened out
/// and uncovered. Screened-in scenarios stay singletons.
pub fn bundle_scenarios(
    support: &ScenarioSupport,
    feasible: &[bool],
    enabled: bool,
) -> Result<BundleSet, ScenarioError> {
    if !enabled {
        return Ok(BundleSet::identity(support, feasible));
    }
    let mut covered = vec![false; support.len()];
    let mut boxes: Vec<(usize, ScenarioUnit)> = Vec::new();
    for n in 0..support.len() {
        if feasible[n] {
            covered[n] = true;
            boxes.push((n, ScenarioUnit::singleton(support, n, true)));
        }
    }
    for seed in 0..support.len() {
        if covered[seed] {
            continue;
        }
        let mut sets: Vec<Vec<usize>> = support.tuple(seed).iter().map(|&k| vec![k]).collect();
        loop {
            let mut grown = false;
            for i in 0..support.num_nodes() {
                for k in 0..support.num_levels(i) {
                    if sets[i].contains(&k) {
                        continue;
                    }
                    let mut trial = sets.clone();
                    trial[i].push(k);
                    trial[i].sort_unstable();
                    let ok = members_of(support, &trial)
                        .iter()
                        .all(|&m| !feasible[m] && !covered[m]);
                    if ok {
                        sets = trial;
                        grown = true;
                    }
                }
            }
            if !grown {
                break;
            }
        }
        let members = members_of(support, &sets);
        for &m in &members {
            covered[m] = true;
        }
        boxes.push((
            seed,
            ScenarioUnit {
                sets,
                members,
                active: false,
            },
        ));
    }
    boxes.sort_by_key(|(first, _)| *first);
    BundleSet::from_units(
        support,
        boxes.into_iter().map(|(_, u)| u).collect(),
        feasible,
    )
}
