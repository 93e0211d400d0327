use super::{Assembly, EpigraphForm, Reduction, ScenarioSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCounts {
    pub rows: f64,
    pub vars: f64,
}

/// Size of one assembled model, with the norm-linearization block counted
/// separately and compared against the closed-form sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReformulationReport {
    pub model: String,
    pub reduction: Reduction,
    pub nodes: usize,
    pub scenarios: usize,
    pub units: usize,
    /// N in the closed forms: units carrying a dispatch block.
    pub active: usize,
    /// Rows and variables tagged `eq44*` or `eq47*`.
    pub block: BlockCounts,
    /// 6N²N_b + N / 3N²N_b + N + 2 unreduced, N²N_b/2 / N²N_b/2 + 2
    /// comonotone-reduced; `None` for forms without a closed form.
    pub expected: Option<BlockCounts>,
    pub shaping: BlockCounts,
    pub total_rows: usize,
    pub total_vars: usize,
    pub binaries: usize,
    pub big_m: f64,
    pub eps_bound: f64,
    pub nu_bound: f64,
}

impl ReformulationReport {
    pub fn matches_formula(&self) -> Option<bool> {
        self.expected.map(|e| e == self.block)
    }

    pub const HEADER: [&'static str; 18] = [
        "model",
        "reduction",
        "nodes",
        "scenarios",
        "units",
        "active",
        "block_rows",
        "block_vars",
        "expected_rows",
        "expected_vars",
        "shaping_rows",
        "shaping_vars",
        "total_rows",
        "total_vars",
        "binaries",
        "big_m",
        "eps_bound",
        "nu_bound",
    ];

    pub fn record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.model.clone(),
            self.reduction.label().to_string(),
            self.nodes.to_string(),
            self.scenarios.to_string(),
            self.units.to_string(),
            self.active.to_string(),
            self.block.rows.to_string(),
            self.block.vars.to_string(),
            opt(self.expected.map(|e| e.rows)),
            opt(self.expected.map(|e| e.vars)),
            self.shaping.rows.to_string(),
            self.shaping.vars.to_string(),
            self.total_rows.to_string(),
            self.total_vars.to_string(),
            self.binaries.to_string(),
            self.big_m.to_string(),
            self.eps_bound.to_string(),
            self.nu_bound.to_string(),
        ]
    }
}

/// Counts the blocks of an assembled model.
pub fn reformulation_report(
    asm: &Assembly,
    scen: &ScenarioSet,
    reduction: Reduction,
) -> ReformulationReport {
    let m = &asm.model;
    let count = |prefixes: &[&str]| {
        let (mut r, mut v) = (0, 0);
        for p in prefixes {
            let (a, b) = m.count_by_tag(p);
            r += a;
            v += b;
        }
        BlockCounts {
            rows: r as f64,
            vars: v as f64,
        }
    };
    let n = scen.units.num_active() as f64;
    let nb = scen.support.num_nodes() as f64;
    let expected = asm.epigraph.as_ref().and_then(|e| match e.form {
        EpigraphForm::Full => Some(BlockCounts {
            rows: 6.0 * n * n * nb + n,
            vars: 3.0 * n * n * nb + n + 2.0,
        }),
        EpigraphForm::Comonotone => Some(BlockCounts {
            rows: n * n * nb / 2.0,
            vars: n * n * nb / 2.0 + 2.0,
        }),
        EpigraphForm::Redundancy => None,
    });
    let shaping = match &asm.shaping {
        Some(s) => count(&[s.tag]),
        None => BlockCounts {
            rows: 0.0,
            vars: 0.0,
        },
    };
    ReformulationReport {
        model: m.name().to_string(),
        reduction,
        nodes: scen.support.num_nodes(),
        scenarios: scen.support.len(),
        units: scen.units.len(),
        active: scen.units.num_active(),
        block: count(&["eq44", "eq47"]),
        expected,
        shaping,
        total_rows: m.num_rows(),
        total_vars: m.num_vars(),
        binaries: m.num_binaries(),
        big_m: asm.epigraph.as_ref().map(|e| e.big_m).unwrap_or(0.0),
        eps_bound: asm.eps_bound,
        nu_bound: asm.nu_bound,
    }
}
