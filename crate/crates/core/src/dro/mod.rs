//! Distributionally robust assembly: dual epigraph, norm linearization,
//! shaping coupling, reductions and the baseline cases.
//!
//! The pipeline is [`prepare_scenarios`] (support, traffic screen, bundling),
//! then [`assemble`] for a single model or [`solve_plan`] for an optimized
//! [`PlanningSolution`].

mod assemble;
mod epigraph;
mod inner;
mod report;
mod solve;

use std::fmt;
use std::str::FromStr;

use ddu_milp::MilpOptions;

use crate::error::PlanError;
use crate::network::CoupledNetwork;
use crate::scenario::{bundle_scenarios, screen_feasible, BundleSet, ScenarioSupport};

pub use assemble::{assemble, operation_cost_bound, Assembly, UnitBlock};
pub use epigraph::{build_dual_epigraph, DualVars, EpigraphBlock};
pub use inner::{worst_case_distribution, WorstCase};
pub use report::{reformulation_report, BlockCounts, ReformulationReport};
pub use solve::{
    compare_modes, radius_sweep, solve_plan, CapacityRow, CaptureRow, Certificates,
    PlanningSolution, ProductionRow,
};

/// Planning case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Decision-dependent Wasserstein DRO.
    DduDro,
    /// Wasserstein DRO around the baseline distribution.
    DiuDro,
    /// Expected cost under the baseline distribution.
    So,
    /// Worst case over the screened-in support.
    Ro,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Ro, Mode::So, Mode::DiuDro, Mode::DduDro];

    pub fn label(self) -> &'static str {
        match self {
            Mode::DduDro => "ddu-dro",
            Mode::DiuDro => "diu-dro",
            Mode::So => "so",
            Mode::Ro => "ro",
        }
    }

    /// Modes whose empirical distribution does not react to siting.
    pub fn decision_independent(self) -> bool {
        !matches!(self, Mode::DduDro)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ddu-dro" | "ddu" => Ok(Mode::DduDro),
            "diu-dro" | "diu" => Ok(Mode::DiuDro),
            "so" => Ok(Mode::So),
            "ro" => Ok(Mode::Ro),
            other => Err(PlanError::Options(format!("unknown mode `{other}`"))),
        }
    }
}

/// Linearization of the distance-weighted dual term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpigraphForm {
    /// Every ordered pair with Big-M rows and binary sign selectors.
    Full,
    /// Unordered pairs only; lower bounds on z dropped.
    Redundancy,
    /// Unordered pairs with z fixed to |ΔU|·ε, no binaries.
    Comonotone,
}

/// Reduction switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub form: EpigraphForm,
    pub bundling: bool,
}

impl Reduction {
    pub const NONE: Reduction = Reduction {
        form: EpigraphForm::Full,
        bundling: false,
    };
    pub const ALL: Reduction = Reduction {
        form: EpigraphForm::Comonotone,
        bundling: true,
    };

    pub fn label(self) -> &'static str {
        match (self.form, self.bundling) {
            (EpigraphForm::Full, false) => "none",
            (EpigraphForm::Redundancy, false) => "redundancy",
            (EpigraphForm::Comonotone, false) => "comonotone",
            (EpigraphForm::Full, true) => "bundling",
            (EpigraphForm::Redundancy, true) => "redundancy+bundling",
            (EpigraphForm::Comonotone, true) => "all",
        }
    }
}

impl FromStr for Reduction {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (form, bundling) = match s.to_ascii_lowercase().as_str() {
            "none" => (EpigraphForm::Full, false),
            "redundancy" => (EpigraphForm::Redundancy, false),
            "comonotone" => (EpigraphForm::Comonotone, false),
            "bundling" => (EpigraphForm::Full, true),
            "redundancy+bundling" => (EpigraphForm::Redundancy, true),
            "all" => (EpigraphForm::Comonotone, true),
            other => return Err(PlanError::Options(format!("unknown reduction `{other}`"))),
        };
        Ok(Reduction { form, bundling })
    }
}

/// Treatment of the probability–dual products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bilinear {
    /// Monolithic model with envelope variables.
    McCormick,
    /// One model per HRS siting pattern with constant probabilities.
    Enumerate,
}

impl Bilinear {
    pub fn label(self) -> &'static str {
        match self {
            Bilinear::McCormick => "mccormick",
            Bilinear::Enumerate => "enumerate",
        }
    }
}

impl FromStr for Bilinear {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mccormick" => Ok(Bilinear::McCormick),
            "enumerate" | "enumerate-w" => Ok(Bilinear::Enumerate),
            other => Err(PlanError::Options(format!(
                "unknown bilinear handling `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlanConfig {
    pub mode: Mode,
    /// Wasserstein radius r, kg.
    pub radius: f64,
    pub beta: f64,
    pub pipeline_segments: usize,
    pub traffic_segments: usize,
    pub reduction: Reduction,
    pub bilinear: Bilinear,
    pub milp: MilpOptions,
}

impl PlanConfig {
    /// Instance defaults: radius, β and segment counts from the document,
    /// every reduction on, siting enumeration for the bilinear terms.
    pub fn from_network(net: &CoupledNetwork, mode: Mode) -> Self {
        Self {
            mode,
            radius: net.ambiguity.radius,
            beta: net.economics.fulfillment_rate,
            pipeline_segments: net.segments.pipeline,
            traffic_segments: net.segments.traffic,
            reduction: Reduction::ALL,
            bilinear: Bilinear::Enumerate,
            milp: MilpOptions::default(),
        }
    }

    /// Radius actually used: SO ignores the ambiguity set.
    pub fn effective_radius(&self) -> f64 {
        match self.mode {
            Mode::So => 0.0,
            _ => self.radius,
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.radius.is_finite() && self.radius >= 0.0) {
            return Err(PlanError::Options(format!(
                "radius must be finite and nonnegative, got {}",
                self.radius
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(PlanError::Options(format!(
                "beta must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if self.pipeline_segments < 1 || self.traffic_segments < 1 {
            return Err(PlanError::Options(
                "segment counts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Support, screen flags and units for one mode.
#[derive(Debug, Clone)]
pub struct ScenarioSet {
    pub support: ScenarioSupport,
    pub feasible: Vec<bool>,
    pub units: BundleSet,
}

impl ScenarioSet {
    /// Indices of the units carrying a dispatch block, in unit order.
    pub fn active(&self) -> Vec<usize> {
        self.units.active_units().collect()
    }

    /// Empirical probability of every unit under HRS siting `w`.
    pub fn masses(&self, w: &[bool]) -> Vec<f64> {
        self.units.masses(&self.support, w)
    }
}

/// Enumerates the support, screens it against the traffic rows and groups
/// screened-out scenarios when bundling is on. Decision-independent modes
/// use the baseline probabilities for both siting states.
pub fn prepare_scenarios(
    net: &CoupledNetwork,
    mode: Mode,
    bundling: bool,
) -> Result<ScenarioSet, PlanError> {
    let mut support = ScenarioSupport::from_network(net)?;
    if mode.decision_independent() {
        support = support.decision_independent();
    }
    let feasible = screen_feasible(&support, net)?;
    let units = bundle_scenarios(&support, &feasible, bundling)?;
    Ok(ScenarioSet {
        support,
        feasible,
        units,
    })
}
