use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use ddu_milp::{solve_milp, MilpModel, MilpOptions, VarSpec};

use super::exhaustive::exhaustive_plan_oracle;
use super::inner::primal_inner_lp;
use super::piecewise::{finite_diff_piecewise, network_instruments};
use super::probability::{probability_oracle, shaping_range};
use crate::dro::{
    build_dual_epigraph, solve_plan, EpigraphForm, Mode, PlanConfig, Reduction, ScenarioSet,
};
use crate::error::PlanError;
use crate::model::{
    build_dispatch, build_investment, investment_patterns, DispatchOptions, Realization,
};
use crate::network::{bpr_delay, CoupledNetwork, BPR_FACTOR};
use crate::scenario::{bundle_scenarios, screen_feasible, BundleSet, ScenarioSupport};

/// Largest support the duality check builds the transport LP on.
pub const DUALITY_SUPPORT_LIMIT: usize = 16;
/// Most investment patterns [`VerifyPlan::for_network`] enumerates.
pub const EXHAUSTIVE_PATTERN_LIMIT: usize = 64;
/// Grid points per segment in the piecewise check.
pub const PIECEWISE_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Duality,
    Probability,
    Exhaustive,
    Piecewise,
    Reduction,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Duality,
        Check::Probability,
        Check::Exhaustive,
        Check::Piecewise,
        Check::Reduction,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Check::Duality => "duality",
            Check::Probability => "probability",
            Check::Exhaustive => "exhaustive",
            Check::Piecewise => "piecewise",
            Check::Reduction => "reduction",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Check {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| PlanError::Options(format!("unknown check `{s}`")))
    }
}

/// One oracle-versus-pipeline comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub check: Check,
    pub instance: String,
    pub case: String,
    pub oracle: f64,
    pub pipeline: f64,
    pub abs_dev: f64,
    /// abs_dev / (1 + |oracle|)
    pub rel_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime: Duration,
}

impl OracleReport {
    pub const HEADER: [&'static str; 9] = [
        "check",
        "instance",
        "case",
        "oracle",
        "pipeline",
        "abs_dev",
        "rel_dev",
        "tolerance",
        "pass",
    ];

    pub fn new(
        check: Check,
        instance: &str,
        case: impl Into<String>,
        oracle: f64,
        pipeline: f64,
        tolerance: f64,
        runtime: Duration,
    ) -> Self {
        let abs_dev = (pipeline - oracle).abs();
        let rel_dev = abs_dev / (1.0 + oracle.abs());
        Self {
            check,
            instance: instance.to_string(),
            case: case.into(),
            oracle,
            pipeline,
            abs_dev,
            rel_dev,
            tolerance,
            pass: rel_dev <= tolerance,
            runtime,
        }
    }

    /// Marks the row failed when a side condition does not hold.
    fn require(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.check.label().to_string(),
            self.instance.clone(),
            self.case.clone(),
            format!("{:e}", self.oracle),
            format!("{:e}", self.pipeline),
            format!("{:e}", self.abs_dev),
            format!("{:e}", self.rel_dev),
            format!("{:e}", self.tolerance),
            self.pass.to_string(),
        ]
    }
}

/// Writes the reports as CSV. Runtimes are left out so the file is
/// reproducible; see [`write_timings`].
pub fn write_reports<W: Write>(reports: &[OracleReport], writer: W) -> Result<(), PlanError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(OracleReport::HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record(r.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_timings<W: Write>(reports: &[OracleReport], writer: W) -> Result<(), PlanError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["check", "instance", "case", "seconds"])
        .map_err(csv_err)?;
    for r in reports {
        w.write_record([
            r.check.label().to_string(),
            r.instance.clone(),
            r.case.clone(),
            format!("{:.3}", r.runtime.as_secs_f64()),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> PlanError {
    PlanError::Io(std::io::Error::other(e))
}

/// Support with the lowest levels kept so that at most `limit` scenarios
/// remain; the node with the most levels loses its highest one first.
pub fn truncated_support(
    support: &ScenarioSupport,
    limit: usize,
) -> Result<ScenarioSupport, PlanError> {
    let mut counts: Vec<usize> = (0..support.num_nodes())
        .map(|i| support.num_levels(i))
        .collect();
    while counts.iter().product::<usize>() > limit {
        let (i, _) = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 1)
            .max_by_key(|(i, &c)| (c, *i))
            .ok_or_else(|| PlanError::ScaleGuard(format!("support cannot shrink below {limit}")))?;
        counts[i] -= 1;
    }
    let keep: Vec<Vec<usize>> = counts.iter().map(|&c| (0..c).collect()).collect();
    Ok(support.restrict_levels(&keep)?)
}

/// Daily operation cost of every screened-in scenario with all investment
/// free, from one dispatch model per scenario. Screened-out entries are 0.
pub fn scenario_outcomes(
    net: &CoupledNetwork,
    support: &ScenarioSupport,
    feasible: &[bool],
    cfg: &PlanConfig,
) -> Result<Vec<f64>, PlanError> {
    let options = DispatchOptions {
        pipeline_segments: cfg.pipeline_segments,
        traffic_segments: cfg.traffic_segments,
        beta: cfg.beta,
    };
    let mut out = vec![0.0; support.len()];
    for n in (0..support.len()).filter(|&n| feasible[n]) {
        let mut m = MilpModel::new(format!("outcome-s{n}"));
        let inv = build_investment(&mut m, net)?;
        let demand = Realization::from_daily(support.daily_totals(n), support.trip());
        let d = build_dispatch(&mut m, net, &inv, &demand, &options, "")?;
        for c in &d.cost {
            m.add_objective(c.var, c.coeff, "theta")?;
        }
        let r = solve_milp(&m, &cfg.milp)?;
        if !r.is_optimal() {
            return Err(PlanError::NotOptimal {
                context: format!("outcome of scenario {n}"),
                status: r.status,
            });
        }
        out[n] = r.objective;
    }
    Ok(out)
}

fn siting_vectors(nb: usize) -> Vec<Vec<bool>> {
    (0..1usize << nb)
        .map(|mask| (0..nb).map(|i| mask >> (nb - 1 - i) & 1 == 1).collect())
        .collect()
}

/// Dual value of the inner problem through the pipeline's epigraph block,
/// with the outcomes fixed.
fn dual_inner_value(
    scen: &ScenarioSet,
    p_hat: &[f64],
    outcomes: &[f64],
    radius: f64,
    form: EpigraphForm,
    options: &MilpOptions,
) -> Result<f64, PlanError> {
    let units = scen.units.units();
    let mut m = MilpModel::new("inner-dual");
    let mut theta = vec![None; units.len()];
    for (u, unit) in units.iter().enumerate() {
        if unit.active {
            let h = outcomes[unit.representative()];
            theta[u] = Some(m.add_variable(VarSpec::free(format!("theta_u{u}")).bounds(h, h))?);
        }
    }
    let h_max = outcomes.iter().fold(0.0_f64, |a, &h| a.max(h.abs()));
    let d_min = (0..scen.support.len())
        .flat_map(|a| (0..a).map(move |b| (a, b)))
        .map(|(a, b)| scen.support.distance(a, b))
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let eps_bound = if d_min.is_finite() {
        2.0 * (1.0 + h_max) / d_min
    } else {
        1.0
    };
    let epi = build_dual_epigraph(&mut m, scen, &theta, form, eps_bound)?;
    m.set_bounds(epi.dual.eta, -(1.0 + h_max), 1.0 + h_max)?;
    m.add_objective(epi.dual.eps, radius, "dual")?;
    m.add_objective(epi.dual.eta, 1.0, "dual")?;
    for (u, &nu) in epi.dual.nu.iter().enumerate() {
        m.add_objective(nu, p_hat[units[u].representative()], "dual")?;
    }
    let r = solve_milp(&m, options)?;
    if !r.is_optimal() {
        return Err(PlanError::NotOptimal {
            context: "inner dual".into(),
            status: r.status,
        });
    }
    Ok(r.objective)
}

/// Primal transport LP against the dual epigraph on a truncated support,
/// for `radii` radii from 0 to the support diameter and every HRS siting.
/// One row per radius, holding the siting with the largest deviation.
pub fn duality_check(
    net: &CoupledNetwork,
    cfg: &PlanConfig,
    radii: usize,
) -> Result<Vec<OracleReport>, PlanError> {
    let full = ScenarioSupport::from_network(net)?;
    let support = truncated_support(&full, DUALITY_SUPPORT_LIMIT)?;
    let feasible = screen_feasible(&support, net)?;
    let outcomes = scenario_outcomes(net, &support, &feasible, cfg)?;
    let scen = ScenarioSet {
        units: BundleSet::identity(&support, &feasible),
        support,
        feasible,
    };
    let diameter = scen.support.diameter();
    let sitings = siting_vectors(net.num_nodes());
    let steps = radii.max(2);
    let mut out = Vec::new();
    for k in 0..steps {
        let start = Instant::now();
        let radius = diameter * k as f64 / (steps - 1) as f64;
        let mut worst: Option<(f64, f64, f64, String)> = None;
        for w in &sitings {
            let p_hat = probability_oracle(&scen.support, w);
            let primal = primal_inner_lp(&scen.support, &scen.feasible, &p_hat, &outcomes, radius)?;
            let dual = dual_inner_value(
                &scen,
                &p_hat,
                &outcomes,
                radius,
                EpigraphForm::Full,
                &cfg.milp,
            )?;
            let dev = (dual - primal.value).abs();
            let residual = primal.residuals.max();
            let bits: String = w.iter().map(|&b| if b { '1' } else { '0' }).collect();
            if residual > 1e-7 {
                worst = Some((f64::INFINITY, primal.value, f64::NAN, bits));
                break;
            }
            if worst.as_ref().is_none_or(|(d, ..)| dev > *d) {
                worst = Some((dev, primal.value, dual, bits));
            }
        }
        let (_, primal, dual, bits) = worst.expect("at least one siting");
        out.push(OracleReport::new(
            Check::Duality,
            &net.name,
            format!("r={radius:.6} w={bits}"),
            primal,
            dual,
            1e-6,
            start.elapsed(),
        ));
    }
    Ok(out)
}

/// Shaping-block probabilities against direct products, per siting, with
/// and without bundling. One row per bundling state.
pub fn probability_check(net: &CoupledNetwork) -> Result<Vec<OracleReport>, PlanError> {
    let support = ScenarioSupport::from_network(net)?;
    let feasible = screen_feasible(&support, net)?;
    let mut out = Vec::new();
    for bundled in [false, true] {
        let start = Instant::now();
        let units = if bundled {
            bundle_scenarios(&support, &feasible, true)?
        } else {
            BundleSet::identity(&support, &feasible)
        };
        let mut worst = 0.0_f64;
        let mut slack = 0.0_f64;
        for w in siting_vectors(net.num_nodes()) {
            let direct = probability_oracle(&support, &w);
            let range = shaping_range(&support, &units, &w, bundled)?;
            for (u, unit) in units.units().iter().enumerate() {
                let expect: f64 = unit.members.iter().map(|&n| direct[n]).sum();
                worst = worst.max((range.upper[u] - expect).abs());
            }
            slack = slack.max(range.slack.abs());
        }
        let case = if bundled { "bundled" } else { "identity" };
        out.push(
            OracleReport::new(
                Check::Probability,
                &net.name,
                case,
                0.0,
                worst,
                1e-9,
                start.elapsed(),
            )
            .require(slack <= 1e-9),
        );
    }
    Ok(out)
}

/// Pattern enumeration against the branch-and-bound plan, per mode.
pub fn exhaustive_check(
    net: &CoupledNetwork,
    base: &PlanConfig,
    modes: &[Mode],
) -> Result<Vec<OracleReport>, PlanError> {
    let mut out = Vec::new();
    for &mode in modes {
        let start = Instant::now();
        let cfg = PlanConfig {
            mode,
            ..base.clone()
        };
        let oracle = exhaustive_plan_oracle(net, &cfg)?;
        let plan = solve_plan(net, &cfg)?;
        out.push(OracleReport::new(
            Check::Exhaustive,
            &net.name,
            format!("{} {}", mode.label(), oracle.pattern.bits()),
            oracle.objective,
            plan.objective,
            1e-6,
            start.elapsed(),
        ));
    }
    Ok(out)
}

/// Grid error of every piecewise map against its analytic bound, plus the
/// BPR term at capacity.
pub fn piecewise_check(net: &CoupledNetwork, cfg: &PlanConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for instr in network_instruments(net, cfg.pipeline_segments, cfg.traffic_segments) {
        let start = Instant::now();
        let e = finite_diff_piecewise(&instr, PIECEWISE_GRID);
        let knot_tol = 1e-9 * (1.0 + instr.exact(instr.range));
        out.push(
            OracleReport::new(
                Check::Piecewise,
                &net.name,
                instr.name.clone(),
                e.analytic_bound,
                e.grid_max,
                1e-4,
                start.elapsed(),
            )
            .require(
                e.grid_max <= e.analytic_bound * (1.0 + 1e-9) + 1e-12 && e.knot_max <= knot_tol,
            ),
        );
    }
    for l in &net.traffic.links {
        let start = Instant::now();
        out.push(OracleReport::new(
            Check::Piecewise,
            &net.name,
            format!("link {} delay at capacity", l.id),
            BPR_FACTOR * l.free_flow_time * l.capacity,
            bpr_delay(l.free_flow_time, l.capacity, l.capacity),
            1e-12,
            start.elapsed(),
        ));
    }
    out
}

/// Every reduction against the unreduced model, in `mode`.
pub fn reduction_check(
    net: &CoupledNetwork,
    base: &PlanConfig,
    mode: Mode,
) -> Result<Vec<OracleReport>, PlanError> {
    let cfg = |reduction| PlanConfig {
        mode,
        reduction,
        ..base.clone()
    };
    let start = Instant::now();
    let reference = solve_plan(net, &cfg(Reduction::NONE))?.objective;
    let base_time = start.elapsed();
    let mut out = Vec::new();
    for label in ["redundancy", "comonotone", "bundling", "all"] {
        let start = Instant::now();
        let reduction: Reduction = label.parse()?;
        let value = solve_plan(net, &cfg(reduction))?.objective;
        out.push(OracleReport::new(
            Check::Reduction,
            &net.name,
            format!("{} {label}", mode.label()),
            reference,
            value,
            1e-6,
            base_time + start.elapsed(),
        ));
    }
    Ok(out)
}

/// Which checks to run on one instance and in which modes.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyPlan {
    pub checks: Vec<Check>,
    pub radii: usize,
    pub exhaustive_modes: Vec<Mode>,
    pub reduction_mode: Mode,
}

impl Default for VerifyPlan {
    fn default() -> Self {
        Self {
            checks: Check::ALL.to_vec(),
            radii: 5,
            exhaustive_modes: Mode::ALL.to_vec(),
            reduction_mode: Mode::DduDro,
        }
    }
}

impl VerifyPlan {
    /// The default plan, trimmed to what finishes at desk scale: the
    /// exhaustive check only up to [`EXHAUSTIVE_PATTERN_LIMIT`] investment
    /// patterns, and the reduction check in the decision-independent mode
    /// beyond two nodes.
    pub fn for_network(net: &CoupledNetwork) -> Self {
        let mut plan = Self::default();
        if investment_patterns(net).len() > EXHAUSTIVE_PATTERN_LIMIT {
            plan.exhaustive_modes.clear();
        }
        if net.num_nodes() > 2 {
            plan.reduction_mode = Mode::DiuDro;
        }
        plan
    }
}

pub fn verify_instance(
    net: &CoupledNetwork,
    base: &PlanConfig,
    plan: &VerifyPlan,
) -> Result<Vec<OracleReport>, PlanError> {
    let mut out = Vec::new();
    for &check in &plan.checks {
        match check {
            Check::Duality => out.extend(duality_check(net, base, plan.radii)?),
            Check::Probability => out.extend(probability_check(net)?),
            Check::Exhaustive => out.extend(exhaustive_check(net, base, &plan.exhaustive_modes)?),
            Check::Piecewise => out.extend(piecewise_check(net, base)),
            Check::Reduction => out.extend(reduction_check(net, base, plan.reduction_mode)?),
        }
    }
    Ok(out)
}
