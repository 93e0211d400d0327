//! LP and MILP solving.
//!
//! LP relaxations are solved by the `microlp` revised simplex. Integrality is
//! handled here by a deterministic branch-and-bound: the branching variable is
//! the most fractional binary (lowest id on ties), the search plunges into the
//! child nearest to the LP value and otherwise pops the open node with the
//! lowest bound (earliest created on ties). Child LPs are re-solved from the
//! parent's basis.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::SolveError;
use crate::model::{MilpModel, Sense, VarId, VarKind};

/// Row and bound feasibility tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Distance from {0, 1} below which a binary counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Absolute optimality gap at which a node is pruned.
pub const ABSOLUTE_GAP: f64 = 1e-6;
/// Relative optimality gap floor. Objectives at desk scale are in the 1e5 to
/// 1e8 range, where simplex round-off alone exceeds [`ABSOLUTE_GAP`].
pub const RELATIVE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Node limit reached; `values` holds the best incumbent if one exists.
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// Lowest bound among unexplored nodes when the search stopped.
    pub best_bound: f64,
    pub nodes: u64,
    pub iterations: u64,
    pub wall: Duration,
    /// Largest row or bound violation of `values`.
    pub max_violation: f64,
}

impl SolveResult {
    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.index()]
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn has_solution(&self) -> bool {
        !self.values.is_empty()
    }

    fn empty(status: SolveStatus, started: Instant) -> Self {
        Self {
            status,
            objective: match status {
                SolveStatus::Unbounded => f64::NEG_INFINITY,
                _ => f64::INFINITY,
            },
            values: Vec::new(),
            best_bound: f64::NAN,
            nodes: 0,
            iterations: 0,
            wall: started.elapsed(),
            max_violation: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    /// Binary whose LP value is closest to 0.5; lowest id on ties.
    MostFractional,
}

#[derive(Debug, Clone)]
pub struct MilpOptions {
    pub absolute_gap: f64,
    pub relative_gap: f64,
    pub integrality_tol: f64,
    pub node_limit: Option<u64>,
    pub branching: Branching,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            absolute_gap: ABSOLUTE_GAP,
            relative_gap: RELATIVE_GAP,
            integrality_tol: INTEGRALITY_TOL,
            node_limit: None,
            branching: Branching::MostFractional,
        }
    }
}

impl MilpOptions {
    fn prune_tol(&self, incumbent: f64) -> f64 {
        self.absolute_gap.max(self.relative_gap * incumbent.abs())
    }
}

enum Build {
    Ready(Problem, Vec<microlp::Variable>),
    TriviallyInfeasible,
}

fn build_problem(model: &MilpModel) -> Build {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let obj = model.objective_coefficients();
    let vars: Vec<microlp::Variable> = model
        .variables()
        .iter()
        .map(|v| p.add_var(obj[v.id.index()], (v.lower, v.upper)))
        .collect();
    for c in model.constraints() {
        if c.terms.is_empty() {
            if !c.sense.holds(0.0, c.rhs, FEASIBILITY_TOL) {
                return Build::TriviallyInfeasible;
            }
            continue;
        }
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Eq => ComparisonOp::Eq,
            Sense::Ge => ComparisonOp::Ge,
        };
        let expr: Vec<(microlp::Variable, f64)> =
            c.terms.iter().map(|&(v, a)| (vars[v.index()], a)).collect();
        p.add_constraint(expr.as_slice(), op, c.rhs);
    }
    Build::Ready(p, vars)
}

fn engine(e: microlp::Error) -> SolveError {
    SolveError::Engine(e.to_string())
}

fn finish(
    model: &MilpModel,
    status: SolveStatus,
    values: Vec<f64>,
    best_bound: f64,
    nodes: u64,
    iterations: u64,
    started: Instant,
) -> SolveResult {
    let objective = model.evaluate_objective(&values);
    let (max_violation, _) = model.check_assignment(&values, f64::INFINITY);
    SolveResult {
        status,
        objective,
        values,
        best_bound,
        nodes,
        iterations,
        wall: started.elapsed(),
        max_violation,
    }
}

/// Solves the LP relaxation (binaries treated as continuous on [0, 1]).
pub fn solve_lp(model: &MilpModel) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let (problem, vars) = match build_problem(model) {
        Build::Ready(p, v) => (p, v),
        Build::TriviallyInfeasible => {
            return Ok(SolveResult::empty(SolveStatus::Infeasible, started))
        }
    };
    match problem.solve() {
        Ok(outcome) => {
            let sol = outcome
                .into_solution()
                .map_err(|_| SolveError::Engine("LP interrupted".into()))?;
            let values: Vec<f64> = vars.iter().map(|&v| sol.var_value_raw(v)).collect();
            let iterations = sol.stats().lp_iterations;
            let objective = model.evaluate_objective(&values);
            let mut r = finish(
                model,
                SolveStatus::Optimal,
                values,
                objective,
                0,
                iterations,
                started,
            );
            r.best_bound = r.objective;
            Ok(r)
        }
        Err(microlp::Error::Infeasible) => Ok(SolveResult::empty(SolveStatus::Infeasible, started)),
        Err(microlp::Error::Unbounded) => Ok(SolveResult::empty(SolveStatus::Unbounded, started)),
        Err(e) => Err(engine(e)),
    }
}

/// Largest value of each listed variable over the LP relaxation; the
/// model's own objective is ignored. One base solve, then each maximum is
/// a warm-started re-solve with the row t ≤ x added.
pub fn lp_upper_ranges(model: &MilpModel, targets: &[VarId]) -> Result<Vec<f64>, SolveError> {
    let cap = targets
        .iter()
        .map(|&v| model.variable(v).upper)
        .fold(f64::NEG_INFINITY, f64::max);
    if !cap.is_finite() {
        return Err(SolveError::Engine(
            "upper ranges need bounded targets".into(),
        ));
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<microlp::Variable> = model
        .variables()
        .iter()
        .map(|v| p.add_var(0.0, (v.lower, v.upper)))
        .collect();
    let floor = targets
        .iter()
        .map(|&v| model.variable(v).lower)
        .fold(f64::INFINITY, f64::min);
    let t = p.add_var(-1.0, (floor.min(cap), cap));
    for c in model.constraints() {
        if c.terms.is_empty() {
            if !c.sense.holds(0.0, c.rhs, FEASIBILITY_TOL) {
                return Err(SolveError::Engine("model is trivially infeasible".into()));
            }
            continue;
        }
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Eq => ComparisonOp::Eq,
            Sense::Ge => ComparisonOp::Ge,
        };
        let expr: Vec<(microlp::Variable, f64)> =
            c.terms.iter().map(|&(v, a)| (vars[v.index()], a)).collect();
        p.add_constraint(expr.as_slice(), op, c.rhs);
    }
    let base = p
        .solve()
        .map_err(engine)?
        .into_solution()
        .map_err(|_| SolveError::Engine("LP interrupted".into()))?;
    let mut out = Vec::with_capacity(targets.len());
    for &v in targets {
        let sol = base
            .clone()
            .add_constraint([(t, 1.0), (vars[v.index()], -1.0)], ComparisonOp::Le, 0.0)
            .map_err(engine)?
            .into_solution()
            .map_err(|_| SolveError::Engine("LP interrupted".into()))?;
        out.push(sol.var_value_raw(t));
    }
    Ok(out)
}

struct OpenNode {
    bound: f64,
    seq: u64,
    fix: (usize, f64),
    warm: Rc<microlp::Solution>,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenNode {
    // BinaryHeap is a max-heap: the "greatest" node is the lowest bound,
    // then the earliest created.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn most_fractional(
    binaries: &[usize],
    vars: &[microlp::Variable],
    sol: &microlp::Solution,
    tol: f64,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    for &i in binaries {
        let x = sol.var_value_raw(vars[i]);
        let frac = (x - x.floor()).min(x.ceil() - x);
        if frac > tol && best.map_or(true, |(_, _, f)| frac > f) {
            best = Some((i, x, frac));
        }
    }
    best.map(|(i, x, _)| (i, x))
}

/// Solves the MILP to proven optimality (or until the node limit).
pub fn solve_milp(model: &MilpModel, options: &MilpOptions) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let (problem, vars) = match build_problem(model) {
        Build::Ready(p, v) => (p, v),
        Build::TriviallyInfeasible => {
            return Ok(SolveResult::empty(SolveStatus::Infeasible, started))
        }
    };
    let binaries: Vec<usize> = model
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.id.index())
        .collect();

    let root = match problem.solve() {
        Ok(o) => o
            .into_solution()
            .map_err(|_| SolveError::Engine("LP interrupted".into()))?,
        Err(microlp::Error::Infeasible) => {
            return Ok(SolveResult::empty(SolveStatus::Infeasible, started))
        }
        Err(microlp::Error::Unbounded) => {
            return Ok(SolveResult::empty(SolveStatus::Unbounded, started))
        }
        Err(e) => return Err(engine(e)),
    };

    let mut iterations = root.stats().lp_iterations;
    let mut nodes: u64 = 1;
    let mut seq: u64 = 0;
    let mut heap: BinaryHeap<OpenNode> = BinaryHeap::new();
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut current = Some(root);
    let mut limit_hit = false;

    loop {
        let sol = match current.take() {
            Some(s) => s,
            None => {
                let Some(node) = heap.pop() else { break };
                if let Some((best, _)) = &incumbent {
                    if node.bound >= best - options.prune_tol(*best) {
                        continue;
                    }
                }
                if options.node_limit.is_some_and(|l| nodes >= l) {
                    heap.push(node);
                    limit_hit = true;
                    break;
                }
                nodes += 1;
                let before = node.warm.stats().lp_iterations;
                let warm = Rc::try_unwrap(node.warm).unwrap_or_else(|rc| (*rc).clone());
                match warm.fix_var(vars[node.fix.0], node.fix.1) {
                    Ok(o) => {
                        let s = o
                            .into_solution()
                            .map_err(|_| SolveError::Engine("LP interrupted".into()))?;
                        iterations += s.stats().lp_iterations.saturating_sub(before);
                        s
                    }
                    Err(microlp::Error::Infeasible) => continue,
                    Err(e) => return Err(engine(e)),
                }
            }
        };

        let obj = sol.objective();
        if let Some((best, _)) = &incumbent {
            if obj >= best - options.prune_tol(*best) {
                continue;
            }
        }
        match most_fractional(&binaries, &vars, &sol, options.integrality_tol) {
            None => {
                let values: Vec<f64> = vars.iter().map(|&v| sol.var_value_raw(v)).collect();
                incumbent = Some((obj, values));
            }
            Some((i, x)) => {
                let up_first = x >= 0.5;
                let warm = Rc::new(sol);
                let (near, far) = if up_first { (1.0, 0.0) } else { (0.0, 1.0) };
                seq += 1;
                heap.push(OpenNode {
                    bound: obj,
                    seq,
                    fix: (i, far),
                    warm: Rc::clone(&warm),
                });
                if options.node_limit.is_some_and(|l| nodes >= l) {
                    seq += 1;
                    heap.push(OpenNode {
                        bound: obj,
                        seq,
                        fix: (i, near),
                        warm,
                    });
                    limit_hit = true;
                    break;
                }
                nodes += 1;
                let before = warm.stats().lp_iterations;
                let warm = Rc::try_unwrap(warm).unwrap_or_else(|rc| (*rc).clone());
                match warm.fix_var(vars[i], near) {
                    Ok(o) => {
                        let s = o
                            .into_solution()
                            .map_err(|_| SolveError::Engine("LP interrupted".into()))?;
                        iterations += s.stats().lp_iterations.saturating_sub(before);
                        current = Some(s);
                    }
                    Err(microlp::Error::Infeasible) => {}
                    Err(e) => return Err(engine(e)),
                }
            }
        }
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    match incumbent {
        Some((obj, values)) => {
            let status = if limit_hit {
                SolveStatus::IterationLimit
            } else {
                SolveStatus::Optimal
            };
            let bound = if limit_hit { open_bound.min(obj) } else { obj };
            Ok(finish(
                model, status, values, bound, nodes, iterations, started,
            ))
        }
        None if limit_hit => {
            let mut r = SolveResult::empty(SolveStatus::IterationLimit, started);
            r.best_bound = open_bound;
            r.nodes = nodes;
            r.iterations = iterations;
            Ok(r)
        }
        None => {
            let mut r = SolveResult::empty(SolveStatus::Infeasible, started);
            r.nodes = nodes;
            r.iterations = iterations;
            Ok(r)
        }
    }
}
