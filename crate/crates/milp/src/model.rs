//! Solver-agnostic model representation.
//!
//! Variables and rows are stored in registration order, which is also the
//! order used by the exporters and the solver. Every row and variable carries
//! a free-form tag so that callers can count blocks of a formulation with
//! [`MilpModel::count_by_tag`].

use std::collections::HashMap;
use std::fmt;

use crate::error::ModelError;

/// Handle to a registered variable. Ids are dense and assigned in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Handle to a registered constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowId(pub(crate) usize);

impl RowId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub id: VarId,
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub tag: String,
}

/// Description of a variable to register.
#[derive(Debug, Clone)]
pub struct VarSpec {
    name: String,
    kind: VarKind,
    lower: f64,
    upper: f64,
    tag: String,
}

impl VarSpec {
    /// Continuous variable on `[0, +inf)`.
    pub fn continuous(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: VarKind::Continuous,
            lower: 0.0,
            upper: f64::INFINITY,
            tag: String::new(),
        }
    }

    /// Continuous variable on `(-inf, +inf)`.
    pub fn free(name: impl Into<String>) -> Self {
        Self::continuous(name).bounds(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Binary variable on `[0, 1]`.
    pub fn binary(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: VarKind::Binary,
            lower: 0.0,
            upper: 1.0,
            tag: String::new(),
        }
    }

    pub fn bounds(mut self, lower: f64, upper: f64) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn upper(mut self, upper: f64) -> Self {
        self.upper = upper;
        self
    }

    pub fn tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs >= rhs - tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub id: RowId,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: String,
}

impl LinearConstraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which `values` violates the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// One objective contribution. The same variable may appear in several
/// terms with different tags; coefficients are summed for solving.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveTerm {
    pub var: VarId,
    pub coeff: f64,
    pub tag: String,
}

/// A minimization MILP.
#[derive(Debug, Clone, Default)]
pub struct MilpModel {
    name: String,
    variables: Vec<Variable>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<ObjectiveTerm>,
    objective_constant: f64,
    names: HashMap<String, VarId>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_variable(&mut self, spec: VarSpec) -> Result<VarId, ModelError> {
        let VarSpec {
            name,
            kind,
            lower,
            upper,
            tag,
        } = spec;
        if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY
        {
            return Err(ModelError::NonFiniteBound { name });
        }
        if lower > upper {
            return Err(ModelError::InvertedBounds { name, lower, upper });
        }
        if kind == VarKind::Binary && (lower < 0.0 || upper > 1.0) {
            return Err(ModelError::BinaryBounds { name, lower, upper });
        }
        if self.names.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        let id = VarId(self.variables.len());
        self.names.insert(name.clone(), id);
        self.variables.push(Variable {
            id,
            name,
            kind,
            lower,
            upper,
            tag,
        });
        Ok(id)
    }

    /// Appends a row. Repeated variables in `terms` are merged and exact
    /// zero coefficients dropped, keeping first-appearance order.
    pub fn add_constraint<I>(
        &mut self,
        terms: I,
        sense: Sense,
        rhs: f64,
        tag: impl Into<String>,
    ) -> Result<RowId, ModelError>
    where
        I: IntoIterator<Item = (VarId, f64)>,
    {
        let tag = tag.into();
        if !rhs.is_finite() {
            return Err(ModelError::NonFiniteCoefficient { tag, var: None });
        }
        let mut merged: Vec<(VarId, f64)> = Vec::new();
        for (var, coeff) in terms {
            if var.0 >= self.variables.len() {
                return Err(ModelError::UnknownVariable(var.0));
            }
            if !coeff.is_finite() {
                return Err(ModelError::NonFiniteCoefficient {
                    tag,
                    var: Some(self.variables[var.0].name.clone()),
                });
            }
            match merged.iter_mut().find(|(v, _)| *v == var) {
                Some(entry) => entry.1 += coeff,
                None => merged.push((var, coeff)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        let id = RowId(self.constraints.len());
        self.constraints.push(LinearConstraint {
            id,
            terms: merged,
            sense,
            rhs,
            tag,
        });
        Ok(id)
    }

    pub fn add_objective(
        &mut self,
        var: VarId,
        coeff: f64,
        tag: impl Into<String>,
    ) -> Result<(), ModelError> {
        let tag = tag.into();
        if var.0 >= self.variables.len() {
            return Err(ModelError::UnknownVariable(var.0));
        }
        if !coeff.is_finite() {
            return Err(ModelError::NonFiniteCoefficient {
                tag,
                var: Some(self.variables[var.0].name.clone()),
            });
        }
        if coeff != 0.0 {
            self.objective.push(ObjectiveTerm { var, coeff, tag });
        }
        Ok(())
    }

    /// Drops every objective term and the constant.
    pub fn clear_objective(&mut self) {
        self.objective.clear();
        self.objective_constant = 0.0;
    }

    pub fn add_objective_constant(&mut self, value: f64) {
        self.objective_constant += value;
    }

    /// Tightens the bounds of a registered variable.
    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), ModelError> {
        let v = self
            .variables
            .get_mut(var.0)
            .ok_or(ModelError::UnknownVariable(var.0))?;
        if lower > upper {
            return Err(ModelError::InvertedBounds {
                name: v.name.clone(),
                lower,
                upper,
            });
        }
        v.lower = lower;
        v.upper = upper;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.names.get(name).copied()
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective_terms(&self) -> &[ObjectiveTerm] {
        &self.objective
    }

    pub fn objective_constant(&self) -> f64 {
        self.objective_constant
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    /// Dense objective coefficients, summed over terms.
    pub fn objective_coefficients(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.variables.len()];
        for t in &self.objective {
            c[t.var.0] += t.coeff;
        }
        c
    }

    pub fn evaluate_objective(&self, values: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .map(|t| t.coeff * values[t.var.0])
                .sum::<f64>()
    }

    /// Objective value restricted to terms whose tag starts with `prefix`.
    pub fn evaluate_objective_tag(&self, values: &[f64], prefix: &str) -> f64 {
        self.objective
            .iter()
            .filter(|t| t.tag.starts_with(prefix))
            .map(|t| t.coeff * values[t.var.0])
            .sum()
    }

    /// Number of rows and variables whose tag starts with `prefix`.
    pub fn count_by_tag(&self, prefix: &str) -> (usize, usize) {
        let rows = self
            .constraints
            .iter()
            .filter(|c| c.tag.starts_with(prefix))
            .count();
        let vars = self
            .variables
            .iter()
            .filter(|v| v.tag.starts_with(prefix))
            .count();
        (rows, vars)
    }

    /// Distinct row, variable and objective tags in first-appearance order.
    pub fn tags(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        let all = self
            .constraints
            .iter()
            .map(|c| c.tag.as_str())
            .chain(self.variables.iter().map(|v| v.tag.as_str()))
            .chain(self.objective.iter().map(|t| t.tag.as_str()));
        for t in all {
            if !t.is_empty() && !seen.iter().any(|s| s == t) {
                seen.push(t.to_string());
            }
        }
        seen
    }

    /// Largest row or bound violation of `values`, and whether every binary
    /// is within `int_tol` of 0 or 1.
    pub fn check_assignment(&self, values: &[f64], int_tol: f64) -> (f64, bool) {
        let mut worst = 0.0f64;
        let mut integral = true;
        for v in &self.variables {
            let x = values[v.id.0];
            worst = worst.max(v.lower - x).max(x - v.upper);
            if v.kind == VarKind::Binary && (x - x.round()).abs() > int_tol {
                integral = false;
            }
        }
        for c in &self.constraints {
            worst = worst.max(c.violation(values));
        }
        (worst, integral)
    }
}
