//! Mixed-integer linear programming toolkit for desk-scale planning models.
//!
//! * [`MilpModel`] is the solver-agnostic representation: named variables,
//!   tagged rows, a tagged linear objective (always minimized).
//! * [`export`] writes fixed-layout MPS and CPLEX LP text.
//! * [`solve_lp`] and [`solve_milp`] solve the model; the MILP search is a
//!   deterministic branch-and-bound over the binaries.
//!
//! ```
//! use ddu_milp::{MilpModel, MilpOptions, Sense, VarSpec, solve_milp};
//!
//! let mut m = MilpModel::new("knapsack");
//! let a = m.add_variable(VarSpec::binary("a")).unwrap();
//! let b = m.add_variable(VarSpec::binary("b")).unwrap();
//! m.add_constraint([(a, 1.0), (b, 1.0)], Sense::Le, 1.0, "cap").unwrap();
//! m.add_objective(a, -3.0, "value").unwrap();
//! m.add_objective(b, -2.0, "value").unwrap();
//! let r = solve_milp(&m, &MilpOptions::default()).unwrap();
//! assert_eq!(r.objective, -3.0);
//! ```

mod error;
pub mod export;
mod model;
mod solve;

pub use error::{ExportError, ModelError, SolveError};
pub use export::{export_lp, export_mps, lp_string, mps_string};
pub use model::{
    LinearConstraint, MilpModel, ObjectiveTerm, RowId, Sense, VarId, VarKind, VarSpec, Variable,
};
pub use solve::{
    lp_upper_ranges, solve_lp, solve_milp, Branching, MilpOptions, SolveResult, SolveStatus,
    ABSOLUTE_GAP, FEASIBILITY_TOL, INTEGRALITY_TOL, RELATIVE_GAP,
};
