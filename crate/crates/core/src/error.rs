use ddu_milp::{ModelError, SolveError, SolveStatus};
use thiserror::Error;

use crate::network::ConfigError;
use crate::scenario::ScenarioError;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{context}: solver finished with status {status:?}")]
    NotOptimal {
        context: String,
        status: SolveStatus,
    },
    #[error("invalid plan configuration: {0}")]
    Options(String),
    #[error("oracle scale guard: {0}")]
    ScaleGuard(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl PlanError {
    /// Exit code of the command-line front end: 1 for invalid input, 2 for
    /// solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PlanError::Scenario(ScenarioError::Solve(_) | ScenarioError::Model(_)) => 2,
            PlanError::Config(_) | PlanError::Options(_) | PlanError::Scenario(_) => 1,
            PlanError::ScaleGuard(_) => 1,
            PlanError::Model(_) | PlanError::Solve(_) | PlanError::NotOptimal { .. } => 2,
            PlanError::Io(_) => 2,
        }
    }
}

impl From<ddu_milp::ExportError> for PlanError {
    fn from(e: ddu_milp::ExportError) -> Self {
        match e {
            ddu_milp::ExportError::Io(io) => PlanError::Io(io),
        }
    }
}
