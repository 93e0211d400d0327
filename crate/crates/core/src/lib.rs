pub mod cli;
pub mod dro;
mod error;
pub mod instances;
pub mod model;
pub mod network;
pub mod oracle;
pub mod report;
pub mod scenario;

pub use error::PlanError;
