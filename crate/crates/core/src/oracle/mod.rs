//! Independent checks of the planning pipeline.

mod exhaustive;
mod inner;
mod piecewise;
mod probability;
mod suite;

pub use exhaustive::{
    exhaustive_plan_oracle, ExhaustivePlan, MAX_ORACLE_HOURS, MAX_ORACLE_NODES,
    MAX_ORACLE_PIPELINES,
};
pub use inner::{
    primal_inner_lp, support_diameter, InnerPrimal, TransportResiduals, INNER_SCALE_LIMIT,
};
pub use piecewise::{finite_diff_piecewise, network_instruments, Instrument, PiecewiseError};
pub use probability::{probability_oracle, shaping_range, ShapingRange};
pub use suite::{
    duality_check, exhaustive_check, piecewise_check, probability_check, reduction_check,
    scenario_outcomes, truncated_support, verify_instance, write_reports, write_timings, Check,
    OracleReport, VerifyPlan, DUALITY_SUPPORT_LIMIT, EXHAUSTIVE_PATTERN_LIMIT, PIECEWISE_GRID,
};
