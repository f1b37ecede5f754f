//! Template search, scheduling and error analysis.

mod schedule;
mod search;
mod sensitivity;

pub use schedule::{schedule_layers, stats, CircuitStats, LayeredCircuit};
pub use search::{
    optimize_template, optimize_template_capped, Budget, GateSet, OptimizeResult, DEFAULT_SEARCH_CAP,
    MAX_SEARCH_WIDTH,
};
pub use sensitivity::{sensitivity, PerturbationMode, SensitivityReport};
