//! Synthetic systems and tasksets, the seeded generator behind them, and the
//! experiment runner that compares algorithms against the upper bound.

mod generate;
mod randfixedsum;
mod rng;
mod run;

pub use generate::{generate, generate_instance, Generated, SystemSpec};
pub use randfixedsum::{randfixedsum, RandFixedSumError};
pub use rng::SplitMix64;
pub use run::{
    build_instance, plan, quantile, run_benchmark, Algorithm, BenchConfig, BenchResults, CellSummary, Certificate,
    Failure, PlannedInstance, Row,
};
