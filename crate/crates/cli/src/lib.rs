//! Seeded, reproducible experiments over `btq-core`, one per registry id.

pub mod config;
pub mod experiments;
pub mod registry;
pub mod result;

pub use config::{ExperimentConfig, Overrides};
pub use registry::{run, run_many, REGISTRY};
pub use result::{ExperimentResult, Verdict};
