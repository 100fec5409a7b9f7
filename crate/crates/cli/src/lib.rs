//! Driver for the sparsify → certify → decompose → query pipeline and the
//! line-oriented experiment report it produces.

pub mod check;
pub mod pipeline;
pub mod report;

pub use pipeline::{run_pipeline, PipelineError, PipelineOptions, PipelineOutput};
pub use report::{ExperimentReport, Flag, QueryRow};
