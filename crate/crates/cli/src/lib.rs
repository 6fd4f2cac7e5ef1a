//! Batch front end for the volcast toolkit: the full pipeline, single
//! fits, simulation and forecasting.

pub mod commands;
pub mod pipeline;
pub mod report;
pub mod style;

pub use pipeline::{run, write_output, PipelineOutput, Status};
pub use report::{PipelineOptions, PipelineReport, SCHEMA};
