//! Orchestration layer: configuration parsing, analysis-adaptor lifecycle
//! and the daisy-chained pipeline driver.

mod config;
mod demo;
mod pipeline;
mod stages;

pub use config::{
    load_config, parse_config, parse_config_in, PipelineSpec, StageConfig, StageKind,
};
pub use demo::{demo_spec, run_demo, DemoConfig, DemoOutcome, DEMO_IMAGES};
pub use pipeline::{
    run_pipeline, AnalysisAdaptor, LifecycleState, Pipeline, RunReport, Stage, StageOutput,
    StageRecord, StepContext,
};
pub use stages::{scale_field, BandpassStage, FftStage, ImageStage, ScaleConfig, ScaleStage};
