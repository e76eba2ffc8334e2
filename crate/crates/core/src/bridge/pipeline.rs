use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::{PipelineSpec, StageConfig};
use super::stages::{BandpassStage, FftStage, ImageStage, ScaleStage};
use crate::datagen::{generate, GenConfig};
use crate::error::{Error, Result};
use crate::Mesh64;

/// Per-call context handed to [`AnalysisAdaptor::execute`].
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub step: usize,
    pub steps: usize,
    pub out_dir: &'a Path,
}

pub struct StageOutput {
    pub mesh: Mesh64,
    /// File written by the stage, if any.
    pub artifact: Option<PathBuf>,
}

impl StageOutput {
    pub fn mesh(mesh: Mesh64) -> Self {
        StageOutput {
            mesh,
            artifact: None,
        }
    }
}

/// User-suppliable pipeline endpoint with an Initialize / Execute / Finalize
/// lifecycle. Each execution consumes the upstream mesh and returns the mesh
/// handed downstream.
pub trait AnalysisAdaptor: Send {
    fn kind(&self) -> &str;

    fn initialize(&mut self) -> Result<()> {
        Ok(())
    }

    fn execute(&mut self, mesh: Mesh64, ctx: &StepContext) -> Result<StageOutput>;

    fn finalize(&mut self) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LifecycleState {
    Created,
    Initialized,
    Finalized,
}

/// An adaptor plus the lifecycle state that guards it.
pub struct Stage {
    adaptor: Box<dyn AnalysisAdaptor>,
    state: LifecycleState,
}

impl Stage {
    pub fn new(adaptor: Box<dyn AnalysisAdaptor>) -> Self {
        Stage {
            adaptor,
            state: LifecycleState::Created,
        }
    }

    pub fn from_config(config: &StageConfig) -> Self {
        let adaptor: Box<dyn AnalysisAdaptor> = match config {
            StageConfig::Fft(c) => Box::new(FftStage(c.clone())),
            StageConfig::Bandpass(c) => Box::new(BandpassStage(c.clone())),
            StageConfig::Image(c) => Box::new(ImageStage(c.clone())),
            StageConfig::Scale(c) => Box::new(ScaleStage(c.clone())),
        };
        Stage::new(adaptor)
    }

    pub fn kind(&self) -> &str {
        self.adaptor.kind()
    }

    pub fn state(&self) -> LifecycleState {
        self.state
    }

    pub fn initialize(&mut self) -> Result<()> {
        if self.state != LifecycleState::Created {
            return Err(Error::Usage(format!(
                "{} stage initialized twice",
                self.kind()
            )));
        }
        self.adaptor.initialize()?;
        self.state = LifecycleState::Initialized;
        Ok(())
    }

    pub fn execute(&mut self, mesh: Mesh64, ctx: &StepContext) -> Result<StageOutput> {
        if self.state != LifecycleState::Initialized {
            return Err(Error::Usage(format!(
                "{} stage executed while {:?}",
                self.kind(),
                self.state
            )));
        }
        self.adaptor.execute(mesh, ctx)
    }

    pub fn finalize(&mut self) -> Result<()> {
        if self.state != LifecycleState::Initialized {
            return Err(Error::Usage(format!(
                "{} stage finalized while {:?}",
                self.kind(),
                self.state
            )));
        }
        self.state = LifecycleState::Finalized;
        self.adaptor.finalize()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub step: usize,
    pub stage: usize,
    pub kind: String,
    pub millis: f64,
    pub artifact: Option<PathBuf>,
}

impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} stage={} kind={} ms={:.3} out=",
            self.step, self.stage, self.kind, self.millis
        )?;
        match &self.artifact {
            Some(p) => write!(f, "{}", p.display()),
            None => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub records: Vec<StageRecord>,
    /// Output of the last stage on the last step.
    pub final_mesh: Option<Mesh64>,
}

impl RunReport {
    pub fn artifacts(&self) -> impl Iterator<Item = &Path> {
        self.records.iter().filter_map(|r| r.artifact.as_deref())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// A data source driving an ordered chain of stages.
pub struct Pipeline {
    source: GenConfig,
    stages: Vec<Stage>,
}

impl Pipeline {
    pub fn new(source: GenConfig, adaptors: Vec<Box<dyn AnalysisAdaptor>>) -> Self {
        Pipeline {
            source,
            stages: adaptors.into_iter().map(Stage::new).collect(),
        }
    }

    pub fn from_spec(spec: &PipelineSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Pipeline {
            source: spec.source.clone(),
            stages: spec.stages.iter().map(Stage::from_config).collect(),
        })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn run(&mut self, steps: usize, out_dir: &Path) -> Result<RunReport> {
        self.run_with(steps, out_dir, |_, _, _| {})
    }

    /// Runs the chain, calling `observer(step, stage, mesh)` with each
    /// stage's output.
    pub fn run_with(
        &mut self,
        steps: usize,
        out_dir: &Path,
        mut observer: impl FnMut(usize, usize, &Mesh64),
    ) -> Result<RunReport> {
        if steps == 0 {
            return Err(Error::Usage("a run needs at least one step".into()));
        }
        if self.stages.is_empty() {
            return Err(Error::config("pipeline has no analysis stages"));
        }
        fs::create_dir_all(out_dir).map_err(|e| Error::file(out_dir, e))?;
        let produced = generate::<f64>(&self.source)?;

        for index in 0..self.stages.len() {
            if let Err(e) = self.stages[index].initialize() {
                let err = self.stage_error(index, e);
                self.finalize_initialized();
                return Err(err);
            }
        }

        let mut report = RunReport::default();
        for step in 0..steps {
            let ctx = StepContext {
                step,
                steps,
                out_dir,
            };
            let mut mesh = produced.clone();
            for index in 0..self.stages.len() {
                let started = Instant::now();
                let out = match self.stages[index].execute(mesh, &ctx) {
                    Ok(out) => out,
                    Err(e) => {
                        let err = self.stage_error(index, e);
                        self.finalize_initialized();
                        return Err(err);
                    }
                };
                report.records.push(StageRecord {
                    step,
                    stage: index,
                    kind: self.stages[index].kind().to_string(),
                    millis: started.elapsed().as_secs_f64() * 1e3,
                    artifact: out.artifact,
                });
                observer(step, index, &out.mesh);
                mesh = out.mesh;
            }
            if step + 1 == steps {
                report.final_mesh = Some(mesh);
            }
        }

        let mut first_err = None;
        for index in 0..self.stages.len() {
            if let Err(e) = self.stages[index].finalize() {
                first_err.get_or_insert_with(|| self.stage_error(index, e));
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(report),
        }
    }

    fn stage_error(&self, index: usize, source: Error) -> Error {
        Error::Stage {
            index,
            kind: self.stages[index].kind().to_string(),
            source: Box::new(source),
        }
    }

    fn finalize_initialized(&mut self) {
        for stage in &mut self.stages {
            if stage.state() == LifecycleState::Initialized {
                // the run is already failing; the original error wins
                let _ = stage.finalize();
            }
        }
    }
}

/// Builds the stages described by `spec` and runs them for `steps` steps.
pub fn run_pipeline(spec: &PipelineSpec, steps: usize, out_dir: &Path) -> Result<RunReport> {
    Pipeline::from_spec(spec)?.run(steps, out_dir)
}
