//! Built-in analysis adaptors.

use std::path::PathBuf;

use super::pipeline::{AnalysisAdaptor, StageOutput, StepContext};
use crate::endpoint::{check_mesh_name, fft_execute, FftConfig};
use crate::error::Result;
use crate::filters::{bandpass, BandpassConfig};
use crate::grid::{FieldData, Mesh};
use crate::imageio::{write_image, ImageConfig};
use crate::scalar::Scalar;
use crate::Mesh64;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleConfig {
    pub mesh_name: String,
    pub array_name: String,
    pub factor: f64,
}

/// Multiplies every value (complex pairs componentwise) of the array by `factor`.
pub fn scale_field<T: Scalar>(mut mesh: Mesh<T>, config: &ScaleConfig) -> Result<Mesh<T>> {
    check_mesh_name(&mesh, &config.mesh_name)?;
    let factor = T::of(config.factor);
    mesh.get_field_mut(&config.array_name)?
        .update(|data| match data {
            FieldData::Real(v) => v.iter_mut().for_each(|x| *x *= factor),
            FieldData::Complex(v) => v.iter_mut().for_each(|z| *z = z.scale(factor)),
        })?;
    Ok(mesh)
}

pub struct FftStage(pub FftConfig);

impl AnalysisAdaptor for FftStage {
    fn kind(&self) -> &str {
        "fft"
    }

    fn initialize(&mut self) -> Result<()> {
        self.0.validate()
    }

    fn execute(&mut self, mesh: Mesh64, _ctx: &StepContext) -> Result<StageOutput> {
        Ok(StageOutput::mesh(fft_execute(mesh, &self.0)?))
    }
}

pub struct BandpassStage(pub BandpassConfig);

impl AnalysisAdaptor for BandpassStage {
    fn kind(&self) -> &str {
        "bandpass"
    }

    fn initialize(&mut self) -> Result<()> {
        self.0.validate()
    }

    fn execute(&mut self, mesh: Mesh64, _ctx: &StepContext) -> Result<StageOutput> {
        Ok(StageOutput::mesh(bandpass(mesh, &self.0)?))
    }
}

pub struct ScaleStage(pub ScaleConfig);

impl AnalysisAdaptor for ScaleStage {
    fn kind(&self) -> &str {
        "scale"
    }

    fn execute(&mut self, mesh: Mesh64, _ctx: &StepContext) -> Result<StageOutput> {
        Ok(StageOutput::mesh(scale_field(mesh, &self.0)?))
    }
}

/// Sink that writes a PGM and passes the mesh through unchanged.
///
/// Relative paths resolve against the run's output directory; a `{step}`
/// placeholder in the path is replaced by the step index.
pub struct ImageStage(pub ImageConfig);

impl ImageStage {
    fn resolve(&self, ctx: &StepContext) -> PathBuf {
        let raw = self
            .0
            .path
            .to_string_lossy()
            .replace("{step}", &format!("{:04}", ctx.step));
        let path = PathBuf::from(raw);
        if path.is_absolute() {
            path
        } else {
            ctx.out_dir.join(path)
        }
    }
}

impl AnalysisAdaptor for ImageStage {
    fn kind(&self) -> &str {
        "image"
    }

    fn execute(&mut self, mesh: Mesh64, ctx: &StepContext) -> Result<StageOutput> {
        let cfg = ImageConfig {
            path: self.resolve(ctx),
            ..self.0.clone()
        };
        let written = write_image(&mesh, &cfg)?;
        Ok(StageOutput {
            mesh,
            artifact: Some(written),
        })
    }
}
