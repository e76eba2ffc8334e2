//! The built-in denoising workflow: noisy radial field, forward FFT,
//! corner bandpass, inverse FFT, normalisation, with an image after each
//! stage of interest.

use std::path::Path;

use super::config::{PipelineSpec, StageConfig};
use super::pipeline::{Pipeline, RunReport};
use super::stages::ScaleConfig;
use crate::datagen::{radial_field, GenConfig};
use crate::endpoint::FftConfig;
use crate::error::{Error, Result};
use crate::fft::Direction;
use crate::filters::{BandpassConfig, DEFAULT_KEEP_FRACTION};
use crate::imageio::{ImageConfig, Scaling};
use crate::Field64;

pub const DEMO_IMAGES: [&str; 4] = [
    "01_noisy.pgm",
    "02_spectrum.pgm",
    "03_filtered.pgm",
    "04_denoised.pgm",
];

const NOISY_STAGE: usize = 0;
const FILTERED_STAGE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct DemoConfig {
    pub ny0: usize,
    pub ny1: usize,
    pub seed: u64,
    pub keep_fraction: f64,
    pub ranks: usize,
    pub steps: usize,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            ny0: 200,
            ny1: 200,
            seed: 42,
            keep_fraction: DEFAULT_KEEP_FRACTION,
            ranks: 1,
            steps: 1,
        }
    }
}

impl DemoConfig {
    pub fn source(&self) -> GenConfig {
        GenConfig::default()
            .with_dims(self.ny0, self.ny1)
            .with_seed(self.seed)
    }
}

pub fn demo_spec(config: &DemoConfig) -> PipelineSpec {
    let source = config.source();
    let (mesh, array) = (source.mesh_name.clone(), source.array_name.clone());
    let image =
        |file: &str, scaling| StageConfig::Image(ImageConfig::new(&mesh, &array, file, scaling));
    let fft = |direction| {
        StageConfig::Fft(FftConfig::new(&mesh, &array, direction).with_ranks(config.ranks))
    };
    let stages = vec![
        image(DEMO_IMAGES[0], Scaling::Linear),
        fft(Direction::Forward),
        image(DEMO_IMAGES[1], Scaling::LogMagnitude),
        StageConfig::Bandpass(
            BandpassConfig::new(&mesh, &array).with_keep_fraction(config.keep_fraction),
        ),
        image(DEMO_IMAGES[2], Scaling::LogMagnitude),
        fft(Direction::Backward),
        StageConfig::Scale(ScaleConfig {
            mesh_name: mesh.clone(),
            array_name: array.clone(),
            factor: 1.0 / (config.ny0 * config.ny1) as f64,
        }),
        image(DEMO_IMAGES[3], Scaling::RealPart),
    ];
    PipelineSpec { source, stages }
}

#[derive(Debug, Clone)]
pub struct DemoOutcome {
    pub report: RunReport,
    pub clean: Field64,
    pub noisy: Field64,
    /// Spectrum after the bandpass stage.
    pub filtered: Field64,
    /// Real part of the normalised inverse transform.
    pub denoised: Field64,
}

fn rmse(a: &Field64, b: &Field64) -> Result<f64> {
    let (a, b) = (a.as_real()?, b.as_real()?);
    if a.len() != b.len() {
        return Err(Error::dimension("rmse of fields with different sizes"));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / a.len() as f64).sqrt())
}

impl DemoOutcome {
    pub fn rmse_noisy(&self) -> Result<f64> {
        rmse(&self.noisy, &self.clean)
    }

    pub fn rmse_denoised(&self) -> Result<f64> {
        rmse(&self.denoised, &self.clean)
    }

    pub fn surviving_coefficients(&self) -> Result<usize> {
        Ok(self
            .filtered
            .as_complex()?
            .iter()
            .filter(|z| z.norm_sqr() > 0.0)
            .count())
    }
}

/// Runs the demo workflow, writing the four stage images into `out_dir`.
pub fn run_demo(config: &DemoConfig, out_dir: &Path) -> Result<DemoOutcome> {
    let spec = demo_spec(config);
    let array = spec.source.array_name.clone();
    let clean = radial_field::<f64>(&spec.source)?;
    let mut noisy = None;
    let mut filtered = None;
    let last = config.steps.saturating_sub(1);
    let report =
        Pipeline::from_spec(&spec)?.run_with(config.steps, out_dir, |step, stage, mesh| {
            if step != last {
                return;
            }
            let slot = match stage {
                NOISY_STAGE => &mut noisy,
                FILTERED_STAGE => &mut filtered,
                _ => return,
            };
            *slot = mesh.get_field(&array).ok().cloned();
        })?;
    let missing = || Error::Usage("demo stage output was not captured".into());
    let denoised = report
        .final_mesh
        .as_ref()
        .ok_or_else(missing)?
        .get_field(&array)?
        .real_part();
    Ok(DemoOutcome {
        clean,
        noisy: noisy.ok_or_else(missing)?,
        filtered: filtered.ok_or_else(missing)?,
        denoised,
        report,
    })
}
