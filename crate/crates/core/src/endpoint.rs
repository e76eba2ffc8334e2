//! Pipeline-facing FFT analysis endpoint.

use std::path::PathBuf;

use crate::distributed::distributed_fft_2d;
use crate::error::{Error, Result};
use crate::fft::Direction;
use crate::grid::{to_complex, FieldKind, Mesh};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct FftConfig {
    pub mesh_name: String,
    pub array_name: String,
    pub direction: Direction,
    /// Number of logical ranks the transform is decomposed over.
    pub ranks: usize,
    /// Configuration file whose stages run after this one.
    pub downstream_config: Option<PathBuf>,
}

impl FftConfig {
    pub fn new(
        mesh_name: impl Into<String>,
        array_name: impl Into<String>,
        direction: Direction,
    ) -> Self {
        FftConfig {
            mesh_name: mesh_name.into(),
            array_name: array_name.into(),
            direction,
            ranks: 1,
            downstream_config: None,
        }
    }

    pub fn with_ranks(mut self, ranks: usize) -> Self {
        self.ranks = ranks;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mesh_name.is_empty() || self.array_name.is_empty() {
            return Err(Error::config(
                "fft endpoint needs non-empty mesh and array names",
            ));
        }
        if self.ranks == 0 {
            return Err(Error::config("fft endpoint needs at least one rank"));
        }
        Ok(())
    }
}

pub(crate) fn check_mesh_name<T: Scalar>(mesh: &Mesh<T>, expected: &str) -> Result<()> {
    if mesh.name() != expected {
        return Err(Error::config(format!(
            "stage is configured for mesh \"{expected}\" but received \"{}\"",
            mesh.name()
        )));
    }
    Ok(())
}

/// Replaces `config.array_name` with its unnormalized 2D DFT.
///
/// Real arrays are promoted to complex first. The output is always complex,
/// keeps the array's name and position, and is identical for every rank
/// count. Other fields pass through untouched.
pub fn fft_execute<T: Scalar>(mut mesh: Mesh<T>, config: &FftConfig) -> Result<Mesh<T>> {
    config.validate()?;
    check_mesh_name(&mesh, &config.mesh_name)?;
    let field = mesh.get_field(&config.array_name)?;
    let promoted;
    let input = match field.kind() {
        FieldKind::Complex => field,
        FieldKind::Real => {
            promoted = to_complex(field)?;
            &promoted
        }
    };
    let (ny0, ny1) = input.dims();
    let spectrum = distributed_fft_2d(
        input.as_complex()?,
        ny0,
        ny1,
        config.direction,
        config.ranks,
    )?;
    let out = crate::grid::Field::complex(config.array_name.clone(), ny0, ny1, spectrum)?;
    mesh.replace_field(out)?;
    Ok(mesh)
}
