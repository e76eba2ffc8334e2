//! Spectral-domain filtering on unshifted 2D spectra.
//!
//! Low frequencies sit at the four corners of an unshifted spectrum, so the
//! bandpass keeps a rectangle of half-width `round(f * n)` around each
//! corner along each axis and zeroes the rest.

use num_complex::Complex;

use crate::endpoint::check_mesh_name;
use crate::error::{Error, Result};
use crate::grid::{Field, FieldData, Mesh};
use crate::scalar::Scalar;

pub const DEFAULT_KEEP_FRACTION: f64 = 0.0075;

#[derive(Debug, Clone, PartialEq)]
pub struct BandpassConfig {
    pub mesh_name: String,
    pub array_name: String,
    pub keep_fraction: f64,
}

impl BandpassConfig {
    pub fn new(mesh_name: impl Into<String>, array_name: impl Into<String>) -> Self {
        BandpassConfig {
            mesh_name: mesh_name.into(),
            array_name: array_name.into(),
            keep_fraction: DEFAULT_KEEP_FRACTION,
        }
    }

    pub fn with_keep_fraction(mut self, keep_fraction: f64) -> Self {
        self.keep_fraction = keep_fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.keep_fraction) {
            return Err(Error::config(format!(
                "keep_fraction must lie in [0, 1], got {}",
                self.keep_fraction
            )));
        }
        Ok(())
    }
}

/// Per-axis retention radius; `f64::round` rounds half away from zero.
pub fn retention_radius(keep_fraction: f64, n: usize) -> usize {
    (keep_fraction * n as f64).round() as usize
}

/// Wrapped distance of frequency index `k` from the nearest corner.
#[inline]
fn corner_distance(k: usize, n: usize) -> usize {
    k.min(n - k)
}

pub fn is_kept(k0: usize, k1: usize, ny0: usize, ny1: usize, keep_fraction: f64) -> bool {
    corner_distance(k0, ny0) <= retention_radius(keep_fraction, ny0)
        && corner_distance(k1, ny1) <= retention_radius(keep_fraction, ny1)
}

/// Number of coefficients the mask retains on an `ny0 x ny1` spectrum.
pub fn kept_count(ny0: usize, ny1: usize, keep_fraction: f64) -> usize {
    let axis = |n: usize| {
        let r = retention_radius(keep_fraction, n);
        (0..n).filter(|&k| corner_distance(k, n) <= r).count()
    };
    axis(ny0) * axis(ny1)
}

/// Zeroes every coefficient outside the corner retention mask.
pub fn bandpass_values<T: Scalar>(
    values: &mut [Complex<T>],
    ny0: usize,
    ny1: usize,
    keep_fraction: f64,
) {
    let r0 = retention_radius(keep_fraction, ny0);
    let r1 = retention_radius(keep_fraction, ny1);
    let zero = Complex::new(T::zero(), T::zero());
    for (k0, row) in values.chunks_exact_mut(ny1).enumerate() {
        let row_kept = corner_distance(k0, ny0) <= r0;
        for (k1, z) in row.iter_mut().enumerate() {
            if !(row_kept && corner_distance(k1, ny1) <= r1) {
                *z = zero;
            }
        }
    }
}

pub fn bandpass<T: Scalar>(mut mesh: Mesh<T>, config: &BandpassConfig) -> Result<Mesh<T>> {
    config.validate()?;
    check_mesh_name(&mesh, &config.mesh_name)?;
    let field = mesh.get_field_mut(&config.array_name)?;
    field.as_complex()?;
    let (ny0, ny1) = field.dims();
    field.update(|data| {
        if let FieldData::Complex(values) = data {
            bandpass_values(values, ny0, ny1, config.keep_fraction);
        }
    })?;
    Ok(mesh)
}

/// `log(1 + |z|)` of a complex field, named `<name>_mag`.
pub fn display_magnitude<T: Scalar>(field: &Field<T>) -> Result<Field<T>> {
    let values = field.as_complex()?;
    Field::real(
        format!("{}_mag", field.name()),
        field.ny0(),
        field.ny1(),
        values.iter().map(|z| z.norm().ln_1p()).collect(),
    )
}
