//! Synthetic data source: a radial distance field with sparse additive noise.
//!
//! Randomness comes from ChaCha8 seeded with `seed` via
//! `SeedableRng::seed_from_u64`. Each cell consumes one 64-bit draw for its
//! selection test and, if selected, a second for the noise value. Draws map
//! to `[0, 1)` as `(u >> 11) * 2^-53`, so output is identical on every
//! platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::grid::{Field, Mesh};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub mesh_name: String,
    pub array_name: String,
    pub ny0: usize,
    pub ny1: usize,
    /// Defaults to the grid centre `((ny0-1)/2, (ny1-1)/2)`.
    pub center: Option<(f64, f64)>,
    pub noise_fraction: f64,
    /// Defaults to half the field maximum.
    pub noise_amplitude: Option<f64>,
    pub seed: u64,
    /// When set, values are mapped through `sin(2 pi v / wavelength)`.
    pub band_wavelength: Option<f64>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            mesh_name: "mesh".into(),
            array_name: "dataArray".into(),
            ny0: 200,
            ny1: 200,
            center: None,
            noise_fraction: 0.5,
            noise_amplitude: None,
            seed: 42,
            band_wavelength: None,
        }
    }
}

impl GenConfig {
    pub fn with_dims(mut self, ny0: usize, ny1: usize) -> Self {
        self.ny0 = ny0;
        self.ny1 = ny1;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
            .unwrap_or(((self.ny0 as f64 - 1.0) / 2.0, (self.ny1 as f64 - 1.0) / 2.0))
    }

    pub fn validate(&self) -> Result<()> {
        if self.ny0 == 0 || self.ny1 == 0 {
            return Err(Error::dimension(format!(
                "grid dimensions must be positive, got {}x{}",
                self.ny0, self.ny1
            )));
        }
        if !(0.0..=1.0).contains(&self.noise_fraction) {
            return Err(Error::config(format!(
                "noise_fraction must lie in [0, 1], got {}",
                self.noise_fraction
            )));
        }
        if let Some(a) = self.noise_amplitude {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::config(format!(
                    "noise_amplitude must be >= 0, got {a}"
                )));
            }
        }
        if let Some(l) = self.band_wavelength {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::config(format!(
                    "band_wavelength must be > 0, got {l}"
                )));
            }
        }
        let (c0, c1) = self.center();
        if !(c0.is_finite() && c1.is_finite()) {
            return Err(Error::config("center must be finite"));
        }
        Ok(())
    }
}

/// Distance of each grid point `(i, j)` from the configured centre.
pub fn radial_field<T: Scalar>(config: &GenConfig) -> Result<Field<T>> {
    config.validate()?;
    let (c0, c1) = config.center();
    Field::from_fn(config.array_name.clone(), config.ny0, config.ny1, |i, j| {
        let r = ((i as f64 - c0).powi(2) + (j as f64 - c1).powi(2)).sqrt();
        let v = match config.band_wavelength {
            Some(l) => (std::f64::consts::TAU * r / l).sin(),
            None => r,
        };
        T::of(v)
    })
}

fn unit_draw(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Adds uniform noise in `[-A, A]` to a Bernoulli(`noise_fraction`) subset of cells.
pub fn add_noise<T: Scalar>(field: &Field<T>, config: &GenConfig) -> Result<Field<T>> {
    config.validate()?;
    let values = field.as_real()?;
    let amplitude = match config.noise_amplitude {
        Some(a) => a,
        None => {
            0.5 * values
                .iter()
                .fold(f64::NEG_INFINITY, |m, v| m.max(v.to_f64_lossless()))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noisy = values
        .iter()
        .map(|&v| {
            if unit_draw(&mut rng) < config.noise_fraction {
                let n = (2.0 * unit_draw(&mut rng) - 1.0) * amplitude;
                if n != 0.0 {
                    return v + T::of(n);
                }
            }
            v
        })
        .collect();
    Field::real(field.name(), field.ny0(), field.ny1(), noisy)
}

/// Mesh holding the noisy field under `config.array_name`.
pub fn generate<T: Scalar>(config: &GenConfig) -> Result<Mesh<T>> {
    let clean = radial_field::<T>(config)?;
    let noisy = add_noise(&clean, config)?;
    Mesh::new(config.mesh_name.clone(), config.ny0, config.ny1)?.with_field(noisy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_values() {
        let cfg = GenConfig {
            center: Some((100.0, 100.0)),
            ..GenConfig::default()
        };
        let f = radial_field::<f64>(&cfg).unwrap();
        let v = f.as_real().unwrap();
        assert_eq!(v[100 * 200 + 100], 0.0);
        assert_eq!(v[103 * 200 + 104], 5.0);

        let f = radial_field::<f64>(&GenConfig::default()).unwrap();
        let corner = f.as_real().unwrap()[0];
        assert!((corner - (2.0f64 * 99.5 * 99.5).sqrt()).abs() < 1e-12);
        assert!((corner - 140.714).abs() < 1e-3);
    }

    #[test]
    fn noise_identity_cases() {
        let clean = radial_field::<f64>(&GenConfig::default()).unwrap();
        let none = GenConfig {
            noise_fraction: 0.0,
            ..GenConfig::default()
        };
        assert_eq!(add_noise(&clean, &none).unwrap(), clean);
        let silent = GenConfig {
            noise_amplitude: Some(0.0),
            ..GenConfig::default()
        };
        assert_eq!(add_noise(&clean, &silent).unwrap(), clean);
    }

    #[test]
    fn noise_is_seeded() {
        let clean = radial_field::<f64>(&GenConfig::default()).unwrap();
        let a = add_noise(&clean, &GenConfig::default()).unwrap();
        let b = add_noise(&clean, &GenConfig::default()).unwrap();
        assert_eq!(a, b);
        let c = add_noise(&clean, &GenConfig::default().with_seed(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn selected_fraction_and_bound() {
        let cfg = GenConfig::default();
        let clean = radial_field::<f64>(&cfg).unwrap();
        let noisy = add_noise(&clean, &cfg).unwrap();
        let amp = 0.5
            * clean
                .as_real()
                .unwrap()
                .iter()
                .cloned()
                .fold(f64::MIN, f64::max);
        let mut changed = 0;
        for (n, c) in noisy
            .as_real()
            .unwrap()
            .iter()
            .zip(clean.as_real().unwrap())
        {
            let d = (n - c).abs();
            assert!(d <= amp + 4.0 * f64::EPSILON * c.abs().max(amp));
            changed += usize::from(d > 0.0);
        }
        let frac = changed as f64 / 40_000.0;
        assert!((frac - 0.5).abs() < 0.05, "{frac}");
    }

    #[test]
    fn periodic_bands_and_validation() {
        let cfg = GenConfig {
            band_wavelength: Some(20.0),
            ..GenConfig::default().with_dims(8, 8)
        };
        let f = radial_field::<f32>(&cfg).unwrap();
        assert!(f.as_real().unwrap().iter().all(|v| v.abs() <= 1.0));

        let bad = GenConfig {
            noise_fraction: 1.5,
            ..GenConfig::default()
        };
        assert!(radial_field::<f64>(&bad).is_err());
        assert!(radial_field::<f64>(&GenConfig::default().with_dims(0, 3)).is_err());
        let m = generate::<f64>(&GenConfig::default().with_dims(4, 6)).unwrap();
        assert_eq!(m.name(), "mesh");
        assert_eq!(m.get_field("dataArray").unwrap().dims(), (4, 6));
    }
}
