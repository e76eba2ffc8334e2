//! Serial FFT kernels and the plan-based transform API.
//!
//! Transforms are unnormalized in both directions: a forward transform
//! followed by a backward one multiplies the data by the number of points.

mod kernel;
mod plan;

pub use kernel::Plan1d;
pub use plan::Plan;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Exponent sign -1.
    Forward,
    /// Exponent sign +1.
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Backward => 1.0,
        }
    }

    pub fn inverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    /// FFTW spelling used in configuration files.
    pub fn fftw_name(self) -> &'static str {
        match self {
            Direction::Forward => "FFTW_FORWARD",
            Direction::Backward => "FFTW_BACKWARD",
        }
    }

    pub fn from_fftw_name(name: &str) -> Option<Direction> {
        match name {
            "FFTW_FORWARD" => Some(Direction::Forward),
            "FFTW_BACKWARD" => Some(Direction::Backward),
            _ => None,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// `exp(sign * 2*pi*i * num / den)` evaluated in `f64`; `num` is reduced mod `den` first.
pub(crate) fn unit_root<T: Scalar>(sign: f64, num: usize, den: usize) -> Complex<T> {
    let reduced = (num % den) as f64;
    let angle = sign * std::f64::consts::TAU * reduced / den as f64;
    Complex::new(T::of(angle.cos()), T::of(angle.sin()))
}

/// Direct O(N^2) evaluation of `X[k] = sum_n x[n] exp(sign 2 pi i k n / N)`.
pub fn dft_naive<T: Scalar>(
    values: &[Complex<T>],
    direction: Direction,
) -> Result<Vec<Complex<T>>> {
    let n = values.len();
    if n == 0 {
        return Err(Error::dimension("DFT of an empty sequence"));
    }
    let sign = direction.sign();
    let out = (0..n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (j, &x)| {
                    acc + x * unit_root::<T>(sign, (k * j) % n, n)
                })
        })
        .collect();
    Ok(out)
}

/// One-shot 1D transform of any length.
pub fn fft_1d<T: Scalar>(values: &[Complex<T>], direction: Direction) -> Result<Vec<Complex<T>>> {
    let plan = Plan1d::new(values.len(), direction)?;
    let mut out = values.to_vec();
    plan.process(&mut out)?;
    Ok(out)
}
