//! In situ 2D FFT endpoint and analysis pipeline.
//!
//! The crate is organised around a structured-mesh bridge ([`grid`]) that
//! pipeline stages pass along a daisy chain ([`bridge`]). Numeric modules are
//! generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases below are the
//! double-precision instantiations the pipeline and CLI use.

pub mod bridge;
pub mod cli;
pub mod datagen;
pub mod distributed;
pub mod endpoint;
pub mod error;
pub mod fft;
pub mod filters;
pub mod grid;
pub mod imageio;
pub mod scalar;

pub use error::{Error, Result};
pub use fft::{dft_naive, fft_1d, Direction, Plan, Plan1d};
pub use grid::{local_slab, to_complex, Field, FieldData, FieldKind, Mesh, Slab};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type Field64 = Field<f64>;
pub type Mesh64 = Mesh<f64>;
pub type Plan64 = Plan<f64>;
pub type Complex64 = Complex<f64>;

pub type Field32 = Field<f32>;
pub type Mesh32 = Mesh<f32>;
pub type Plan32 = Plan<f32>;
