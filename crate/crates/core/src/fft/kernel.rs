//! 1D complex FFT of arbitrary length.
//!
//! Smooth lengths (all prime factors <= `MAX_RADIX`) use a self-sorting
//! Stockham decimation-in-frequency pass per factor, ping-ponging between
//! the data and a scratch buffer. Remaining lengths go through Bluestein's
//! chirp-z convolution on a power-of-two Stockham plan.

use num_complex::Complex;

use super::{unit_root, Direction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_RADIX: usize = 31;

/// Precomputed transform of a fixed length and direction.
#[derive(Debug, Clone)]
pub struct Plan1d<T> {
    len: usize,
    direction: Direction,
    algorithm: Algorithm<T>,
}

#[derive(Debug, Clone)]
enum Algorithm<T> {
    Identity,
    Stockham(Stockham<T>),
    Bluestein(Box<Bluestein<T>>),
}

impl<T: Scalar> Plan1d<T> {
    pub fn new(len: usize, direction: Direction) -> Result<Self> {
        if len == 0 {
            return Err(Error::dimension("transform length must be positive"));
        }
        let algorithm = if len == 1 {
            Algorithm::Identity
        } else {
            match smooth_factors(len) {
                Some(radices) => Algorithm::Stockham(Stockham::new(len, &radices, direction)),
                None => Algorithm::Bluestein(Box::new(Bluestein::new(len, direction))),
            }
        };
        Ok(Plan1d {
            len,
            direction,
            algorithm,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// True when the plan falls back to the chirp-z convolution.
    pub fn uses_bluestein(&self) -> bool {
        matches!(self.algorithm, Algorithm::Bluestein(_))
    }

    /// Minimum scratch length accepted by [`Plan1d::process_with_scratch`].
    pub fn scratch_len(&self) -> usize {
        match &self.algorithm {
            Algorithm::Identity => 0,
            Algorithm::Stockham(_) => self.len,
            Algorithm::Bluestein(b) => b.scratch_len(),
        }
    }

    pub fn make_scratch(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); self.scratch_len()]
    }

    /// Transforms `data` in place. Allocates scratch once per call.
    pub fn process(&self, data: &mut [Complex<T>]) -> Result<()> {
        let mut scratch = self.make_scratch();
        self.process_with_scratch(data, &mut scratch)
    }

    /// Transforms every consecutive chunk of `len()` elements in `data`.
    /// Does not allocate.
    pub fn process_with_scratch(
        &self,
        data: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
    ) -> Result<()> {
        if !data.len().is_multiple_of(self.len) {
            return Err(Error::dimension(format!(
                "buffer of {} elements is not a multiple of transform length {}",
                data.len(),
                self.len
            )));
        }
        if scratch.len() < self.scratch_len() {
            return Err(Error::dimension(format!(
                "scratch of {} elements, plan needs {}",
                scratch.len(),
                self.scratch_len()
            )));
        }
        for chunk in data.chunks_exact_mut(self.len) {
            match &self.algorithm {
                Algorithm::Identity => {}
                Algorithm::Stockham(s) => s.run(chunk, scratch),
                Algorithm::Bluestein(b) => b.run(chunk, scratch),
            }
        }
        Ok(())
    }
}

/// Prime factorization with pairs of 2 merged into radix 4, or `None` if a
/// factor exceeds `MAX_RADIX`.
fn smooth_factors(mut n: usize) -> Option<Vec<usize>> {
    let mut radices = Vec::new();
    while n.is_multiple_of(4) {
        radices.push(4);
        n /= 4;
    }
    if n.is_multiple_of(2) {
        radices.push(2);
        n /= 2;
    }
    let mut p = 3;
    while p <= MAX_RADIX && n > 1 {
        while n.is_multiple_of(p) {
            radices.push(p);
            n /= p;
        }
        p += 2;
    }
    (n == 1).then_some(radices)
}

#[derive(Debug, Clone)]
struct Stage<T> {
    radix: usize,
    /// Sub-transform length after this stage (`n_stage / radix`).
    span: usize,
    /// Number of interleaved sub-transforms entering this stage.
    stride: usize,
    /// `w^(j*k)` for `j < span`, `1 <= k < radix`, stored at `j*(radix-1) + k-1`.
    twiddles: Vec<Complex<T>>,
    /// `radix`-th roots of unity in the plan's direction.
    roots: Vec<Complex<T>>,
}

#[derive(Debug, Clone)]
struct Stockham<T> {
    len: usize,
    forward: bool,
    stages: Vec<Stage<T>>,
}

impl<T: Scalar> Stockham<T> {
    fn new(len: usize, radices: &[usize], direction: Direction) -> Self {
        let sign = direction.sign();
        let mut n_stage = len;
        let mut stride = 1;
        let mut stages = Vec::with_capacity(radices.len());
        for &radix in radices {
            let span = n_stage / radix;
            let mut twiddles = Vec::with_capacity(span * (radix - 1));
            for j in 0..span {
                for k in 1..radix {
                    twiddles.push(unit_root(sign, j * k, n_stage));
                }
            }
            let roots = (0..radix).map(|t| unit_root(sign, t, radix)).collect();
            stages.push(Stage {
                radix,
                span,
                stride,
                twiddles,
                roots,
            });
            n_stage = span;
            stride *= radix;
        }
        Stockham {
            len,
            forward: direction == Direction::Forward,
            stages,
        }
    }

    fn run(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        let scratch = &mut scratch[..self.len];
        let mut in_data = true;
        for stage in &self.stages {
            if in_data {
                self.apply(stage, data, scratch);
            } else {
                self.apply(stage, scratch, data);
            }
            in_data = !in_data;
        }
        if !in_data {
            data.copy_from_slice(scratch);
        }
    }

    fn apply(&self, stage: &Stage<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
        match stage.radix {
            2 => radix2(stage, x, y),
            4 => radix4(stage, x, y, self.forward),
            _ => radix_generic(stage, x, y),
        }
    }
}

fn radix2<T: Scalar>(stage: &Stage<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
    let (m, s) = (stage.span, stage.stride);
    for j in 0..m {
        let w = stage.twiddles[j];
        for q in 0..s {
            let a0 = x[q + s * j];
            let a1 = x[q + s * (j + m)];
            y[q + s * 2 * j] = a0 + a1;
            y[q + s * (2 * j + 1)] = (a0 - a1) * w;
        }
    }
}

fn radix4<T: Scalar>(stage: &Stage<T>, x: &[Complex<T>], y: &mut [Complex<T>], forward: bool) {
    let (m, s) = (stage.span, stage.stride);
    // multiplication by the quarter-turn root: -i forward, +i backward
    let rot = |z: Complex<T>| {
        if forward {
            Complex::new(z.im, -z.re)
        } else {
            Complex::new(-z.im, z.re)
        }
    };
    for j in 0..m {
        let w = &stage.twiddles[3 * j..3 * j + 3];
        for q in 0..s {
            let a0 = x[q + s * j];
            let a1 = x[q + s * (j + m)];
            let a2 = x[q + s * (j + 2 * m)];
            let a3 = x[q + s * (j + 3 * m)];
            let t0 = a0 + a2;
            let t1 = a0 - a2;
            let t2 = a1 + a3;
            let t3 = rot(a1 - a3);
            let base = q + s * 4 * j;
            y[base] = t0 + t2;
            y[base + s] = (t1 + t3) * w[0];
            y[base + 2 * s] = (t0 - t2) * w[1];
            y[base + 3 * s] = (t1 - t3) * w[2];
        }
    }
}

fn radix_generic<T: Scalar>(stage: &Stage<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
    let (p, m, s) = (stage.radix, stage.span, stage.stride);
    let zero = Complex::new(T::zero(), T::zero());
    let mut a = [zero; MAX_RADIX];
    for j in 0..m {
        let w = &stage.twiddles[(p - 1) * j..(p - 1) * (j + 1)];
        for q in 0..s {
            for (r, slot) in a[..p].iter_mut().enumerate() {
                *slot = x[q + s * (j + r * m)];
            }
            let base = q + s * p * j;
            y[base] = a[..p].iter().fold(zero, |acc, &v| acc + v);
            for k in 1..p {
                let mut sum = a[0];
                let mut idx = 0;
                for &v in &a[1..p] {
                    idx += k;
                    if idx >= p {
                        idx -= p;
                    }
                    sum += v * stage.roots[idx];
                }
                y[base + s * k] = sum * w[k - 1];
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein<T> {
    len: usize,
    conv_len: usize,
    /// `exp(sign * i*pi*k^2 / len)`.
    chirp: Vec<Complex<T>>,
    /// Forward transform of the conjugate chirp kernel, pre-scaled by `1/conv_len`.
    kernel_spectrum: Vec<Complex<T>>,
    forward: Stockham<T>,
    backward: Stockham<T>,
}

impl<T: Scalar> Bluestein<T> {
    fn new(len: usize, direction: Direction) -> Self {
        let conv_len = (2 * len - 1).next_power_of_two();
        let radices = smooth_factors(conv_len).expect("power of two is smooth");
        let forward = Stockham::new(conv_len, &radices, Direction::Forward);
        let backward = Stockham::new(conv_len, &radices, Direction::Backward);

        // k^2 mod 2*len keeps the chirp argument small
        let chirp: Vec<Complex<T>> = (0..len)
            .map(|k| unit_root(direction.sign(), (k * k) % (2 * len), 2 * len))
            .collect();

        let zero = Complex::new(T::zero(), T::zero());
        let mut kernel = vec![zero; conv_len];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[conv_len - k] = chirp[k].conj();
        }
        let mut scratch = vec![zero; conv_len];
        forward.run(&mut kernel, &mut scratch);
        let scale = T::one() / T::of_usize(conv_len);
        for z in &mut kernel {
            *z *= scale;
        }

        Bluestein {
            len,
            conv_len,
            chirp,
            kernel_spectrum: kernel,
            forward,
            backward,
        }
    }

    fn scratch_len(&self) -> usize {
        2 * self.conv_len
    }

    fn run(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        let (buf, inner) = scratch[..2 * self.conv_len].split_at_mut(self.conv_len);
        for (k, slot) in buf.iter_mut().enumerate() {
            *slot = if k < self.len {
                data[k] * self.chirp[k]
            } else {
                Complex::new(T::zero(), T::zero())
            };
        }
        self.forward.run(buf, inner);
        for (z, &h) in buf.iter_mut().zip(&self.kernel_spectrum) {
            *z *= h;
        }
        self.backward.run(buf, inner);
        for (k, out) in data.iter_mut().enumerate() {
            *out = buf[k] * self.chirp[k];
        }
    }
}
