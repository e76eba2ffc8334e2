use num_complex::Complex;

use super::{Direction, Plan1d};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reusable 2D transform of an `ny0 x ny1` row-major buffer.
///
/// Follows the allocate / plan / execute / destroy cycle: all twiddle and
/// chirp tables are built by [`Plan::new`]; [`Plan::execute_with_scratch`]
/// performs no allocation. [`Plan::destroy`] consumes the plan, so a
/// destroyed plan cannot be executed again:
///
/// ```compile_fail
/// use insitu_fft::{Direction, Plan64};
/// let plan = Plan64::new(2, 2, Direction::Forward).unwrap();
/// plan.destroy();
/// let mut data = vec![num_complex::Complex::new(0.0, 0.0); 4];
/// plan.execute(&mut data).unwrap();
/// ```
#[derive(Debug, Clone)]
pub struct Plan<T> {
    ny0: usize,
    ny1: usize,
    direction: Direction,
    rows: Plan1d<T>,
    cols: Plan1d<T>,
}

impl<T: Scalar> Plan<T> {
    pub fn new(ny0: usize, ny1: usize, direction: Direction) -> Result<Self> {
        if ny0 == 0 || ny1 == 0 {
            return Err(Error::dimension(format!(
                "plan dimensions must be positive, got {ny0}x{ny1}"
            )));
        }
        let rows = Plan1d::new(ny1, direction)?;
        let cols = if ny0 == ny1 {
            rows.clone()
        } else {
            Plan1d::new(ny0, direction)?
        };
        Ok(Plan {
            ny0,
            ny1,
            direction,
            rows,
            cols,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.ny0, self.ny1)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn row_plan(&self) -> &Plan1d<T> {
        &self.rows
    }

    pub fn column_plan(&self) -> &Plan1d<T> {
        &self.cols
    }

    /// Column gather buffer plus the larger of the two 1D scratch needs.
    pub fn scratch_len(&self) -> usize {
        self.ny0 + self.rows.scratch_len().max(self.cols.scratch_len())
    }

    pub fn make_scratch(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); self.scratch_len()]
    }

    pub fn execute(&self, data: &mut [Complex<T>]) -> Result<()> {
        let mut scratch = self.make_scratch();
        self.execute_with_scratch(data, &mut scratch)
    }

    /// Row transforms of length `ny1`, then column transforms of length `ny0`, in place.
    pub fn execute_with_scratch(
        &self,
        data: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
    ) -> Result<()> {
        if data.len() != self.ny0 * self.ny1 {
            return Err(Error::dimension(format!(
                "buffer of {} elements does not match {}x{} plan",
                data.len(),
                self.ny0,
                self.ny1
            )));
        }
        if scratch.len() < self.scratch_len() {
            return Err(Error::dimension("scratch buffer too small for plan"));
        }
        let (column, inner) = scratch.split_at_mut(self.ny0);
        self.rows.process_with_scratch(data, inner)?;
        if self.ny0 > 1 {
            for j in 0..self.ny1 {
                for (i, slot) in column.iter_mut().enumerate() {
                    *slot = data[i * self.ny1 + j];
                }
                self.cols.process_with_scratch(column, inner)?;
                for (i, &v) in column.iter().enumerate() {
                    data[i * self.ny1 + j] = v;
                }
            }
        }
        Ok(())
    }

    /// Releases the plan's tables.
    pub fn destroy(self) {}
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::dft_naive;

    fn signal(n: usize) -> Vec<Complex<f64>> {
        (0..n)
            .map(|k| Complex::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos() - 0.2))
            .collect()
    }

    #[test]
    fn constant_2x2() {
        let plan = Plan::new(2, 2, Direction::Forward).unwrap();
        let mut data = vec![Complex::new(1.5, 0.5); 4];
        plan.execute(&mut data).unwrap();
        assert_eq!(data[0], Complex::new(6.0, 2.0));
        assert!(data[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn degenerate_plan_is_identity() {
        let plan = Plan::new(1, 1, Direction::Forward).unwrap();
        let mut data = vec![Complex::new(3.0, -2.0)];
        plan.execute(&mut data).unwrap();
        assert_eq!(data, vec![Complex::new(3.0, -2.0)]);
    }

    #[test]
    fn rejects_bad_dims_and_lengths() {
        assert!(matches!(
            Plan::<f64>::new(0, 4, Direction::Forward),
            Err(Error::Dimension(_))
        ));
        let plan = Plan::<f64>::new(2, 3, Direction::Forward).unwrap();
        let mut wrong = signal(5);
        assert!(matches!(plan.execute(&mut wrong), Err(Error::Dimension(_))));
    }

    #[test]
    fn matches_row_column_oracle() {
        let (ny0, ny1) = (4, 6);
        let x = signal(ny0 * ny1);
        let mut expect: Vec<Complex<f64>> = x
            .chunks(ny1)
            .flat_map(|row| dft_naive(row, Direction::Forward).unwrap())
            .collect();
        for j in 0..ny1 {
            let col: Vec<_> = (0..ny0).map(|i| expect[i * ny1 + j]).collect();
            for (i, v) in dft_naive(&col, Direction::Forward)
                .unwrap()
                .into_iter()
                .enumerate()
            {
                expect[i * ny1 + j] = v;
            }
        }
        let plan = Plan::new(ny0, ny1, Direction::Forward).unwrap();
        let mut y = x.clone();
        plan.execute(&mut y).unwrap();
        for (a, b) in y.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn lifecycle_and_reuse() {
        let forward = Plan::new(5, 8, Direction::Forward).unwrap();
        let backward = Plan::new(5, 8, Direction::Backward).unwrap();
        let x = signal(40);
        let mut a = x.clone();
        let mut b = x.clone();
        forward.execute(&mut a).unwrap();
        forward.execute(&mut b).unwrap();
        assert_eq!(a, b, "plan reuse must be bitwise reproducible");
        backward.execute(&mut a).unwrap();
        for (got, want) in a.iter().zip(&x) {
            assert!((got / 40.0 - want).norm() < 1e-13);
        }
        forward.destroy();
        backward.destroy();
        Plan::<f64>::new(3, 3, Direction::Forward)
            .unwrap()
            .destroy();
    }
}
