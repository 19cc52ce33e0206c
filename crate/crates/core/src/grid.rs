//! Finite product grids over a hyperbolic interval `[lo, hi]`.

use serde::{Deserialize, Serialize};

use crate::hypnum::Hyp;
use crate::metric::MetricError;

/// An `n x n` grid of `[lo, hi]` in idempotent coordinates.
///
/// Points are ordered with the `u` index outermost: point `i * n + j` has
/// `u = axis_u(i)` and `v = axis_v(j)`. Endpoints are hit exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    lo: Hyp,
    hi: Hyp,
    n: usize,
}

impl Grid {
    pub fn new(lo: Hyp, hi: Hyp, n: usize) -> Result<Grid, MetricError> {
        if n < 2 || !lo.precedes(hi) {
            return Err(MetricError::InvalidGrid);
        }
        Ok(Grid { lo, hi, n })
    }

    /// The grid of the real interval `[lo, hi]` placed in both slots.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Grid, MetricError> {
        let lo = Hyp::splat(lo).map_err(|_| MetricError::InvalidGrid)?;
        let hi = Hyp::splat(hi).map_err(|_| MetricError::InvalidGrid)?;
        Grid::new(lo, hi, n)
    }

    pub fn lo(&self) -> Hyp {
        self.lo
    }

    pub fn hi(&self) -> Hyp {
        self.hi
    }

    /// Points per axis.
    pub fn per_axis(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing between neighbouring grid lines, per coordinate.
    pub fn spacing(&self) -> Hyp {
        (self.hi - self.lo).scale(1.0 / (self.n - 1) as f64)
    }

    fn axis(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        let t = i as f64 / (n - 1) as f64;
        lo * (1.0 - t) + hi * t
    }

    pub fn axis_u(&self, i: usize) -> f64 {
        Grid::axis(self.lo.u(), self.hi.u(), i, self.n)
    }

    pub fn axis_v(&self, j: usize) -> f64 {
        Grid::axis(self.lo.v(), self.hi.v(), j, self.n)
    }

    pub fn point(&self, index: usize) -> Hyp {
        let (i, j) = (index / self.n, index % self.n);
        Hyp::new(self.axis_u(i), self.axis_v(j)).expect("grid coordinates are finite")
    }

    pub fn points(&self) -> impl Iterator<Item = Hyp> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Whether `x` lies in the closed hull `[lo, hi]`.
    pub fn hull_contains(&self, x: Hyp) -> bool {
        self.lo.precedes_eq(x) && x.precedes_eq(self.hi)
    }
}
