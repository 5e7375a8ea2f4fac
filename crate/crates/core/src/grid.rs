//! Uniform time grids on the unit trading horizon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of intervals used when a caller does not choose one.
pub const DEFAULT_INTERVALS: usize = 2000;

/// The ten-point quadrature panels need at least ten samples.
pub const MIN_INTERVALS: usize = 10;

/// A uniform grid of `n_intervals + 1` points covering `[0, 1]`.
///
/// The interval count is always even; at least ten intervals are needed by
/// the high-order stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeGrid {
    n_intervals: usize,
}

impl TimeGrid {
    pub fn new(n_intervals: usize) -> Result<Self> {
        if n_intervals < MIN_INTERVALS || n_intervals % 2 != 0 {
            return Err(Error::Grid(format!(
                "interval count must be even and at least {MIN_INTERVALS}, got {n_intervals}"
            )));
        }
        Ok(Self { n_intervals })
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn len(&self) -> usize {
        self.n_intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n_intervals as f64
    }

    /// The `i`-th grid point. Computed as `i / n` so both endpoints are exact.
    pub fn point(&self, i: usize) -> f64 {
        i as f64 / self.n_intervals as f64
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Grid with twice the resolution; every point of `self` is a point of the result.
    pub fn refined(&self) -> Self {
        Self {
            n_intervals: 2 * self.n_intervals,
        }
    }

    pub(crate) fn check_same(&self, other: &TimeGrid) -> Result<()> {
        if self.n_intervals == other.n_intervals {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.n_intervals,
                found: other.n_intervals,
            })
        }
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            n_intervals: DEFAULT_INTERVALS,
        }
    }
}
