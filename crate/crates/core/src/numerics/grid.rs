use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `0, h, 2h, ..., (n-1)h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    h: f64,
    n: usize,
}

impl Grid {
    /// Grid with step `h` and `n` points.
    pub fn with_len(h: f64, n: usize) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Grid(format!("step must be finite and positive, got {h}")));
        }
        if n == 0 {
            return Err(Error::Grid("grid needs at least one point".into()));
        }
        Ok(Self { h, n })
    }

    /// Smallest grid with step `h` whose last point is at or beyond `horizon`.
    pub fn new(h: f64, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::Grid(format!("horizon must be finite and >= 0, got {horizon}")));
        }
        Self::with_len(h, 1)?;
        let steps = (horizon / h * (1.0 - 1e-12)).ceil() as usize;
        Self::with_len(h, steps + 1)
    }

    /// Validates an explicit point list: starts at 0, increasing, uniform to
    /// 1e-12 relative.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        match points {
            [] => Err(Error::Grid("empty point list".into())),
            [p0] if *p0 == 0.0 => Ok(Self { h: 1.0, n: 1 }),
            [p0, ..] if *p0 != 0.0 => Err(Error::Grid(format!("first point must be 0, got {p0}"))),
            _ => {
                let n = points.len();
                let h = points[n - 1] / (n - 1) as f64;
                if !(h.is_finite() && h > 0.0) {
                    return Err(Error::Grid("points must be increasing and finite".into()));
                }
                for (i, &p) in points.iter().enumerate() {
                    if (p - i as f64 * h).abs() > 1e-12 * (i as f64 * h).max(h) {
                        return Err(Error::Grid(format!(
                            "non-uniform spacing at index {i}: {p} vs {}",
                            i as f64 * h
                        )));
                    }
                }
                Ok(Self { h, n })
            }
        }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn last(&self) -> f64 {
        self.point(self.n - 1)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Index of `t` if it lies on the grid (to 1e-9 of a step).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = t / self.h;
        let i = x.round();
        ((x - i).abs() <= 1e-9 && i >= 0.0 && (i as usize) < self.n).then_some(i as usize)
    }

    /// Same step, at least `n` points.
    pub fn extended(&self, n: usize) -> Self {
        Self { h: self.h, n: n.max(self.n) }
    }
}

/// A path `(t_i, v_i)` on a uniform grid, read as right-continuous between
/// grid points.
pub type SamplePath = GridFunction;

/// Values sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn try_from_fn(grid: Grid, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.points().map(&mut f).collect::<Result<_>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise `a*self + b*other`.
    pub fn axpby(&self, a: f64, other: &GridFunction, b: f64) -> Result<GridFunction> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(GridFunction { grid: self.grid, values })
    }

    pub fn scaled(&self, a: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub(crate) fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Grid(format!(
                "mismatched grids: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}
