use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::field::potential;
use crate::par;
use crate::params::SimParams;

/// Axis-aligned rectangle in the transverse plane, units of R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn square(half_width: f64) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
        }
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect {
            x_min: self.x_min.max(other.x_min),
            x_max: self.x_max.min(other.x_max),
            y_min: self.y_min.max(other.y_min),
            y_max: self.y_max.min(other.y_max),
        }
    }
}

/// Regular grid of nx × ny nodes including the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Result<Self, ExperimentError> {
        if nx < 2 || ny < 2 {
            return Err(ExperimentError::Grid(format!(
                "need at least 2 nodes per axis, got {nx}x{ny}"
            )));
        }
        if !(rect.x_max > rect.x_min && rect.y_max > rect.y_min) {
            return Err(ExperimentError::Grid(format!("empty extent {rect:?}")));
        }
        Ok(Self {
            x_min: rect.x_min,
            x_max: rect.x_max,
            nx,
            y_min: rect.y_min,
            y_max: rect.y_max,
            ny,
        })
    }

    pub fn square(half_width: f64, n: usize) -> Result<Self, ExperimentError> {
        Self::new(Rect::square(half_width), n, n)
    }

    pub fn rect(&self) -> Rect {
        Rect {
            x_min: self.x_min,
            x_max: self.x_max,
            y_min: self.y_min,
            y_max: self.y_max,
        }
    }

    // centre + half-width·u keeps mirrored nodes exact negatives of each other
    fn coord(min: f64, max: f64, n: usize, i: usize) -> f64 {
        let centre = 0.5 * (min + max);
        let half = 0.5 * (max - min);
        let u = (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64;
        centre + half * u
    }

    pub fn x(&self, i: usize) -> f64 {
        Self::coord(self.x_min, self.x_max, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        Self::coord(self.y_min, self.y_max, self.ny, j)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in row-major order (x fastest).
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .map(|(i, j)| (self.x(i), self.y(j)))
            .collect()
    }
}

/// U at every grid node (row-major, x fastest), units of mc².
pub fn potential_map(grid: &GridSpec, zeta: f64, phi: f64, p: &SimParams) -> Vec<f64> {
    par::map_ordered(&grid.nodes(), |&(x, y)| potential(x, y, zeta, phi, p))
}
