use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a uniform grid; the runtime [`Grid`] is built
/// from this in configs and run records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::uniform(self.lower, self.upper, self.n)
    }
}

/// A fixed, strictly increasing, equally spaced discretization of a 1-D
/// domain. All query selection happens on this grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lower: f64,
    upper: f64,
    points: Vec<f64>,
}

impl Grid {
    /// `n` equally spaced points with `points[0] == lower` and
    /// `points[n-1] == upper` exactly.
    pub fn uniform(lower: f64, upper: f64, n: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidConfig(format!(
                "grid bounds must be finite with lower < upper, got [{lower}, {upper}]"
            )));
        }
        if n < 2 {
            return Err(Error::GridTooSmall { min: 2, got: n });
        }
        let last = (n - 1) as f64;
        let points = (0..n)
            .map(|i| {
                let t = i as f64 / last;
                lower * (1.0 - t) + upper * t
            })
            .collect();
        Ok(Grid {
            lower,
            upper,
            points,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Constant spacing between neighbors.
    pub fn spacing(&self) -> f64 {
        (self.upper - self.lower) / (self.points.len() - 1) as f64
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            lower: self.lower,
            upper: self.upper,
            n: self.points.len(),
        }
    }

    /// Index of the grid point nearest to `x` (clamped to the bounds).
    pub fn nearest_index(&self, x: f64) -> usize {
        let h = self.spacing();
        let i = ((x - self.lower) / h).round();
        (i.max(0.0) as usize).min(self.points.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = Grid::uniform(-8.0, 8.0, 400).unwrap();
        assert_eq!(g.points()[0], -8.0);
        assert_eq!(g.points()[399], 8.0);
        assert_eq!(g.len(), 400);
    }

    #[test]
    fn spacing_is_constant_to_1e12_relative() {
        let g = Grid::uniform(-8.0, 8.0, 400).unwrap();
        let h = g.spacing();
        for w in g.points().windows(2) {
            assert!(((w[1] - w[0]) - h).abs() <= 1e-12 * h.abs());
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::uniform(0.0, 1.0, 1).is_err());
        assert!(Grid::uniform(1.0, 1.0, 10).is_err());
        assert!(Grid::uniform(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn nearest_index_snaps_and_clamps() {
        let g = Grid::uniform(0.0, 1.0, 11).unwrap();
        assert_eq!(g.nearest_index(0.31), 3);
        assert_eq!(g.nearest_index(-5.0), 0);
        assert_eq!(g.nearest_index(5.0), 10);
        assert_eq!(g.nearest_index(g.points()[7]), 7);
    }
}
