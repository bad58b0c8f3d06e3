//! Uniform Cartesian sampling windows and real-valued sampled fields.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Square sampling window `[-half_width, half_width)` discretized on
/// `nx x ny` points.
///
/// Nodes are `x_i = -half_width + i*dx` with `dx = 2*half_width/nx`; the
/// duplicate right/top edge is excluded, which is the natural layout for FFT
/// work, and the origin is always a node. Point counts must be powers of two
/// (spectral operations require it) and at least 16.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    half_width: f64,
    nx: usize,
    ny: usize,
}

impl Grid2D {
    pub fn new(half_width: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width must be positive and finite, got {half_width}"
            )));
        }
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 16 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "{name} must be a power of two >= 16, got {n}"
                )));
            }
        }
        Ok(Self { half_width, nx, ny })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dy()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Index pair of the node nearest the origin (exactly the origin here,
    /// since point counts are even).
    pub fn origin_index(&self) -> (usize, usize) {
        (self.nx / 2, self.ny / 2)
    }
}

/// Uniform 1D sampling window with the same conventions as [`Grid2D`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width must be positive and finite, got {half_width}"
            )));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 16, got {n}"
            )));
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }
}

/// Real values sampled on a [`Grid2D`], indexed `[i, j] = (x_i, y_j)`.
#[derive(Debug, Clone)]
pub struct RealGridFunction {
    pub values: Array2<f64>,
    pub grid: Grid2D,
}

impl RealGridFunction {
    pub fn new(values: Array2<f64>, grid: Grid2D) -> Result<Self> {
        if values.dim() != (grid.nx(), grid.ny()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{} values, got {}x{}",
                grid.nx(),
                grid.ny(),
                values.dim().0,
                values.dim().1
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch(
                "field contains non-finite values".to_string(),
            ));
        }
        Ok(Self { values, grid })
    }

    /// Sample `f(x, y)` on every node of `grid`.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn((grid.nx(), grid.ny()), |(i, j)| {
            f(grid.x(i), grid.y(j))
        });
        Self { values, grid }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_point_counts() {
        assert!(Grid2D::new(8.0, 15, 16).is_err());
        assert!(Grid2D::new(8.0, 100, 128).is_err());
        assert!(Grid2D::new(8.0, 8, 8).is_err());
        assert!(Grid2D::new(-1.0, 64, 64).is_err());
        assert!(Grid2D::new(f64::NAN, 64, 64).is_err());
        assert!(Grid2D::new(8.0, 64, 128).is_ok());
    }

    #[test]
    fn node_layout() {
        let g = Grid2D::new(8.0, 256, 256).unwrap();
        assert_eq!(g.dx(), 0.0625);
        assert_eq!(g.x(0), -8.0);
        // The origin is a node and the right edge is excluded.
        let (i0, j0) = g.origin_index();
        assert_eq!(g.x(i0), 0.0);
        assert_eq!(g.y(j0), 0.0);
        assert_eq!(g.x(255), 8.0 - g.dx());
    }

    #[test]
    fn grid_1d_layout() {
        let g = Grid1D::new(16.0, 1024).unwrap();
        assert_eq!(g.x(0), -16.0);
        assert_eq!(g.x(512), 0.0);
        assert!(Grid1D::new(16.0, 300).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = Grid2D::new(1.0, 16, 16).unwrap();
        let v = Array2::<f64>::zeros((16, 32));
        assert!(RealGridFunction::new(v, g).is_err());
    }
}
