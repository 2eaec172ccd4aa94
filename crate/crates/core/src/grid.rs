use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Periodic chart of the model torus: `nx x ny` samples over periods
/// `lx x ly`. Sample `i` along x sits at `x = i * lx / nx`, likewise in y.
///
/// Grid sizes must be even and at least 8 so the spectral calculus has a
/// well-defined Nyquist mode and headroom for band-limited data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusChart {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl TorusChart {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0 {
            return Err(Error::InvalidChart(format!(
                "grid sizes must be even and >= 8, got {nx} x {ny}"
            )));
        }
        if lx <= 0.0 || ly <= 0.0 {
            return Err(Error::InvalidChart(format!(
                "periods must be positive, got {lx} x {ly}"
            )));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// Square chart with the default period `2*pi` in both directions.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.lx / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.ly / self.ny as f64
    }

    /// Cell area `dx * dy` of the quadrature lattice.
    pub fn cell_area(&self) -> f64 {
        (self.lx / self.nx as f64) * (self.ly / self.ny as f64)
    }

    pub(crate) fn describe(&self) -> String {
        format!("{}x{} ({}, {})", self.nx, self.ny, self.lx, self.ly)
    }

    pub(crate) fn check_same(&self, other: &TorusChart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.describe(),
                found: other.describe(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_grids() {
        assert!(TorusChart::new(7, 8, 1.0, 1.0).is_err());
        assert!(TorusChart::new(8, 9, 1.0, 1.0).is_err());
        assert!(TorusChart::new(4, 4, 1.0, 1.0).is_err());
        assert!(TorusChart::new(8, 8, 0.0, 1.0).is_err());
        assert!(TorusChart::new(8, 8, 1.0, 1.0).is_ok());
    }

    #[test]
    fn sample_points_cover_one_period() {
        let c = TorusChart::square(16).unwrap();
        assert_eq!(c.x(0), 0.0);
        let last = c.x(15);
        assert!(last < 2.0 * PI && last > 2.0 * PI * 14.0 / 16.0);
    }
}
