use crate::error::{Error, Result};
use crate::grid::TorusChart;
use ndarray::{Array2, Array3, Zip};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Complex scalar field sampled on the base torus. Real-valued data is
/// stored with zero imaginary part.
#[derive(Debug, Clone)]
pub struct Field2 {
    pub chart: TorusChart,
    pub data: Array2<Complex64>,
}

/// Complex scalar field on the circle bundle, sampled on the periodic
/// `(x, y, phi)` grid with `phi_k = 2 pi k / nphi`. Axis order is
/// `(x, y, phi)`.
#[derive(Debug, Clone)]
pub struct FieldSm {
    pub chart: TorusChart,
    pub nphi: usize,
    pub data: Array3<Complex64>,
}

impl Field2 {
    pub fn zeros(chart: TorusChart) -> Self {
        Self {
            chart,
            data: Array2::zeros((chart.nx, chart.ny)),
        }
    }

    pub fn constant(chart: TorusChart, value: Complex64) -> Self {
        Self {
            chart,
            data: Array2::from_elem((chart.nx, chart.ny), value),
        }
    }

    pub fn from_fn(chart: TorusChart, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let data = Array2::from_shape_fn((chart.nx, chart.ny), |(i, j)| {
            f(chart.x(i), chart.y(j))
        });
        Self { chart, data }
    }

    pub fn from_real_fn(chart: TorusChart, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(chart, |x, y| Complex64::new(f(x, y), 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            chart: self.chart,
            data: self.data.mapv(&f),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.chart, other.chart, "field chart mismatch");
        let mut out = self.clone();
        Zip::from(&mut out.data)
            .and(&other.data)
            .for_each(|o, &b| *o = f(*o, b));
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn re_part(&self) -> Self {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    pub fn im_part(&self) -> Self {
        self.map(|v| Complex64::new(v.im, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_im(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// Checks the field is real to `tol` relative to its own magnitude.
    pub fn expect_real(&self, tol: f64) -> Result<()> {
        let scale = self.max_abs().max(1.0);
        let max_im = self.max_im();
        if max_im <= tol * scale {
            Ok(())
        } else {
            Err(Error::NotReal { max_im })
        }
    }

    /// Minimum of the real part together with its grid location.
    pub fn min_re(&self) -> (f64, (usize, usize)) {
        let mut min = f64::INFINITY;
        let mut at = (0, 0);
        for ((i, j), v) in self.data.indexed_iter() {
            if v.re < min {
                min = v.re;
                at = (i, j);
            }
        }
        (min, at)
    }

    /// Mean value over the chart (plain average, no metric weight).
    pub fn mean(&self) -> Complex64 {
        self.data.sum() / (self.chart.nx * self.chart.ny) as f64
    }

    /// Plain (unweighted) L2 norm with the flat area element.
    pub fn norm_flat(&self) -> f64 {
        let s: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        (s * self.chart.cell_area()).sqrt()
    }

    /// Broadcast to a bundle field constant along the fiber.
    pub fn lift(&self, nphi: usize) -> FieldSm {
        let mut out = FieldSm::zeros(self.chart, nphi);
        for ((i, j, _k), v) in out.data.indexed_iter_mut() {
            *v = self.data[(i, j)];
        }
        out
    }
}

impl FieldSm {
    pub fn zeros(chart: TorusChart, nphi: usize) -> Self {
        Self {
            chart,
            nphi,
            data: Array3::zeros((chart.nx, chart.ny, nphi)),
        }
    }

    pub fn constant(chart: TorusChart, nphi: usize, value: Complex64) -> Self {
        Self {
            chart,
            nphi,
            data: Array3::from_elem((chart.nx, chart.ny, nphi), value),
        }
    }

    pub fn phi(&self, k: usize) -> f64 {
         2.0 * PI * k as f64 / self.nphi as f64
    }

    pub fn from_fn(
        chart: TorusChart,
        nphi: usize,
        f: impl Fn(f64, f64, f64) -> Complex64,
    ) -> Self {
        let data = Array3::from_shape_fn((chart.nx, chart.ny, nphi), |(i, j, k)| {
            f(chart.x(i), chart.y(j), 2.0 * PI * k as f64 / nphi as f64)
        });
        Self { chart, nphi, data }
    }

    pub fn from_real_fn(chart: TorusChart, nphi: usize, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        Self::from_fn(chart, nphi, |x, y, p| Complex64::new(f(x, y, p), 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            chart: self.chart,
            nphi: self.nphi,
            data: self.data.mapv(&f),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        self.assert_same_shape(other);
        let mut out = self.clone();
        Zip::from(&mut out.data)
            .and(&other.data)
            .for_each(|o, &b| *o = f(*o, b));
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn re_part(&self) -> Self {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    pub fn im_part(&self) -> Self {
        self.map(|v| Complex64::new(v.im, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_im(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn expect_real(&self, tol: f64) -> Result<()> {
        let scale = self.max_abs().max(1.0);
        let max_im = self.max_im();
        if max_im <= tol * scale {
            Ok(())
        } else {
            Err(Error::NotReal { max_im })
        }
    }

    /// Pointwise product with a base field (constant along the fiber).
    pub fn mul_base(&self, base: &Field2) -> Self {
        assert_eq!(self.chart, base.chart, "field chart mismatch");
        let mut out = self.clone();
        for ((i, j, _k), v) in out.data.indexed_iter_mut() {
            *v *= base.data[(i, j)];
        }
        out
    }

    /// Pointwise product with a fiber profile (constant along the base).
    pub fn mul_fiber(&self, profile: &[Complex64]) -> Self {
        assert_eq!(profile.len(), self.nphi, "fiber profile length mismatch");
        let mut out = self.clone();
        for ((_i, _j, k), v) in out.data.indexed_iter_mut() {
            *v *= profile[k];
        }
        out
    }

    /// Minimum of the real part together with its grid location.
    pub fn min_re(&self) -> (f64, (usize, usize, usize)) {
        let mut min = f64::INFINITY;
        let mut at = (0, 0, 0);
        for ((i, j, k), v) in self.data.indexed_iter() {
            if v.re < min {
                min = v.re;
                at = (i, j, k);
            }
        }
        (min, at)
    }

    /// Location and value of the largest modulus.
    pub fn max_abs_at(&self) -> (f64, (usize, usize, usize)) {
        let mut max = 0.0;
        let mut at = (0, 0, 0);
        for ((i, j, k), v) in self.data.indexed_iter() {
            if v.norm() > max {
                max = v.norm();
                at = (i, j, k);
            }
        }
        (max, at)
    }

    pub(crate) fn assert_same_shape(&self, other: &Self) {
        assert_eq!(self.chart, other.chart, "field chart mismatch");
        assert_eq!(self.nphi, other.nphi, "fiber sample count mismatch");
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.chart.check_same(&other.chart)?;
        if self.nphi != other.nphi {
            return Err(Error::GridMismatch {
                expected: format!("nphi = {}", self.nphi),
                found: format!("nphi = {}", other.nphi),
            });
        }
        Ok(())
    }
}

macro_rules! impl_field_ops {
    ($ty:ty) => {
        impl std::ops::Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a + b)
            }
        }
        impl std::ops::Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a - b)
            }
        }
        impl std::ops::Mul for &$ty {
            type Output = $ty;
            fn mul(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a * b)
            }
        }
        impl std::ops::Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.map(|v| -v)
            }
        }
    };
}

impl_field_ops!(Field2);
impl_field_ops!(FieldSm);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_is_fiber_constant() {
        let chart = TorusChart::square(8).unwrap();
        let f = Field2::from_real_fn(chart, |x, y| x.sin() + y.cos());
        let lifted = f.lift(16);
        for k in 0..16 {
            assert_eq!(lifted.data[(3, 5, k)], f.data[(3, 5)]);
        }
    }

    #[test]
    fn arithmetic_round_trip() {
        let chart = TorusChart::square(8).unwrap();
        let f = Field2::from_real_fn(chart, |x, _| x.sin());
        let g = Field2::from_real_fn(chart, |_, y| y.cos());
        let h = &(&f + &g) - &g;
        let diff = (&h - &f).max_abs();
        assert!(diff < 1e-15);
    }

    #[test]
    fn expect_real_flags_imaginary_parts() {
        let chart = TorusChart::square(8).unwrap();
        let f = Field2::constant(chart, Complex64::new(0.0, 1.0));
        assert!(f.expect_real(1e-12).is_err());
        assert!(f.re_part().expect_real(1e-12).is_ok());
    }
}
