//! FFT-based calculus on periodic grids.
//!
//! Derivatives multiply by `i k` in Fourier space with the signed wavenumber
//! convention `k in {-n/2+1, ..., n/2}`; the Nyquist mode is zeroed in odd
//! derivatives, the standard choice that keeps real fields real. Plans are
//! cached in a process-wide registry keyed by transform length, so grids of
//! the same size share plans across threads.

use crate::field::{Field2, FieldSm};
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

type PlanKey = (usize, bool);

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    static REGISTRY: OnceLock<Mutex<(FftPlanner<f64>, HashMap<PlanKey, Arc<dyn Fft<f64>>>)>> =
        OnceLock::new();
    let registry = REGISTRY.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = registry.lock().expect("fft plan registry poisoned");
    let (planner, cache) = &mut *guard;
    cache
        .entry((n, forward))
        .or_insert_with(|| {
            planner.plan_fft(
                n,
                if forward {
                    FftDirection::Forward
                } else {
                    FftDirection::Inverse
                },
            )
        })
        .clone()
}

pub(crate) fn phi_plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    plan(n, forward)
}

/// Signed wavenumber index for bin `i` of an `n`-point transform.
pub fn signed_mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Multipliers `(i k)^order` for an `n`-point axis of period `length`.
/// Odd orders zero the Nyquist bin.
fn deriv_multipliers(n: usize, length: f64, order: u32) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let m = signed_mode(i, n);
            if order % 2 == 1 && n % 2 == 0 && i == n / 2 {
                return Complex64::new(0.0, 0.0);
            }
            let k = 2.0 * PI * m as f64 / length;
            Complex64::new(0.0, k).powu(order)
        })
        .collect()
}

/// Applies `spectrum_map(bin index, coefficient)` along one axis of a mutable
/// lane iterator: forward FFT, map, inverse FFT with 1/n normalization.
fn transform_lanes<'a>(
    lanes: impl Iterator<Item = ndarray::ArrayViewMut1<'a, Complex64>>,
    n: usize,
    multipliers: &[Complex64],
) {
    let fwd = plan(n, true);
    let inv = plan(n, false);
    let mut buf = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
    let scale = 1.0 / n as f64;
    for mut lane in lanes {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fwd.process_with_scratch(&mut buf, &mut scratch);
        for (b, m) in buf.iter_mut().zip(multipliers) {
            *b *= m;
        }
        inv.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(&buf) {
            *v = *b * scale;
        }
    }
}

impl Field2 {
    /// Spectral derivative of the given order along x.
    pub fn deriv_x(&self, order: u32) -> Field2 {
        let mut out = self.clone();
        let mult = deriv_multipliers(self.chart.nx, self.chart.lx, order);
        transform_lanes(out.data.lanes_mut(Axis(0)).into_iter(), self.chart.nx, &mult);
        out
    }

    /// Spectral derivative of the given order along y.
    pub fn deriv_y(&self, order: u32) -> Field2 {
        let mut out = self.clone();
        let mult = deriv_multipliers(self.chart.ny, self.chart.ly, order);
        transform_lanes(out.data.lanes_mut(Axis(1)).into_iter(), self.chart.ny, &mult);
        out
    }

    pub fn dx(&self) -> Field2 {
        self.deriv_x(1)
    }

    pub fn dy(&self) -> Field2 {
        self.deriv_y(1)
    }

    /// Flat Laplacian `f_xx + f_yy`.
    pub fn laplacian_flat(&self) -> Field2 {
        &self.deriv_x(2) + &self.deriv_y(2)
    }

    /// Solves `laplacian h = self` on the torus, returning the mean-zero
    /// solution. The mean of the right-hand side is discarded (it must be
    /// zero for solvability; exact sources arising as divergences are).
    pub fn poisson_flat(&self) -> Field2 {
        let (nx, ny) = (self.chart.nx, self.chart.ny);
        let mut hat = fft2(&self.data);
        for ((i, j), v) in hat.indexed_iter_mut() {
            let kx = 2.0 * PI * signed_mode(i, nx) as f64 / self.chart.lx;
            let ky = 2.0 * PI * signed_mode(j, ny) as f64 / self.chart.ly;
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                *v = Complex64::default();
            } else {
                *v /= -k2;
            }
        }
        Field2 {
            chart: self.chart,
            data: ifft2(&hat),
        }
    }

    /// Zeroes every Fourier mode with `|k_x| > band_x` or `|k_y| > band_y`
    /// (mode indices, not physical wavenumbers).
    pub fn band_limit(&self, band_x: usize, band_y: usize) -> Field2 {
        let (nx, ny) = (self.chart.nx, self.chart.ny);
        let mut hat = fft2(&self.data);
        for ((i, j), v) in hat.indexed_iter_mut() {
            if signed_mode(i, nx).unsigned_abs() as usize > band_x
                || signed_mode(j, ny).unsigned_abs() as usize > band_y
            {
                *v = Complex64::default();
            }
        }
        Field2 {
            chart: self.chart,
            data: ifft2(&hat),
        }
    }
}

pub(crate) fn fft2(data: &Array2<Complex64>) -> Array2<Complex64> {
    let (nx, ny) = (data.nrows(), data.ncols());
    let mut out = data.clone();
    let unit_x = vec![Complex64::new(nx as f64, 0.0); nx];
    let unit_y = vec![Complex64::new(ny as f64, 0.0); ny];
    // transform_lanes normalizes by 1/n; compensate so this is a plain FFT.
    transform_lanes_forward(out.lanes_mut(Axis(0)).into_iter(), nx, &unit_x);
    transform_lanes_forward(out.lanes_mut(Axis(1)).into_iter(), ny, &unit_y);
    out
}

pub(crate) fn ifft2(data: &Array2<Complex64>) -> Array2<Complex64> {
    let (nx, ny) = (data.nrows(), data.ncols());
    let mut out = data.clone();
    transform_lanes_inverse(out.lanes_mut(Axis(0)).into_iter(), nx);
    transform_lanes_inverse(out.lanes_mut(Axis(1)).into_iter(), ny);
    out
}

fn transform_lanes_forward<'a>(
    lanes: impl Iterator<Item = ndarray::ArrayViewMut1<'a, Complex64>>,
    n: usize,
    post_scale: &[Complex64],
) {
    let fwd = plan(n, true);
    let mut buf = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len()];
    let scale = 1.0 / n as f64;
    for mut lane in lanes {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fwd.process_with_scratch(&mut buf, &mut scratch);
        for ((v, b), s) in lane.iter_mut().zip(&buf).zip(post_scale) {
            *v = *b * s * scale;
        }
    }
}

fn transform_lanes_inverse<'a>(
    lanes: impl Iterator<Item = ndarray::ArrayViewMut1<'a, Complex64>>,
    n: usize,
) {
    let inv = plan(n, false);
    let mut buf = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); inv.get_inplace_scratch_len()];
    let scale = 1.0 / n as f64;
    for mut lane in lanes {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        inv.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(&buf) {
            *v = *b * scale;
        }
    }
}

impl FieldSm {
    pub fn deriv_x(&self, order: u32) -> FieldSm {
        let mut out = self.clone();
        let mult = deriv_multipliers(self.chart.nx, self.chart.lx, order);
        transform_lanes(out.data.lanes_mut(Axis(0)).into_iter(), self.chart.nx, &mult);
        out
    }

    pub fn deriv_y(&self, order: u32) -> FieldSm {
        let mut out = self.clone();
        let mult = deriv_multipliers(self.chart.ny, self.chart.ly, order);
        transform_lanes(out.data.lanes_mut(Axis(1)).into_iter(), self.chart.ny, &mult);
        out
    }

    /// Spectral derivative along the fiber (period `2 pi`).
    pub fn deriv_phi(&self, order: u32) -> FieldSm {
        let mut out = self.clone();
        let mult = deriv_multipliers(self.nphi, 2.0 * PI, order);
        transform_lanes(out.data.lanes_mut(Axis(2)).into_iter(), self.nphi, &mult);
        out
    }

    pub fn dx(&self) -> FieldSm {
        self.deriv_x(1)
    }

    pub fn dy(&self) -> FieldSm {
        self.deriv_y(1)
    }

    pub fn dphi(&self) -> FieldSm {
        self.deriv_phi(1)
    }

    /// Zeroes modes outside the given per-axis bands.
    pub fn band_limit(&self, band_x: usize, band_y: usize, band_phi: usize) -> FieldSm {
        let mut out = self.clone();
        let keep_x: Vec<Complex64> = keep_profile(self.chart.nx, band_x);
        let keep_y: Vec<Complex64> = keep_profile(self.chart.ny, band_y);
        let keep_p: Vec<Complex64> = keep_profile(self.nphi, band_phi);
        transform_lanes(out.data.lanes_mut(Axis(0)).into_iter(), self.chart.nx, &keep_x);
        transform_lanes(out.data.lanes_mut(Axis(1)).into_iter(), self.chart.ny, &keep_y);
        transform_lanes(out.data.lanes_mut(Axis(2)).into_iter(), self.nphi, &keep_p);
        out
    }
}

fn keep_profile(n: usize, band: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            if signed_mode(i, n).unsigned_abs() as usize <= band {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusChart;

    #[test]
    fn derivative_of_sine_is_cosine() {
        let chart = TorusChart::square(32).unwrap();
        let f = Field2::from_real_fn(chart, |x, _| (3.0 * x).sin());
        let expect = Field2::from_real_fn(chart, |x, _| 3.0 * (3.0 * x).cos());
        assert!((&f.dx() - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn derivative_respects_period() {
        let chart = TorusChart::new(32, 32, 1.0, 2.0).unwrap();
        let f = Field2::from_real_fn(chart, |x, y| {
            (2.0 * PI * x).cos() + (2.0 * PI * y / 2.0).sin()
        });
        let fx = Field2::from_real_fn(chart, |x, _| -2.0 * PI * (2.0 * PI * x).sin());
        let fy = Field2::from_real_fn(chart, |_, y| PI * (PI * y).cos());
        assert!((&f.dx() - &fx).max_abs() < 1e-10);
        assert!((&f.dy() - &fy).max_abs() < 1e-10);
    }

    #[test]
    fn poisson_inverts_laplacian() {
        let chart = TorusChart::square(32).unwrap();
        let h = Field2::from_real_fn(chart, |x, y| (2.0 * x).cos() * y.sin());
        let rhs = h.laplacian_flat();
        let sol = rhs.poisson_flat();
        assert!((&sol - &h).max_abs() < 1e-12);
    }

    #[test]
    fn fiber_derivative_eigenfunction() {
        let chart = TorusChart::square(8).unwrap();
        let f = FieldSm::from_fn(chart, 16, |_, _, p| Complex64::from_polar(1.0, 3.0 * p));
        let df = f.dphi();
        let expect = f.scale(Complex64::new(0.0, 3.0));
        assert!((&df - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn band_limit_removes_high_modes() {
        let chart = TorusChart::square(32).unwrap();
        let f = Field2::from_real_fn(chart, |x, y| (2.0 * x).cos() + (9.0 * y).sin());
        let g = f.band_limit(4, 4);
        let expect = Field2::from_real_fn(chart, |x, _| (2.0 * x).cos());
        assert!((&g - &expect).max_abs() < 1e-12);
    }
}
