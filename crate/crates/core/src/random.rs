//! Seeded band-limited test-field generators.
//!
//! The library's exactness guarantees assume data band-limited to a quarter
//! of the grid size per axis; every generator here enforces its band by
//! construction (fields are synthesized from modes inside the band, nothing
//! is filtered after the fact). All generators are deterministic in the
//! passed RNG.

use crate::field::{Field2, FieldSm};
use crate::grid::TorusChart;
use crate::surface::OneForm;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

fn unit_complex(rng: &mut impl Rng) -> Complex64 {
    // Uniform in the unit disk, radius biased toward the rim.
    let phase = rng.gen_range(0.0..2.0 * PI);
    let radius: f64 = rng.gen_range(0.2..1.0);
    Complex64::from_polar(radius, phase)
}

/// Real band-limited scalar on the base, `max |f| <= amplitude` after
/// normalization. Modes with `|kx| <= band` and `|ky| <= band` only.
pub fn real_field2(chart: TorusChart, band: usize, amplitude: f64, rng: &mut impl Rng) -> Field2 {
    let band = band.min(chart.nx / 2 - 1).min(chart.ny / 2 - 1);
    let mut f = Field2::zeros(chart);
    let b = band as i64;
    for kx in -b..=b {
        for ky in -b..=b {
            if kx == 0 && ky == 0 {
                continue;
            }
            let c = unit_complex(rng);
            for ((i, j), v) in f.data.indexed_iter_mut() {
                let phase = kx as f64 * 2.0 * PI * i as f64 / chart.nx as f64
                    + ky as f64 * 2.0 * PI * j as f64 / chart.ny as f64;
                *v += Complex64::new((c * Complex64::from_polar(1.0, phase)).re, 0.0);
            }
        }
    }
    let max = f.max_abs();
    if max > 0.0 {
        f = f.scale_re(amplitude / max);
    }
    f
}

/// Complex band-limited scalar on the base.
pub fn complex_field2(
    chart: TorusChart,
    band: usize,
    amplitude: f64,
    rng: &mut impl Rng,
) -> Field2 {
    let band = band.min(chart.nx / 2 - 1).min(chart.ny / 2 - 1);
    let mut f = Field2::zeros(chart);
    let b = band as i64;
    for kx in -b..=b {
        for ky in -b..=b {
            let c = unit_complex(rng);
            for ((i, j), v) in f.data.indexed_iter_mut() {
                let phase = kx as f64 * 2.0 * PI * i as f64 / chart.nx as f64
                    + ky as f64 * 2.0 * PI * j as f64 / chart.ny as f64;
                *v += c * Complex64::from_polar(1.0, phase);
            }
        }
    }
    let max = f.max_abs();
    if max > 0.0 {
        f = f.scale_re(amplitude / max);
    }
    f
}

/// Real band-limited field on the bundle with per-axis bands
/// `(band_x, band_y, band_phi)`.
pub fn real_field_sm(
    chart: TorusChart,
    nphi: usize,
    bands: (usize, usize, usize),
    amplitude: f64,
    rng: &mut impl Rng,
) -> FieldSm {
    let modes: Vec<i64> = (0..=bands.2.min(nphi / 2 - 1) as i64).collect();
    real_field_sm_modes(chart, nphi, bands.0.min(bands.1), &modes, amplitude, rng)
}

/// Real field with vertical support on `modes` (and their negatives, from
/// reality) and base band `band_xy`: `sum_m Re(W_m(x, y) e^{i m phi})`.
pub fn real_field_sm_modes(
    chart: TorusChart,
    nphi: usize,
    band_xy: usize,
    modes: &[i64],
    amplitude: f64,
    rng: &mut impl Rng,
) -> FieldSm {
    let mut f = FieldSm::zeros(chart, nphi);
    for &m in modes {
        let w = complex_field2(chart, band_xy, 1.0, rng);
        for ((i, j, k), v) in f.data.indexed_iter_mut() {
            let phase = Complex64::from_polar(1.0, m as f64 * 2.0 * PI * k as f64 / nphi as f64);
            let contrib = w.data[(i, j)] * phase;
            *v += Complex64::new(contrib.re, 0.0);
        }
    }
    let max = f.max_abs();
    if max > 0.0 {
        f = f.scale_re(amplitude / max);
    }
    f
}

/// Random band-limited one-form.
pub fn one_form(chart: TorusChart, band: usize, amplitude: f64, rng: &mut impl Rng) -> OneForm {
    OneForm {
        chart,
        cx: real_field2(chart, band, amplitude, rng),
        cy: real_field2(chart, band, amplitude, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let chart = TorusChart::square(16).unwrap();
        let a = real_field2(chart, 4, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        let b = real_field2(chart, 4, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!((&a - &b).max_abs(), 0.0);
    }

    #[test]
    fn band_limit_is_enforced() {
        let chart = TorusChart::square(32).unwrap();
        let f = real_field2(chart, 4, 1.0, &mut ChaCha8Rng::seed_from_u64(3));
        let filtered = f.band_limit(4, 4);
        assert!((&f - &filtered).max_abs() < 1e-13);
        assert!(f.expect_real(1e-14).is_ok());
    }
}
