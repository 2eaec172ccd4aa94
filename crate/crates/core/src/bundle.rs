//! The unit circle bundle of a conformal base metric, sampled on the
//! periodic `(x, y, phi)` grid with the unit vector parametrization
//! `v = e^{-u}(cos(phi) dx + sin(phi) dy)`.
//!
//! The frame fields dual to the tautological coframe `(omega_1, omega_2, psi)`
//! come out as
//!
//! ```text
//! X f = e^{-u} ( cos(phi) f_x + sin(phi) f_y + (u_y cos(phi) - u_x sin(phi)) f_phi )
//! H f = e^{-u} ( -sin(phi) f_x + cos(phi) f_y - (u_x cos(phi) + u_y sin(phi)) f_phi )
//! V f = f_phi
//! ```
//!
//! These formulas are pinned by duality with the coframe, not copied from a
//! reference; the commutator battery `[V,X] = H`, `[V,H] = -X`,
//! `[X,H] = K V` is the ground truth validating the signs. The volume form
//! pulls back to `e^{2u} dx dy dphi`, which is the quadrature weight of
//! every inner product here.

use crate::error::Result;
use crate::field::{Field2, FieldSm};
use crate::grid::TorusChart;
use crate::spectral::signed_mode;
use crate::surface::{BaseMetric, OneForm};
use ndarray::Axis;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Circle bundle grid: base chart, fiber resolution and the base metric
/// generating the frame. Fiber profiles and curvature are cached once.
#[derive(Debug, Clone)]
pub struct BundleGrid {
    pub chart: TorusChart,
    pub nphi: usize,
    pub metric: BaseMetric,
    cos_phi: Vec<Complex64>,
    sin_phi: Vec<Complex64>,
    curvature: Field2,
}

impl BundleGrid {
    pub fn new(metric: BaseMetric, nphi: usize) -> Result<Self> {
        if nphi < 16 || nphi % 2 != 0 {
            return Err(crate::error::Error::InvalidChart(format!(
                "fiber sample count must be even and >= 16, got {nphi}"
            )));
        }
        let cos_phi = (0..nphi)
            .map(|k| Complex64::new((2.0 * PI * k as f64 / nphi as f64).cos(), 0.0))
            .collect();
        let sin_phi = (0..nphi)
            .map(|k| Complex64::new((2.0 * PI * k as f64 / nphi as f64).sin(), 0.0))
            .collect();
        let curvature = metric.gauss_curvature();
        Ok(Self {
            chart: metric.chart,
            nphi,
            metric,
            cos_phi,
            sin_phi,
            curvature,
        })
    }

    pub fn flat(chart: TorusChart, nphi: usize) -> Result<Self> {
        Self::new(BaseMetric::flat(chart), nphi)
    }

    /// Gauss curvature of the base metric, cached at construction.
    pub fn curvature(&self) -> &Field2 {
        &self.curvature
    }

    pub fn zeros(&self) -> FieldSm {
        FieldSm::zeros(self.chart, self.nphi)
    }

    /// Lift of a base scalar (constant along the fiber).
    pub fn lift(&self, f: &Field2) -> FieldSm {
        f.lift(self.nphi)
    }

    /// Lift of a one-form to the bundle function `theta(x, v)`:
    /// `e^{-u} (cx cos(phi) + cy sin(phi))`, a pure mode +-1 field.
    pub fn lift_one_form(&self, theta: &OneForm) -> FieldSm {
        let cx = self.lift(&(&theta.cx * &self.metric.emu));
        let cy = self.lift(&(&theta.cy * &self.metric.emu));
        &cx.mul_fiber(&self.cos_phi) + &cy.mul_fiber(&self.sin_phi)
    }

    /// Vertical vector field `V = d/dphi`.
    pub fn op_v(&self, f: &FieldSm) -> FieldSm {
        f.dphi()
    }

    /// Geodesic vector field of the base metric.
    pub fn op_x(&self, f: &FieldSm) -> FieldSm {
        let fx = f.dx().mul_fiber(&self.cos_phi);
        let fy = f.dy().mul_fiber(&self.sin_phi);
        let fphi = f.dphi();
        let rot = &fphi.mul_fiber(&self.cos_phi).mul_base(&self.metric.uy)
            - &fphi.mul_fiber(&self.sin_phi).mul_base(&self.metric.ux);
        (&(&fx + &fy) + &rot).mul_base(&self.metric.emu)
    }

    /// Horizontal vector field `H = [V, X]`.
    pub fn op_h(&self, f: &FieldSm) -> FieldSm {
        let fx = f.dx().mul_fiber(&self.sin_phi).map(|v| -v);
        let fy = f.dy().mul_fiber(&self.cos_phi);
        let fphi = f.dphi();
        let rot = &(&fphi.mul_fiber(&self.cos_phi).mul_base(&self.metric.ux)
            + &fphi.mul_fiber(&self.sin_phi).mul_base(&self.metric.uy))
            .map(|v| -v);
        (&(&fx + &fy) + rot).mul_base(&self.metric.emu)
    }

    /// Raising operator `eta_+ = (X - i H)/2`; maps vertical degree k to k+1.
    pub fn eta_plus(&self, f: &FieldSm) -> FieldSm {
        let x = self.op_x(f);
        let h = self.op_h(f);
        x.zip_map(&h, |xv, hv| 0.5 * (xv - Complex64::i() * hv))
    }

    /// Lowering operator `eta_- = (X + i H)/2`; maps vertical degree k to k-1.
    pub fn eta_minus(&self, f: &FieldSm) -> FieldSm {
        let x = self.op_x(f);
        let h = self.op_h(f);
        x.zip_map(&h, |xv, hv| 0.5 * (xv + Complex64::i() * hv))
    }

    /// Divergence with respect to the volume form of the vector field
    /// `wx X + wh H + wv V`; since the frame fields preserve the volume form
    /// this is `X wx + H wh + V wv`.
    pub fn divergence_theta(&self, wx: &FieldSm, wh: &FieldSm, wv: &FieldSm) -> FieldSm {
        &(&self.op_x(wx) + &self.op_h(wh)) + &self.op_v(wv)
    }

    /// L2 pairing against the bundle volume form (weight `e^{2u}`).
    pub fn inner(&self, f: &FieldSm, g: &FieldSm) -> Result<Complex64> {
        f.check_same_shape(g)?;
        self.chart.check_same(&f.chart)?;
        let mut acc = Complex64::default();
        for ((i, j, k), a) in f.data.indexed_iter() {
            acc += a * g.data[(i, j, k)].conj() * self.metric.e2u.data[(i, j)].re;
        }
        Ok(acc * self.cell_volume())
    }

    pub fn norm(&self, f: &FieldSm) -> f64 {
        self.inner(f, f)
            .expect("field paired with itself")
            .re
            .max(0.0)
            .sqrt()
    }

    fn cell_volume(&self) -> f64 {
        self.chart.cell_area() * 2.0 * PI / self.nphi as f64
    }

    /// Vertical Fourier decomposition: coefficient fields of `e^{i m phi}`.
    pub fn vertical_fft(&self, f: &FieldSm) -> VerticalSpectrum {
        let mut work = f.clone();
        fft_phi(&mut work);
        let mut modes = BTreeMap::new();
        for idx in 0..self.nphi {
            let m = signed_mode(idx, self.nphi);
            let coeff = Field2 {
                chart: f.chart,
                data: work.data.index_axis(Axis(2), idx).to_owned(),
            };
            modes.insert(m, coeff);
        }
        VerticalSpectrum {
            chart: f.chart,
            nphi: self.nphi,
            modes,
        }
    }

    pub fn vertical_ifft(&self, spectrum: &VerticalSpectrum) -> FieldSm {
        let mut out = FieldSm::zeros(spectrum.chart, spectrum.nphi);
        for (&m, coeff) in &spectrum.modes {
            for ((i, j, k), v) in out.data.indexed_iter_mut() {
                let phase = Complex64::from_polar(1.0, m as f64 * 2.0 * PI * k as f64 / spectrum.nphi as f64);
                *v += coeff.data[(i, j)] * phase;
            }
        }
        out
    }

    /// Unweighted energy of each vertical mode, `sum_{x,y} |c_m|^2`.
    pub fn mode_energies(&self, f: &FieldSm) -> BTreeMap<i64, f64> {
        let mut work = f.clone();
        fft_phi(&mut work);
        let mut out = BTreeMap::new();
        for idx in 0..self.nphi {
            let m = signed_mode(idx, self.nphi);
            let e: f64 = work
                .data
                .index_axis(Axis(2), idx)
                .iter()
                .map(|v| v.norm_sqr())
                .sum();
            out.insert(m, e);
        }
        out
    }

    /// Fraction of vertical energy outside the allowed mode set.
    pub fn mode_leakage(&self, f: &FieldSm, allowed: &[i64]) -> f64 {
        let energies = self.mode_energies(f);
        let total: f64 = energies.values().sum();
        if total == 0.0 {
            return 0.0;
        }
        let outside: f64 = energies
            .iter()
            .filter(|(m, _)| !allowed.contains(m))
            .map(|(_, e)| e)
            .sum();
        (outside / total).sqrt()
    }

    /// Projection onto the listed vertical modes.
    pub fn mode_project(&self, f: &FieldSm, allowed: &[i64]) -> FieldSm {
        let mut work = f.clone();
        fft_phi(&mut work);
        for idx in 0..self.nphi {
            let m = signed_mode(idx, self.nphi);
            if !allowed.contains(&m) {
                work.data.index_axis_mut(Axis(2), idx).fill(Complex64::default());
            }
        }
        ifft_phi(&mut work);
        work
    }

    /// Extracts the coefficient field of a single vertical mode.
    pub fn mode_coefficient(&self, f: &FieldSm, m: i64) -> Field2 {
        let mut work = f.clone();
        fft_phi(&mut work);
        let idx = if m >= 0 {
            m as usize
        } else {
            (m + self.nphi as i64) as usize
        };
        Field2 {
            chart: f.chart,
            data: work.data.index_axis(Axis(2), idx).to_owned(),
        }
    }

    /// Relative residual norms of the frame commutation relations
    /// `[V,X] = H`, `[V,H] = -X`, `[X,H] = K V`, evaluated on a seeded
    /// battery of band-limited fields. Each residual is normalized by an
    /// H^1-style proxy `|f| + |Xf| + |Hf| + |Vf|`.
    pub fn commutator_residuals(&self, seed: u64, draws: usize) -> [f64; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (bx, by, bp) = (
            self.chart.nx / 4,
            self.chart.ny / 4,
            self.nphi / 4,
        );
        let k_lift = self.lift(&self.curvature);
        let mut worst = [0.0f64; 3];
        for _ in 0..draws {
            let f = crate::random::real_field_sm(self.chart, self.nphi, (bx, by, bp), 1.0, &mut rng);
            let xf = self.op_x(&f);
            let hf = self.op_h(&f);
            let vf = self.op_v(&f);
            let proxy = self.norm(&f) + self.norm(&xf) + self.norm(&hf) + self.norm(&vf);
            let vx_minus_h = &(&self.op_v(&xf) - &self.op_x(&vf)) - &hf;
            let vh_plus_x = &(&self.op_v(&hf) - &self.op_h(&vf)) + &xf;
            let xh_minus_kv = &(&self.op_x(&hf) - &self.op_h(&xf)) - &(&k_lift * &vf);
            let res = [
                self.norm(&vx_minus_h) / proxy,
                self.norm(&vh_plus_x) / proxy,
                self.norm(&xh_minus_kv) / proxy,
            ];
            for (w, r) in worst.iter_mut().zip(res) {
                *w = w.max(r);
            }
        }
        worst
    }
}

/// Vertical Fourier coefficients: `f = sum_m coeff_m(x, y) e^{i m phi}`.
/// Each `H_m` summand is the kernel of `m Id + i V`.
#[derive(Debug, Clone)]
pub struct VerticalSpectrum {
    pub chart: TorusChart,
    pub nphi: usize,
    pub modes: BTreeMap<i64, Field2>,
}

impl VerticalSpectrum {
    pub fn coefficient(&self, m: i64) -> Option<&Field2> {
        self.modes.get(&m)
    }

    /// Unweighted total energy `sum_m sum_{x,y} |c_m|^2`.
    pub fn total_energy(&self) -> f64 {
        self.modes
            .values()
            .map(|c| c.data.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum()
    }
}

fn fft_phi(f: &mut FieldSm) {
    let n = f.nphi;
    let fwd = crate::spectral::phi_plan(n, true);
    let mut buf = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len()];
    let scale = 1.0 / n as f64;
    for mut lane in f.data.lanes_mut(Axis(2)) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fwd.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(&buf) {
            *v = *b * scale;
        }
    }
}

fn ifft_phi(f: &mut FieldSm) {
    let n = f.nphi;
    let inv = crate::spectral::phi_plan(n, false);
    let mut buf = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); inv.get_inplace_scratch_len()];
    for mut lane in f.data.lanes_mut(Axis(2)) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        inv.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(&buf) {
            *v = *b;
        }
    }
}
