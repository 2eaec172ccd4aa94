//! Thermostat flows `F = X + lambda V` built from a triple
//! `(g, A, theta)`: the bundle function of the degree-m differential, the
//! drift `lambda = a - V theta`, the projectivity criterion and the
//! hypothesis fields of the vanishing argument.

use crate::bundle::BundleGrid;
use crate::error::{Error, Result};
use crate::field::{Field2, FieldSm};
use crate::surface::{self, DifferentialM, OneForm};
use num_complex::Complex64;

/// Bundle function of a degree-m differential `A = f dz^m`:
/// `a = Im(f e^{-m u} e^{i m phi})`, the real representative with vertical
/// support on modes +-m satisfying `V V a = -m^2 a`.
///
/// The degree-m coefficient `a_m = Va/m + i a` recovers the full lift
/// `f e^{-m u} e^{i m phi}`.
pub fn lift_differential(grid: &BundleGrid, a: &DifferentialM) -> Result<FieldSm> {
    grid.chart.check_same(&a.chart)?;
    let m = a.degree as f64;
    let weighted = a.coeff.zip_map(&grid.metric.conf, |f, u| f * (-m * u.re).exp());
    let mut out = grid.zeros();
    for ((i, j, k), v) in out.data.indexed_iter_mut() {
        let phase = Complex64::from_polar(1.0, m * 2.0 * std::f64::consts::PI * k as f64 / grid.nphi as f64);
        *v = Complex64::new((weighted.data[(i, j)] * phase).im, 0.0);
    }
    Ok(out)
}

/// Degree +m coefficient representative `a_m = V(a)/m + i a` of the lift.
pub fn degree_rep(grid: &BundleGrid, a: &FieldSm, degree: usize) -> FieldSm {
    let va = grid.op_v(a);
    va.zip_map(a, |vav, av| vav / degree as f64 + Complex64::i() * av)
}

/// Immutable thermostat data derived from `(g, A, theta)`. The grid owns the
/// metric; `a`, the lifted one-form and `lambda = a - V theta` are computed
/// once at construction.
#[derive(Debug, Clone)]
pub struct ThermostatTriple {
    grid: BundleGrid,
    differential: DifferentialM,
    theta: OneForm,
    a: FieldSm,
    theta_sm: FieldSm,
    lambda: FieldSm,
}

impl ThermostatTriple {
    pub fn new(grid: BundleGrid, differential: DifferentialM, theta: OneForm) -> Result<Self> {
        grid.chart.check_same(&differential.chart)?;
        grid.chart.check_same(&theta.chart)?;
        let a = lift_differential(&grid, &differential)?;
        let theta_sm = grid.lift_one_form(&theta);
        let lambda = &a - &grid.op_v(&theta_sm);
        Ok(Self {
            grid,
            differential,
            theta,
            a,
            theta_sm,
            lambda,
        })
    }

    /// Geodesic thermostat of the bare metric (`A = 0`, `theta = 0`).
    pub fn geodesic(grid: BundleGrid) -> Result<Self> {
        let chart = grid.chart;
        let a = DifferentialM::zero(chart, 3)?;
        Self::new(grid, a, OneForm::zero(chart))
    }

    pub fn grid(&self) -> &BundleGrid {
        &self.grid
    }

    pub fn differential(&self) -> &DifferentialM {
        &self.differential
    }

    pub fn theta(&self) -> &OneForm {
        &self.theta
    }

    pub fn degree(&self) -> usize {
        self.differential.degree
    }

    /// Lift `a` of the differential.
    pub fn a(&self) -> &FieldSm {
        &self.a
    }

    /// One-form lifted to the bundle.
    pub fn theta_sm(&self) -> &FieldSm {
        &self.theta_sm
    }

    /// Thermostat drift `lambda = a - V theta`.
    pub fn lambda(&self) -> &FieldSm {
        &self.lambda
    }

    /// Generator `F f = X f + lambda V f`.
    pub fn apply_f(&self, f: &FieldSm) -> FieldSm {
        &self.grid.op_x(f) + &(&self.lambda * &self.grid.op_v(f))
    }

    /// Squared norm field `|A|_g^2` on the bundle, computed from the lift as
    /// `(Va/m)^2 + a^2`; a fiber-independent field.
    pub fn differential_norm_sq_sm(&self) -> FieldSm {
        let m = self.degree() as f64;
        let va = self.grid.op_v(&self.a);
        va.zip_map(&self.a, |vav, av| {
            let s = vav.re / m;
            Complex64::new(s * s + av.re * av.re, 0.0)
        })
    }

    /// Pointwise hypothesis field `K_g - delta_g theta + (2 - m) |A|_g^2`
    /// on the base, together with the twisted dbar residual; the vanishing
    /// argument needs the first nonpositive and the second zero.
    pub fn vanishing_hypothesis(&self) -> Result<(Field2, Field2)> {
        let g = &self.grid.metric;
        let k = self.grid.curvature().clone();
        let delta_theta = surface::codifferential(g, &self.theta)?;
        let norm_sq = self.differential.norm_sq_base(g);
        let coeff = 2.0 - self.degree() as f64;
        let field = k.zip_map(&delta_theta, |kv, dv| kv - dv).zip_map(&norm_sq, |v, nv| v + coeff * nv);
        let dbar = surface::dbar_twisted_residual(g, &self.differential, &self.theta)?;
        Ok((field, dbar))
    }
}

/// Mode multiplier of the projectivity operator
/// `(3/2) Id + (5/3) V V + (1/6) V V V V` on vertical degree m:
/// `(m - 3)(m - 1)(m + 1)(m + 3) / 6`.
pub fn projectivity_multiplier(m: i64) -> f64 {
    let m = m as f64;
    (m - 3.0) * (m - 1.0) * (m + 1.0) * (m + 3.0) / 6.0
}

/// Per-mode row of a projectivity report.
#[derive(Debug, Clone)]
pub struct ModeRow {
    pub mode: i64,
    pub multiplier: f64,
    pub energy: f64,
}

/// Defect of the fourth-order projectivity criterion applied to a drift
/// `lambda`; zero exactly when the vertical support is inside `{+-1, +-3}`.
#[derive(Debug, Clone)]
pub struct ProjectivityReport {
    pub defect: f64,
    pub relative_defect: f64,
    pub modes: Vec<ModeRow>,
}

pub fn projectivity_defect(grid: &BundleGrid, lambda: &FieldSm) -> Result<ProjectivityReport> {
    lambda.expect_real(1e-10)?;
    let vv = grid.op_v(&grid.op_v(lambda));
    let vvvv = grid.op_v(&grid.op_v(&vv));
    let op = lambda
        .scale_re(1.5)
        .zip_map(&vv, |a, b| a + b * (5.0 / 3.0))
        .zip_map(&vvvv, |a, b| a + b / 6.0);
    let defect = grid.norm(&op);
    let scale = grid.norm(lambda);
    let energies = grid.mode_energies(lambda);
    let modes = energies
        .into_iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(mode, energy)| ModeRow {
            mode,
            multiplier: projectivity_multiplier(mode),
            energy,
        })
        .collect();
    Ok(ProjectivityReport {
        defect,
        relative_defect: if scale > 0.0 { defect / scale } else { 0.0 },
        modes,
    })
}
