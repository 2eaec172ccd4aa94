//! Metrics, one-forms and degree-m differentials on the base torus, with the
//! curvature, Hodge and divergence operators they carry.
//!
//! Base metrics are conformal to the flat chart metric,
//! `g = e^{2u}(dx^2 + dy^2)`; the hat metric used by the transport module is
//! an arbitrary SPD symmetric field and enters only through its evaluations
//! on the unit frame.

use crate::error::{Error, Result};
use crate::field::Field2;
use crate::grid::TorusChart;
use num_complex::Complex64;

/// Conformal-to-flat metric `g = e^{2 u}(dx^2 + dy^2)` together with the
/// derived fields every bundle operator needs: `e^{-u}`, `e^{2u}` and the
/// chart gradient of `u`.
#[derive(Debug, Clone)]
pub struct BaseMetric {
    pub chart: TorusChart,
    pub conf: Field2,
    pub(crate) emu: Field2,
    pub(crate) e2u: Field2,
    pub(crate) ux: Field2,
    pub(crate) uy: Field2,
}

impl BaseMetric {
    pub fn new(conf: Field2) -> Result<Self> {
        conf.expect_real(1e-12)?;
        let conf = conf.re_part();
        let emu = conf.map(|u| Complex64::new((-u.re).exp(), 0.0));
        let e2u = conf.map(|u| Complex64::new((2.0 * u.re).exp(), 0.0));
        let ux = conf.dx();
        let uy = conf.dy();
        Ok(Self {
            chart: conf.chart,
            conf,
            emu,
            e2u,
            ux,
            uy,
        })
    }

    pub fn flat(chart: TorusChart) -> Self {
        Self::new(Field2::zeros(chart)).expect("flat metric is always valid")
    }

    pub fn from_conf_fn(chart: TorusChart, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Self::new(Field2::from_real_fn(chart, f))
    }

    /// Area weight `e^{2u}` of the metric area form in the chart.
    pub fn area_weight(&self) -> &Field2 {
        &self.e2u
    }

    /// Gauss curvature `K = -e^{-2u} (u_xx + u_yy)`, computed spectrally.
    pub fn gauss_curvature(&self) -> Field2 {
        (&self.conf.laplacian_flat().map(|v| -v)) * &self.emu.map(|v| v * v)
    }

    /// L2 pairing of scalar fields against the metric area form.
    pub fn inner_scalar(&self, f: &Field2, g: &Field2) -> Result<Complex64> {
        self.chart.check_same(&f.chart)?;
        self.chart.check_same(&g.chart)?;
        let mut acc = Complex64::default();
        for ((i, j), a) in f.data.indexed_iter() {
            acc += a * g.data[(i, j)].conj() * self.e2u.data[(i, j)].re;
        }
        Ok(acc * self.chart.cell_area())
    }

    /// L2 pairing of one-forms; the conformal factors of the inverse metric
    /// and the area form cancel, leaving the flat pairing.
    pub fn inner_one_form(&self, a: &OneForm, b: &OneForm) -> Result<Complex64> {
        self.chart.check_same(&a.chart)?;
        self.chart.check_same(&b.chart)?;
        let mut acc = Complex64::default();
        for ((i, j), v) in a.cx.data.indexed_iter() {
            acc += v * b.cx.data[(i, j)].conj();
        }
        for ((i, j), v) in a.cy.data.indexed_iter() {
            acc += v * b.cy.data[(i, j)].conj();
        }
        Ok(acc * self.chart.cell_area())
    }
}

/// Real one-form `theta = cx dx + cy dy`.
#[derive(Debug, Clone)]
pub struct OneForm {
    pub chart: TorusChart,
    pub cx: Field2,
    pub cy: Field2,
}

impl OneForm {
    pub fn new(cx: Field2, cy: Field2) -> Result<Self> {
        cx.chart.check_same(&cy.chart)?;
        cx.expect_real(1e-12)?;
        cy.expect_real(1e-12)?;
        Ok(Self {
            chart: cx.chart,
            cx: cx.re_part(),
            cy: cy.re_part(),
        })
    }

    pub fn zero(chart: TorusChart) -> Self {
        Self {
            chart,
            cx: Field2::zeros(chart),
            cy: Field2::zeros(chart),
        }
    }

    /// Exact form `d h` of a scalar potential.
    pub fn exact(h: &Field2) -> Result<Self> {
        Self::new(h.dx(), h.dy())
    }

    pub fn from_fns(
        chart: TorusChart,
        cx: impl Fn(f64, f64) -> f64,
        cy: impl Fn(f64, f64) -> f64,
    ) -> Self {
        Self {
            chart,
            cx: Field2::from_real_fn(chart, cx),
            cy: Field2::from_real_fn(chart, cy),
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm {
            chart: self.chart,
            cx: &self.cx + &other.cx,
            cy: &self.cy + &other.cy,
        }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm {
            chart: self.chart,
            cx: &self.cx - &other.cx,
            cy: &self.cy - &other.cy,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.cx.max_abs().max(self.cy.max_abs())
    }
}

/// Degree-m differential `A = f(z) dz^m` in the chart coordinate
/// `z = x + i y`; degrees below 3 are not part of the laboratory.
#[derive(Debug, Clone)]
pub struct DifferentialM {
    pub chart: TorusChart,
    pub degree: usize,
    pub coeff: Field2,
}

impl DifferentialM {
    pub fn new(degree: usize, coeff: Field2) -> Result<Self> {
        if degree < 3 {
            return Err(Error::UnsupportedDegree {
                degree,
                required: 3,
            });
        }
        Ok(Self {
            chart: coeff.chart,
            degree,
            coeff,
        })
    }

    pub fn zero(chart: TorusChart, degree: usize) -> Result<Self> {
        Self::new(degree, Field2::zeros(chart))
    }

    pub fn cubic_constant(chart: TorusChart, value: Complex64) -> Self {
        Self::new(3, Field2::constant(chart, value)).expect("degree 3 is supported")
    }

    /// Pointwise squared norm `|A|_g^2 = |f|^2 e^{-2 m u}` on the base.
    pub fn norm_sq_base(&self, g: &BaseMetric) -> Field2 {
        let m = self.degree as f64;
        let mut out = self.coeff.map(|v| Complex64::new(v.norm_sqr(), 0.0));
        for ((i, j), v) in out.data.indexed_iter_mut() {
            let u = g.conf.data[(i, j)].re;
            *v *= (-2.0 * m * u).exp();
        }
        out
    }
}

/// General SPD metric field, used only through its frame evaluations
/// `p, q, r` on the circle bundle.
#[derive(Debug, Clone)]
pub struct HatMetric {
    pub chart: TorusChart,
    pub g11: Field2,
    pub g12: Field2,
    pub g22: Field2,
}

impl HatMetric {
    /// SPD guard: `g11 > eps` and `det > eps` pointwise, with the location
    /// of the worst violation reported.
    pub fn new(g11: Field2, g12: Field2, g22: Field2) -> Result<Self> {
        g11.chart.check_same(&g12.chart)?;
        g11.chart.check_same(&g22.chart)?;
        for f in [&g11, &g12, &g22] {
            f.expect_real(1e-12)?;
        }
        let eps = 1e-12;
        let (min11, at11) = g11.min_re();
        if min11 <= eps {
            return Err(Error::NotPositive {
                what: "hat metric g11",
                min: min11,
                at: vec![at11.0, at11.1],
            });
        }
        let det = &(&g11 * &g22) - &(&g12 * &g12);
        let (min_det, at_det) = det.min_re();
        if min_det <= eps {
            return Err(Error::NotPositive {
                what: "hat metric determinant",
                min: min_det,
                at: vec![at_det.0, at_det.1],
            });
        }
        Ok(Self {
            chart: g11.chart,
            g11: g11.re_part(),
            g12: g12.re_part(),
            g22: g22.re_part(),
        })
    }

    /// Constant-coefficient metric `a dx^2 + 2 b dx dy + c dy^2`.
    pub fn constant(chart: TorusChart, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(
            Field2::constant(chart, Complex64::new(a, 0.0)),
            Field2::constant(chart, Complex64::new(b, 0.0)),
            Field2::constant(chart, Complex64::new(c, 0.0)),
        )
    }

    /// Conformal rescaling `e^{2w} g` of a base metric.
    pub fn conformal(g: &BaseMetric, w: &Field2) -> Result<Self> {
        g.chart.check_same(&w.chart)?;
        w.expect_real(1e-12)?;
        let factor = w.zip_map(&g.conf, |wv, uv| {
            Complex64::new((2.0 * (wv.re + uv.re)).exp(), 0.0)
        });
        Self::new(factor.clone(), Field2::zeros(g.chart), factor)
    }

    /// Copy of the base metric itself.
    pub fn from_base(g: &BaseMetric) -> Self {
        Self::conformal(g, &Field2::zeros(g.chart)).expect("base metric is SPD")
    }
}

/// Codifferential `delta_g theta = -e^{-2u} (dx cx + dy cy)` of a one-form.
pub fn codifferential(g: &BaseMetric, theta: &OneForm) -> Result<Field2> {
    g.chart.check_same(&theta.chart)?;
    let div = &theta.cx.dx() + &theta.cy.dy();
    Ok((&div * &g.emu.map(|v| v * v)).map(|v| -v))
}

/// Hodge star on one-forms for the orientation `dx ^ dy`:
/// `*(cx dx + cy dy) = -cy dx + cx dy`. Conformally invariant, so the
/// metric enters only through its chart.
pub fn hodge_star(g: &BaseMetric, theta: &OneForm) -> Result<OneForm> {
    g.chart.check_same(&theta.chart)?;
    Ok(OneForm {
        chart: theta.chart,
        cx: theta.cy.map(|v| -v),
        cy: theta.cx.clone(),
    })
}

/// Projects a one-form onto the kernel of `delta_g` by an exact-form shift:
/// returns `(beta + dh, h)` with `delta_g(beta + dh) = 0` and `h` mean-zero.
///
/// In the conformal chart the solve reduces to the flat Poisson problem
/// `laplacian h = -(dx cx + dy cy)`, independent of the conformal factor.
pub fn hodge_project_divfree(g: &BaseMetric, beta: &OneForm) -> Result<(OneForm, Field2)> {
    g.chart.check_same(&beta.chart)?;
    let div = &beta.cx.dx() + &beta.cy.dy();
    let h = div.map(|v| -v).poisson_flat();
    let projected = OneForm {
        chart: beta.chart,
        cx: &beta.cx + &h.dx(),
        cy: &beta.cy + &h.dy(),
    };
    Ok((projected, h))
}

/// Residual of the twisted holomorphicity equation for a degree-m
/// differential: `dbar f - ((m-1)/2) (cx + i cy) f` in the chart, the
/// coefficient form of `dbar A - ((m-1)/2)(theta - i * theta) (x) A`.
/// Conformally invariant; vanishes exactly when the twisted equation holds.
pub fn dbar_twisted_residual(
    g: &BaseMetric,
    a: &DifferentialM,
    theta: &OneForm,
) -> Result<Field2> {
    g.chart.check_same(&a.chart)?;
    g.chart.check_same(&theta.chart)?;
    // dbar = (dx + i dy)/2 on the chart coefficient.
    let dbar_f = a
        .coeff
        .dx()
        .zip_map(&a.coeff.dy(), |fx, fy| 0.5 * (fx + Complex64::i() * fy));
    let w = theta
        .cx
        .zip_map(&theta.cy, |cx, cy| cx + Complex64::i() * cy);
    let half_m1 = 0.5 * (a.degree as f64 - 1.0);
    Ok(&dbar_f - &(&w * &a.coeff).scale_re(half_m1))
}

/// Pointwise residual of the constant-negative-curvature normalization
/// `K_g = -1 + 2 |A|_g^2` for cubic differentials: returns
/// `K_g + 1 - 2 |A|_g^2`.
pub fn wang_residual(g: &BaseMetric, a: &DifferentialM) -> Result<Field2> {
    if a.degree != 3 {
        return Err(Error::UnsupportedDegree {
            degree: a.degree,
            required: 3,
        });
    }
    g.chart.check_same(&a.chart)?;
    let k = g.gauss_curvature();
    let norm_sq = a.norm_sq_base(g);
    Ok(k.zip_map(&norm_sq, |kv, nv| kv + 1.0 - 2.0 * nv))
}
