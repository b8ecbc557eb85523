//! Björling problem for planar curves with the planar normal.
//!
//! With `gamma = (x, y, 0)` and `eta = (y', -x', 0) / s`, `s = sqrt(gamma' . gamma')`,
//! the cross product `eta x gamma'` is `(0, 0, s)`, so only the third coordinate
//! needs a quadrature: `X = (Re x(w), Re y(w), Im int_{w0}^{w} s dw)`.

use num_complex::Complex64;

use super::curve::AnalyticPlanarCurve;
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::weierstrass::Point3;

pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
const MAX_PANELS: usize = 4096;
const CUSP_SAMPLES: usize = 8192;

#[derive(Clone, Debug)]
pub struct BjorlingSurface {
    curve: AnalyticPlanarCurve,
    w0: Complex64,
    arc: (f64, f64),
    rule: GaussLegendre,
}

/// Sets up the Björling solution on the regular arc of `curve` containing `Re w0`.
pub fn bjorling_solve(
    curve: &AnalyticPlanarCurve,
    w0: Complex64,
    quad_order: usize,
) -> Result<BjorlingSurface> {
    if !(w0.re.is_finite() && w0.im.is_finite()) {
        return Err(Error::NonFinite("w0"));
    }
    if w0.im != 0.0 {
        return Err(Error::Domain("the base point must lie on the curve (Im w0 = 0)".into()));
    }
    let rule = GaussLegendre::new(quad_order)?;
    let (a, b) = curve.domain;
    let period = b - a;
    let cusps = curve.cusp_parameters(CUSP_SAMPLES);
    let arc = if cusps.is_empty() {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        // Unroll the cusp parameters around w0.
        let u0 = w0.re;
        let shift = ((u0 - a) / period).floor() * period;
        let mut lifted: Vec<f64> = Vec::with_capacity(cusps.len() + 2);
        lifted.push(cusps[cusps.len() - 1] + shift - period);
        lifted.extend(cusps.iter().map(|c| c + shift));
        lifted.push(cusps[0] + shift + period);
        let mut arc = None;
        for pair in lifted.windows(2) {
            if pair[0] < u0 && u0 < pair[1] {
                arc = Some((pair[0], pair[1]));
            }
        }
        arc.ok_or_else(|| Error::Domain(format!("base point u = {u0} is a cusp")))?
    };
    if curve.speed(w0.re) <= 1e-8 * curve.speed(0.5 * (a + b)).max(1e-300) {
        return Err(Error::Domain("curve is singular at the base point".into()));
    }
    Ok(BjorlingSurface {
        curve: curve.clone(),
        w0,
        arc,
        rule,
    })
}

impl BjorlingSurface {
    /// Open parameter interval between the cusps adjacent to `w0`.
    pub fn arc(&self) -> (f64, f64) {
        self.arc
    }

    pub fn base(&self) -> Complex64 {
        self.w0
    }

    pub fn curve(&self) -> &AnalyticPlanarCurve {
        &self.curve
    }

    /// `int_{w0}^{w} sqrt(gamma' . gamma') dw` along the straight segment.
    pub fn arc_integral(&self, w: Complex64, panels: usize) -> Result<Complex64> {
        let dw = w - self.w0;
        let v = self
            .rule
            .integrate_unit(panels, |t| Ok(self.curve.arc_density(self.w0 + t * dw)))?;
        Ok(v * dw)
    }

    pub fn eval(&self, w: Complex64) -> Result<Point3> {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NonFinite("w"));
        }
        if !(self.arc.0 < w.re && w.re < self.arc.1) {
            return Err(Error::Domain(format!(
                "u = {} is outside the regular arc ({}, {})",
                w.re, self.arc.0, self.arc.1
            )));
        }
        let dw = w - self.w0;
        let integral = self
            .rule
            .integrate_adaptive(QUADRATURE_TOLERANCE, MAX_PANELS, |t| {
                Ok(self.curve.arc_density(self.w0 + t * dw))
            })?
            * dw;
        let [x, y] = self.curve.point(w);
        Ok(Point3::new(x.re, y.re, integral.im))
    }

    pub fn eval_uv(&self, u: f64, v: f64) -> Result<Point3> {
        self.eval(Complex64::new(u, v))
    }
}

/// Largest distance between the Björling solution and a closed-form surface
/// on `[arc interior] x [-strip, strip]`. The closed form is sampled at
/// `(e^{-sigma v}, u)` where `sigma = +-1` matches its normal with `eta`.
pub fn strip_error<F>(
    surface: &BjorlingSurface,
    closed: F,
    strip: f64,
    margin: f64,
    n_u: usize,
    n_v: usize,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<Point3>,
{
    let (a, b) = surface.arc();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("strip comparison needs a bounded arc".into()));
    }
    let len = b - a;
    let (lo, hi) = (a + margin * len, b - margin * len);
    let mid = 0.5 * (a + b);
    let h = 1e-6;
    let dr = (closed(1.0 + h, mid)? - closed(1.0 - h, mid)?) / (2.0 * h);
    let sigma = if -dr[2] * surface.curve().speed(mid) >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let mut worst = 0.0f64;
    for i in 0..n_u {
        let u = lo + (hi - lo) * i as f64 / (n_u - 1).max(1) as f64;
        for j in 0..n_v {
            let v = -strip + 2.0 * strip * j as f64 / (n_v - 1).max(1) as f64;
            let x = surface.eval_uv(u, v)?;
            let y = closed((-sigma * v).exp(), u)?;
            worst = worst.max((x - y).norm());
        }
    }
    Ok(worst)
}
