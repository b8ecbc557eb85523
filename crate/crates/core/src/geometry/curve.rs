use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surfaces::{HmParam, Hypocycloid};

/// `amplitude * cos(frequency * t + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl TrigTerm {
    pub fn cos(amplitude: f64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    pub fn sin(amplitude: f64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
            phase: -FRAC_PI_2,
        }
    }

    /// `n`-th derivative at a complex argument.
    fn eval(&self, w: Complex64, n: u32) -> Complex64 {
        let arg = self.frequency * w + self.phase + n as f64 * FRAC_PI_2;
        self.amplitude * self.frequency.powi(n as i32) * arg.cos()
    }
}

/// Planar curve given by finite trigonometric sums, extended to complex arguments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPlanarCurve {
    pub x: Vec<TrigTerm>,
    pub y: Vec<TrigTerm>,
    /// Parameter interval of one traversal.
    pub domain: (f64, f64),
}

impl AnalyticPlanarCurve {
    pub fn new(x: Vec<TrigTerm>, y: Vec<TrigTerm>, domain: (f64, f64)) -> Result<Self> {
        let finite = x
            .iter()
            .chain(&y)
            .all(|t| t.amplitude.is_finite() && t.frequency.is_finite() && t.phase.is_finite());
        if !finite || x.is_empty() && y.is_empty() {
            return Err(Error::InvalidConfig("curve needs finite trigonometric terms".into()));
        }
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::InvalidConfig("curve domain must be a bounded interval".into()));
        }
        Ok(Self { x, y, domain })
    }

    /// `u -> h(speed * u)` for a hypocycloid `h`, over one traversal.
    pub fn hypocycloid(h: &Hypocycloid, speed: f64) -> Result<Self> {
        let (r, big) = (h.r_inner, h.r_outer);
        let k = (big - r) / r;
        let period = h
            .period()
            .ok_or_else(|| Error::InvalidConfig("hypocycloid ratio R/r is not rational".into()))?;
        Self::new(
            vec![TrigTerm::sin(-(big - r), speed), TrigTerm::sin(r, k * speed)],
            vec![TrigTerm::cos(-(big - r), speed), TrigTerm::cos(-r, k * speed)],
            (0.0, period / speed),
        )
    }

    /// Unit-circle image of the hypocycloid surface with exponent `m`, in the
    /// surface's angular parameter.
    pub fn for_param(m: HmParam) -> Result<Self> {
        Self::hypocycloid(&Hypocycloid::for_param(m), m.value())
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(
            vec![TrigTerm::cos(radius, 1.0)],
            vec![TrigTerm::sin(radius, 1.0)],
            (0.0, std::f64::consts::TAU),
        )
    }

    pub fn derivative(&self, w: Complex64, n: u32) -> [Complex64; 2] {
        let sum = |terms: &[TrigTerm]| terms.iter().map(|t| t.eval(w, n)).sum();
        [sum(&self.x), sum(&self.y)]
    }

    pub fn point(&self, w: Complex64) -> [Complex64; 2] {
        self.derivative(w, 0)
    }

    /// Real speed `|gamma'(u)|`.
    pub fn speed(&self, u: f64) -> f64 {
        let [dx, dy] = self.derivative(Complex64::new(u, 0.0), 1);
        dx.re.hypot(dy.re)
    }

    /// Complex arc-length density `sqrt(gamma' . gamma')`, principal branch.
    pub fn arc_density(&self, w: Complex64) -> Complex64 {
        let [dx, dy] = self.derivative(w, 1);
        (dx * dx + dy * dy).sqrt()
    }

    /// `gamma'` rotated by `-pi/2` and normalized with [`Self::arc_density`].
    pub fn unit_normal(&self, w: Complex64) -> Result<[Complex64; 2]> {
        let [dx, dy] = self.derivative(w, 1);
        let s = (dx * dx + dy * dy).sqrt();
        if s.norm() == 0.0 {
            return Err(Error::Domain("normal undefined where gamma' . gamma' = 0".into()));
        }
        Ok([dy / s, -dx / s])
    }

    fn max_speed(&self, n: usize) -> f64 {
        let (a, b) = self.domain;
        (0..n)
            .map(|k| self.speed(a + (b - a) * k as f64 / n as f64))
            .fold(0.0, f64::max)
    }

    /// Real parameters in `[a, b)` where the speed vanishes, using the threshold
    /// `1e-8 * max speed` and merging marks closer than `1e-3`.
    pub fn cusp_parameters(&self, samples: usize) -> Vec<f64> {
        let samples = samples.max(64);
        let (a, b) = self.domain;
        let h = (b - a) / samples as f64;
        let vmax = self.max_speed(samples);
        let threshold = 1e-8 * vmax;
        let speed_at = |k: isize| self.speed(a + h * k as f64);
        let mut cusps: Vec<f64> = Vec::new();
        for k in 0..samples as isize {
            let (s0, s1, s2) = (speed_at(k - 1), speed_at(k), speed_at(k + 1));
            if !(s1 <= s0 && s1 <= s2) {
                continue;
            }
            let Some(u) = self.refine_speed_minimum(a + h * (k - 1) as f64, a + h * (k + 1) as f64)
            else {
                continue;
            };
            if self.speed(u) >= threshold {
                continue;
            }
            let u = a + (u - a).rem_euclid(b - a);
            let period = b - a;
            let near = |c: &f64| {
                let d = (c - u).rem_euclid(period);
                d.min(period - d) < 1e-3
            };
            if !cusps.iter().any(near) {
                cusps.push(u);
            }
        }
        cusps.sort_by(f64::total_cmp);
        cusps
    }

    /// Minimizes `|gamma'|^2` on `[lo, hi]`: golden section, then Newton on
    /// `gamma' . gamma'' = 0`.
    fn refine_speed_minimum(&self, lo: f64, hi: f64) -> Option<f64> {
        let sq = |u: f64| {
            let [dx, dy] = self.derivative(Complex64::new(u, 0.0), 1);
            dx.re * dx.re + dy.re * dy.re
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        for _ in 0..80 {
            if sq(c) < sq(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        let mut u = 0.5 * (a + b);
        for _ in 0..20 {
            let w = Complex64::new(u, 0.0);
            let [d1x, d1y] = self.derivative(w, 1);
            let [d2x, d2y] = self.derivative(w, 2);
            let [d3x, d3y] = self.derivative(w, 3);
            let f = d1x.re * d2x.re + d1y.re * d2y.re;
            let fp = d2x.re * d2x.re + d2y.re * d2y.re + d1x.re * d3x.re + d1y.re * d3y.re;
            if fp <= 0.0 {
                break;
            }
            let step = f / fp;
            if !step.is_finite() || step.abs() > hi - lo {
                break;
            }
            u -= step;
            if step.abs() < 1e-16 * (1.0 + u.abs()) {
                break;
            }
        }
        u.is_finite().then_some(u)
    }
}
