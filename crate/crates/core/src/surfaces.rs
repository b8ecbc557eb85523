//! Closed-form parametrizations in polar coordinates `z = r e^{i theta}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::cis;
use crate::error::{Error, Result};
use crate::period::PERIOD_TOLERANCE;
use crate::weierstrass::{check_one_sided, integrate_phi, IntegratedForms, Point3, WeierstrassData};

/// Residues below this count as zero when an exact form is required.
pub const EXACTNESS_TOLERANCE: f64 = 1e-12;

fn check_r(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    Ok(())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exponent `m` of the hypocycloid surfaces: a positive integer or `1/(2k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HmParam {
    Integer(u32),
    InverseEven(u32),
}

impl HmParam {
    pub fn validate(self) -> Result<Self> {
        match self {
            HmParam::Integer(0) => Err(Error::Domain("m must be positive".into())),
            HmParam::InverseEven(0) => Err(Error::Domain("k in m = 1/(2k) must be positive".into())),
            p => Ok(p),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            HmParam::Integer(m) => m as f64,
            HmParam::InverseEven(k) => 1.0 / (2.0 * k as f64),
        }
    }

    /// `(2m + 2)/m` as a reduced fraction.
    pub fn radius_ratio(self) -> (u64, u64) {
        let (num, den) = match self {
            HmParam::Integer(m) => (2 * m as u64 + 2, m as u64),
            // (2/(2k) + 2) / (1/(2k)) = 4k + 2
            HmParam::InverseEven(k) => (4 * k as u64 + 2, 1),
        };
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// Number of cusps of the unit-circle image.
    pub fn cusp_count(self) -> u64 {
        self.radius_ratio().0
    }

    /// Length in `theta` of one traversal of the unit-circle image.
    pub fn curve_period(self) -> f64 {
        let (_, den) = self.radius_ratio();
        TAU * den as f64 / self.value()
    }

    /// Period in `theta` of the surface parametrization.
    pub fn theta_period(self) -> f64 {
        match self {
            HmParam::Integer(_) => TAU,
            HmParam::InverseEven(k) => 2.0 * TAU * k as f64,
        }
    }
}

pub fn eval_h1(r: f64, theta: f64) -> Result<Point3> {
    check_r(r)?;
    check_theta(theta)?;
    let (g1, g3) = (r - 1.0 / r, r.powi(3) - r.powi(-3));
    Ok(Point3::new(
        0.5 * theta.cos() * g1 - (3.0 * theta).cos() / 6.0 * g3,
        -0.5 * theta.sin() * g1 - (3.0 * theta).sin() / 6.0 * g3,
        0.5 * (2.0 * theta).cos() * (r * r + 1.0 / (r * r)),
    ))
}

/// Odd-type formula (`omega = z^{-m-3}(z^{2m+2} - 1) dz`) for any real `m > 0`.
fn odd_formula(m: f64, r: f64, theta: f64) -> Point3 {
    let (mt, m2t, m1t) = (m * theta, (m + 2.0) * theta, (m + 1.0) * theta);
    let a = r.powf(m) - r.powf(-m);
    let b = r.powf(m + 2.0) - r.powf(-m - 2.0);
    let c = r.powf(m + 1.0) + r.powf(-m - 1.0);
    Point3::new(
        mt.cos() / (2.0 * m) * a - m2t.cos() / (2.0 * (m + 2.0)) * b,
        -mt.sin() / (2.0 * m) * a - m2t.sin() / (2.0 * (m + 2.0)) * b,
        m1t.cos() / (m + 1.0) * c,
    )
}

/// Even-type formula (`omega = i z^{-m-3}(z^{2m+2} - 1) dz`) for any real `m > 0`.
fn even_formula(m: f64, r: f64, theta: f64) -> Point3 {
    let (mt, m2t, m1t) = (m * theta, (m + 2.0) * theta, (m + 1.0) * theta);
    let a = r.powf(m) + r.powf(-m);
    let b = r.powf(m + 2.0) + r.powf(-m - 2.0);
    let c = r.powf(-m - 1.0) - r.powf(m + 1.0);
    Point3::new(
        -mt.sin() / (2.0 * m) * a + m2t.sin() / (2.0 * (m + 2.0)) * b,
        -mt.cos() / (2.0 * m) * a - m2t.cos() / (2.0 * (m + 2.0)) * b,
        m1t.sin() / (m + 1.0) * c,
    )
}

/// `H_m` for odd `m`.
pub fn eval_hm_odd(m: u32, r: f64, theta: f64) -> Result<Point3> {
    if m % 2 == 0 {
        return Err(Error::Domain(format!("eval_hm_odd needs odd m, got {m}")));
    }
    check_r(r)?;
    check_theta(theta)?;
    Ok(odd_formula(m as f64, r, theta))
}

/// `H_m` for even `m`, the conjugate `H_m^*` for odd `m`, or the
/// hypocycloid surface for `m = 1/(2k)`.
pub fn eval_hm_even(m: HmParam, r: f64, theta: f64) -> Result<Point3> {
    let m = m.validate()?;
    check_r(r)?;
    check_theta(theta)?;
    Ok(even_formula(m.value(), r, theta))
}

/// Conjugate surface `H_m^*` (the member `phi = pi/2` of the associated family).
pub fn eval_conjugate(m: u32, r: f64, theta: f64) -> Result<Point3> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    check_r(r)?;
    check_theta(theta)?;
    if m % 2 == 1 {
        Ok(even_formula(m as f64, r, theta))
    } else {
        Ok(-odd_formula(m as f64, r, theta))
    }
}

/// `+1` or `-1` such that the closed form of `H_m` equals `sign` times the
/// zero-constant immersion of `symmetric_example(m)`.
pub fn closed_form_sign(m: u32) -> f64 {
    // symmetric_example uses c = i^{m-1}; the closed forms use c = 1 (odd m), c = i (even m).
    let quarter = if m % 2 == 1 { m - 1 } else { m - 2 };
    if (quarter / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn require_exact(forms: &IntegratedForms) -> Result<()> {
    for (j, c) in forms.log_coeffs.iter().enumerate() {
        if c.abs() >= EXACTNESS_TOLERANCE {
            return Err(Error::Domain(format!(
                "associated family needs an exact form; Res phi_{} = {c:e}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Zero-constant immersion of the data with `omega` replaced by `e^{i phi} omega`.
pub fn eval_associated(data: &WeierstrassData, phi: f64, z: Complex64) -> Result<Point3> {
    let forms = integrate_phi(data)?;
    require_exact(&forms)?;
    integrate_phi(&data.rotated(phi))?.position(z)
}

/// Largest relative violation of `f(-1/conj z) = -conj(z^4 f(z))` for the
/// rotated form `e^{i phi} f`, over a fixed set of sample points.
pub fn one_sided_descent_residual(data: &WeierstrassData, phi: f64) -> f64 {
    let f = data.f().scale(cis(phi));
    let mut worst = 0.0f64;
    for &r in &[0.5, 0.8, 1.3, 2.1] {
        for k in 0..24 {
            let z = r * cis(TAU * (k as f64 + 0.37) / 24.0);
            let (Ok(fz), Ok(fa)) = (f.evaluate(z), f.evaluate(-1.0 / z.conj())) else {
                continue;
            };
            let rhs = (z.powi(4) * fz).conj();
            let scale = rhs.norm();
            if scale < 1e-8 {
                continue;
            }
            worst = worst.max((fa + rhs).norm() / scale);
        }
    }
    if worst <= 64.0 * f64::EPSILON {
        0.0
    } else {
        worst
    }
}

/// Limit surface of the `m = 2` family, `f(z) = i (1 + z^{-4})`.
pub fn eval_limit_m2(r: f64, theta: f64) -> Result<Point3> {
    check_r(r)?;
    check_theta(theta)?;
    let (g1, g3) = (r - 1.0 / r, r.powi(3) - r.powi(-3));
    Ok(Point3::new(
        -0.5 * theta.sin() * g1 + (3.0 * theta).sin() / 6.0 * g3,
        -0.5 * theta.cos() * g1 - (3.0 * theta).cos() / 6.0 * g3,
        -theta.cos() * theta.sin() * (r * r + 1.0 / (r * r)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypocycloid {
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Hypocycloid {
    pub fn new(r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return Err(Error::Domain(format!(
                "hypocycloid needs 0 < r < R, got r = {r_inner}, R = {r_outer}"
            )));
        }
        Ok(Self { r_inner, r_outer })
    }

    /// Unit-circle image of the hypocycloid surface with exponent `m`.
    pub fn for_param(m: HmParam) -> Self {
        let m = m.value();
        Self {
            r_inner: 1.0 / (m + 2.0),
            r_outer: (2.0 * m + 2.0) / (m * (m + 2.0)),
        }
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        let (r, big) = (self.r_inner, self.r_outer);
        let k = (big - r) / r;
        [
            -(big - r) * t.sin() + r * (k * t).sin(),
            -(big - r) * t.cos() - r * (k * t).cos(),
        ]
    }

    /// `R/r` as a reduced fraction with denominator at most `max_den`, if
    /// one matches to 1e-12.
    pub fn radius_ratio(&self, max_den: u64) -> Option<(u64, u64)> {
        let x = self.r_outer / self.r_inner;
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut y = x;
        for _ in 0..64 {
            let a = y.floor();
            if a > 1e15 {
                break;
            }
            let a = a as u64;
            let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
            if k2 > max_den {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if (h1 as f64 / k1 as f64 - x).abs() <= 1e-12 * x {
                return Some((h1, k1));
            }
            let frac = y - a as f64;
            if frac <= 0.0 {
                break;
            }
            y = 1.0 / frac;
        }
        None
    }

    /// Number of cusps: the numerator of `R/r` in lowest terms.
    pub fn cusp_count(&self) -> Option<u64> {
        self.radius_ratio(1_000_000).map(|(a, _)| a)
    }

    /// Parameter length of one closed traversal, `2 pi b` for `R/r = a/b`.
    pub fn period(&self) -> Option<f64> {
        self.radius_ratio(1_000_000).map(|(_, b)| TAU * b as f64)
    }
}

pub fn hypocycloid_point(h: &Hypocycloid, t: f64) -> [f64; 2] {
    h.point(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SurfaceKind {
    H1,
    HmOdd(u32),
    HmEven(HmParam),
    Conjugate(u32),
    Associated { data: WeierstrassData, phi: f64 },
    LimitM2,
    Integrated(WeierstrassData),
}

/// A parametrized surface `(r, theta) -> R^3`.
#[derive(Clone, Debug)]
pub struct SurfaceMap {
    kind: SurfaceKind,
    forms: Option<IntegratedForms>,
}

impl SurfaceMap {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let forms = match &kind {
            SurfaceKind::HmOdd(m) if m % 2 == 0 => {
                return Err(Error::Domain(format!("HmOdd needs odd m, got {m}")))
            }
            SurfaceKind::HmOdd(0) | SurfaceKind::Conjugate(0) => {
                return Err(Error::Domain("m must be positive".into()))
            }
            SurfaceKind::HmEven(p) => {
                p.validate()?;
                None
            }
            SurfaceKind::Associated { data, phi } => {
                if !phi.is_finite() {
                    return Err(Error::NonFinite("phi"));
                }
                require_exact(&integrate_phi(data)?)?;
                Some(integrate_phi(&data.rotated(*phi))?)
            }
            SurfaceKind::Integrated(data) => Some(integrate_phi(data)?),
            _ => None,
        };
        Ok(Self { kind, forms })
    }

    pub fn h1() -> Self {
        Self {
            kind: SurfaceKind::H1,
            forms: None,
        }
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn eval(&self, r: f64, theta: f64) -> Result<Point3> {
        match &self.kind {
            SurfaceKind::H1 => eval_h1(r, theta),
            SurfaceKind::HmOdd(m) => eval_hm_odd(*m, r, theta),
            SurfaceKind::HmEven(p) => eval_hm_even(*p, r, theta),
            SurfaceKind::Conjugate(m) => eval_conjugate(*m, r, theta),
            SurfaceKind::LimitM2 => eval_limit_m2(r, theta),
            SurfaceKind::Associated { .. } | SurfaceKind::Integrated(_) => {
                check_r(r)?;
                check_theta(theta)?;
                self.forms
                    .as_ref()
                    .expect("integrated kinds carry their forms")
                    .position(r * cis(theta))
            }
        }
    }

    /// Period of the parametrization in `theta`.
    pub fn theta_period(&self) -> f64 {
        match &self.kind {
            SurfaceKind::HmEven(p) => p.theta_period(),
            _ => TAU,
        }
    }

    /// Whether the surface is invariant under `z -> -1/conj(z)`, so it
    /// descends to the projective plane.
    pub fn is_one_sided(&self) -> bool {
        match &self.kind {
            SurfaceKind::H1 | SurfaceKind::HmOdd(_) | SurfaceKind::LimitM2 => true,
            SurfaceKind::HmEven(HmParam::Integer(m)) => m % 2 == 0,
            SurfaceKind::HmEven(HmParam::InverseEven(_)) | SurfaceKind::Conjugate(_) => false,
            SurfaceKind::Associated { data, phi } => {
                one_sided_descent_residual(data, *phi) < PERIOD_TOLERANCE
            }
            SurfaceKind::Integrated(data) => check_one_sided(data) < PERIOD_TOLERANCE,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SurfaceKind::H1 => "H1".into(),
            SurfaceKind::HmOdd(m) => format!("H{m} (odd)"),
            SurfaceKind::HmEven(HmParam::Integer(m)) => format!("H{m} (even formula)"),
            SurfaceKind::HmEven(HmParam::InverseEven(k)) => format!("hypocycloid surface m = 1/{}", 2 * k),
            SurfaceKind::Conjugate(m) => format!("H{m}*"),
            SurfaceKind::Associated { data, phi } => {
                format!("associated surface phi = {phi}, m = {}", data.complexity())
            }
            SurfaceKind::LimitM2 => "m = 2 limit surface".into(),
            SurfaceKind::Integrated(data) => format!("integrated data, m = {}", data.complexity()),
        }
    }
}

/// Speed `|dX/dtheta|` of the unit-circle curve at `theta` by central differences.
pub fn unit_circle_speed(surface: &SurfaceMap, theta: f64) -> Result<f64> {
    let h = 1e-6;
    let d = surface.eval(1.0, theta + h)? - surface.eval(1.0, theta - h)?;
    Ok(d.norm() / (2.0 * h))
}

/// Samples of the unit-circle image over `[0, period)`.
pub fn unit_circle_samples(surface: &SurfaceMap, period: f64, n: usize) -> Result<Vec<Point3>> {
    (0..n)
        .map(|k| surface.eval(1.0, period * k as f64 / n as f64))
        .collect()
}
