//! Parameter-domain symmetries `(r, theta) -> (r^{+-1}, +-theta + k pi / N)`
//! and the rigid motions they induce.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surfaces::{HmParam, SurfaceKind, SurfaceMap};
use crate::weierstrass::Point3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamMap {
    pub invert_r: bool,
    pub reflect_theta: bool,
    /// Shift numerator, reduced mod `2 * denom`.
    pub shift: i64,
    pub denom: i64,
}

impl ParamMap {
    pub fn new(invert_r: bool, reflect_theta: bool, shift: i64, denom: i64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        Self {
            invert_r,
            reflect_theta,
            shift: shift.rem_euclid(2 * denom),
            denom,
        }
    }

    pub fn identity(denom: i64) -> Self {
        Self::new(false, false, 0, denom)
    }

    pub fn apply(&self, r: f64, theta: f64) -> (f64, f64) {
        let r = if self.invert_r { 1.0 / r } else { r };
        let s = if self.reflect_theta { -1.0 } else { 1.0 };
        (r, s * theta + PI * self.shift as f64 / self.denom as f64)
    }

    /// `self after other`.
    pub fn compose(&self, other: &ParamMap) -> ParamMap {
        let denom = lcm(self.denom, other.denom);
        let (a, b) = (self.shift * (denom / self.denom), other.shift * (denom / other.denom));
        let s = if self.reflect_theta { -1 } else { 1 };
        ParamMap::new(
            self.invert_r ^ other.invert_r,
            self.reflect_theta ^ other.reflect_theta,
            s * b + a,
            denom,
        )
    }

    pub fn describe(&self) -> String {
        let r = if self.invert_r { "1/r" } else { "r" };
        let t = if self.reflect_theta { "-theta" } else { "theta" };
        format!("({r}, {t} + {} pi/{})", self.shift, self.denom)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `x -> q x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub q: Matrix3<f64>,
    pub t: Point3,
}

impl RigidMotion {
    pub fn new(q: Matrix3<f64>, t: Point3) -> Result<Self> {
        let err = (q.transpose() * q - Matrix3::identity()).abs().max();
        if !(err < 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "matrix is not orthogonal (|Q^T Q - I| = {err:e})"
            )));
        }
        Ok(Self { q, t })
    }

    pub fn identity() -> Self {
        Self {
            q: Matrix3::identity(),
            t: Point3::zeros(),
        }
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Self {
            q: Matrix3::from_diagonal(&Point3::new(a, b, c)),
            t: Point3::zeros(),
        }
    }

    /// Rotation by `angle` about the `x_3`-axis.
    pub fn rotation_z(angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        Self {
            q: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            t: Point3::zeros(),
        }
    }

    pub fn apply(&self, x: &Point3) -> Point3 {
        self.q * x + self.t
    }

    /// `self after other`.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion {
            q: self.q * other.q,
            t: self.q * other.t + self.t,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.q.determinant()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometryCertificate {
    pub map: ParamMap,
    pub motion: RigidMotion,
    /// `max |X(sigma(p)) - (Q X(p) + t)|` over the samples.
    pub residual: f64,
    pub diameter: f64,
    pub passed: bool,
}

/// Relative tolerance: residual must be below this times the sample diameter.
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

/// Deterministic sample points with `r` log-uniform on `[1/2, 2]`.
pub fn sample_parameters(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let lr: f64 = rng.random_range(-std::f64::consts::LN_2..std::f64::consts::LN_2);
            (lr.exp(), rng.random_range(0.0..TAU))
        })
        .collect()
}

fn diameter(points: &[Point3]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Least-squares rigid motion (reflections allowed) with `dst ~ Q src + t`.
pub fn fit_rigid_motion(src: &[Point3], dst: &[Point3]) -> Result<RigidMotion> {
    if src.len() != dst.len() || src.len() < 4 {
        return Err(Error::InvalidConfig("need at least 4 matching point pairs".into()));
    }
    let n = src.len() as f64;
    let cs = src.iter().sum::<Point3>() / n;
    let cd = dst.iter().sum::<Point3>() / n;
    let mut h = Matrix3::zeros();
    for (a, b) in src.iter().zip(dst) {
        h += (a - cs) * (b - cd).transpose();
    }
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let q = v_t.transpose() * u.transpose();
    Ok(RigidMotion { q, t: cd - q * cs })
}

/// Checks `X(sigma(p)) = Q X(p) + t` on `samples` deterministic points.
pub fn verify_isometry(
    surface: &SurfaceMap,
    map: &ParamMap,
    motion: &RigidMotion,
    samples: usize,
) -> Result<IsometryCertificate> {
    verify_isometry_seeded(surface, map, motion, samples, 0)
}

pub fn verify_isometry_seeded(
    surface: &SurfaceMap,
    map: &ParamMap,
    motion: &RigidMotion,
    samples: usize,
    seed: u64,
) -> Result<IsometryCertificate> {
    let params = sample_parameters(samples.max(2), seed);
    let mut images = Vec::with_capacity(params.len());
    let mut residual = 0.0f64;
    for &(r, t) in &params {
        let x = surface.eval(r, t)?;
        let (r2, t2) = map.apply(r, t);
        let y = surface.eval(r2, t2)?;
        residual = residual.max((y - motion.apply(&x)).norm());
        images.push(x);
    }
    let diameter = diameter(&images);
    Ok(IsometryCertificate {
        map: *map,
        motion: *motion,
        residual,
        diameter,
        passed: residual < ISOMETRY_TOLERANCE * diameter,
    })
}

/// Fits the motion on one sample set and certifies it on another.
pub fn certify_map(surface: &SurfaceMap, map: &ParamMap, samples: usize) -> Result<IsometryCertificate> {
    certify_map_seeded(surface, map, samples, 0)
}

/// [`certify_map`] fitting on the stream `seed + 1` and verifying on `seed`.
pub fn certify_map_seeded(
    surface: &SurfaceMap,
    map: &ParamMap,
    samples: usize,
    seed: u64,
) -> Result<IsometryCertificate> {
    let fit_params = sample_parameters(samples.max(8), seed.wrapping_add(1));
    let mut src = Vec::with_capacity(fit_params.len());
    let mut dst = Vec::with_capacity(fit_params.len());
    for &(r, t) in &fit_params {
        let (r2, t2) = map.apply(r, t);
        src.push(surface.eval(r, t)?);
        dst.push(surface.eval(r2, t2)?);
    }
    let motion = fit_rigid_motion(&src, &dst)?;
    verify_isometry_seeded(surface, map, &motion, samples, seed)
}

/// Closure of `generators` under composition, breadth first.
pub fn close_group(generators: &[ParamMap], bound: usize) -> Result<Vec<ParamMap>> {
    let denom = generators.iter().map(|g| g.denom).fold(1, lcm);
    let identity = ParamMap::identity(denom);
    let mut seen: HashSet<ParamMap> = HashSet::from([identity]);
    let mut order = vec![identity];
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let next = h.compose(&g);
            let next = ParamMap::new(next.invert_r, next.reflect_theta, next.shift * (denom / next.denom), denom);
            if seen.insert(next) {
                if seen.len() > bound {
                    return Err(Error::GroupClosure {
                        generators: generators.len(),
                        bound,
                    });
                }
                order.push(next);
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Generators of the symmetry group of `H_m` in the parameter domain.
pub fn generators(m: u32) -> Vec<ParamMap> {
    let n = m as i64 + 1;
    if m % 2 == 1 {
        vec![
            ParamMap::new(false, true, n, n),
            ParamMap::new(false, false, n + 1, n),
        ]
    } else {
        vec![
            ParamMap::new(false, true, n, n),
            ParamMap::new(false, false, 2, n),
            ParamMap::new(false, false, n, n),
        ]
    }
}

pub fn hm_surface(m: u32) -> Result<SurfaceMap> {
    if m % 2 == 1 {
        SurfaceMap::new(SurfaceKind::HmOdd(m))
    } else {
        SurfaceMap::new(SurfaceKind::HmEven(HmParam::Integer(m)))
    }
}

pub const ISOMETRY_SAMPLES: usize = 64;

/// Every element of the generated group of `H_m`, each with a verified motion.
pub fn enumerate_isometries(m: u32) -> Result<Vec<IsometryCertificate>> {
    enumerate_isometries_seeded(m, 0)
}

pub fn enumerate_isometries_seeded(m: u32, seed: u64) -> Result<Vec<IsometryCertificate>> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let surface = hm_surface(m)?;
    let bound = 4 * m as usize + 4;
    let group = close_group(&generators(m), bound)?;
    group
        .iter()
        .map(|g| certify_map_seeded(&surface, g, ISOMETRY_SAMPLES, seed))
        .collect()
}
