//! The `m = 1` period problem with `a_1 = r_1 > 0`, `a_2 = r_2 e^{i theta_2}`, `c = e^{i beta}`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, SMatrix, Vector4};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{cis, r_gap, BranchConfiguration, I};
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassData;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M1Point {
    pub r1: f64,
    pub r2: f64,
    pub theta2: f64,
    pub beta: f64,
}

impl M1Point {
    pub fn to_data(&self) -> Result<WeierstrassData> {
        WeierstrassData::new(
            cis(self.beta),
            BranchConfiguration::from_polar(&[(self.r1, 0.0), (self.r2, self.theta2)])?,
        )
    }

    /// True when this is a parametrization of Henneberg's surface:
    /// `r_1 = r_2 = 1`, `theta_2 = pi/2 (mod pi)`, `beta = 0 (mod pi)`.
    pub fn is_henneberg(&self, tol: f64) -> bool {
        let near_multiple = |x: f64, unit: f64| {
            let k = (x / unit).round();
            (x - k * unit).abs() < tol
        };
        (self.r1 - 1.0).abs() < tol
            && (self.r2 - 1.0).abs() < tol
            && near_multiple(self.theta2 - PI / 2.0, PI)
            && near_multiple(self.beta, PI)
    }
}

/// The five real residual components: `Re, Im` of the horizontal equation,
/// `Im` of the vertical one, and `Re, Im` of `e^{2 i (beta + theta_2)} + 1`.
pub fn m1_residual_vector(r1: f64, r2: f64, theta2: f64, beta: f64) -> [f64; 5] {
    let (g1, g2) = (r_gap(r1), r_gap(r2));
    let phase = beta + theta2;
    let horizontal = -2.0 * I * (g1 * cis(-theta2) + g2) * cis(phase).im;
    let vertical = -(2.0 * cis(theta2).re - g1 * g2) * cis(phase);
    let onesided = cis(2.0 * phase) + 1.0;
    [
        horizontal.re,
        horizontal.im,
        vertical.im,
        onesided.re,
        onesided.im,
    ]
}

/// Sum of squares of [`m1_residual_vector`].
pub fn m1_residual(r1: f64, r2: f64, theta2: f64, beta: f64) -> f64 {
    m1_residual_vector(r1, r2, theta2, beta)
        .iter()
        .map(|v| v * v)
        .sum()
}

/// Tensor grid: log-spaced radii on `[r_min, r_max]`, uniform angles on `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchGrid {
    pub r_min: f64,
    pub r_max: f64,
    /// Separate `[min, max]` for `r_1`; `None` uses `[r_min, r_max]`.
    #[serde(default)]
    pub r1_range: Option<(f64, f64)>,
    pub n_radial: usize,
    pub n_angular: usize,
    /// Levenberg-Marquardt iterations per grid minimum.
    pub refine_steps: usize,
    /// Refined points above this residual are discarded.
    pub accept: f64,
    /// Refined points closer than this are merged.
    pub merge: f64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            r_min: 0.25,
            r_max: 4.0,
            r1_range: None,
            n_radial: 33,
            n_angular: 48,
            refine_steps: 60,
            accept: 1e-8,
            merge: 1e-4,
        }
    }
}

impl SearchGrid {
    fn validate(&self) -> Result<()> {
        let (lo1, hi1) = self.r1_bounds();
        for (lo, hi) in [(self.r_min, self.r_max), (lo1, hi1)] {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "radial range [{lo}, {hi}] must satisfy 0 < r_min < r_max"
                )));
            }
        }
        if self.n_radial < 3 || self.n_angular < 3 {
            return Err(Error::InvalidConfig("grid needs at least 3 points per axis".into()));
        }
        Ok(())
    }

    pub fn r1_bounds(&self) -> (f64, f64) {
        self.r1_range.unwrap_or((self.r_min, self.r_max))
    }

    fn log_radius_in(&self, (lo, hi): (f64, f64), i: usize) -> f64 {
        let (lo, hi) = (lo.ln(), hi.ln());
        lo + (hi - lo) * i as f64 / (self.n_radial - 1) as f64
    }

    fn log_radius(&self, i: usize) -> f64 {
        self.log_radius_in((self.r_min, self.r_max), i)
    }

    fn log_radius1(&self, i: usize) -> f64 {
        self.log_radius_in(self.r1_bounds(), i)
    }

    fn angle(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n_angular as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M1Minimizer {
    pub point: M1Point,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub grid_points: usize,
    pub grid_minima: usize,
    pub minimizers: Vec<M1Minimizer>,
}

impl SearchReport {
    pub fn all_henneberg(&self, tol: f64) -> bool {
        self.minimizers.iter().all(|m| m.point.is_henneberg(tol))
    }
}

/// Grid search plus local refinement of every grid-local minimum of
/// [`m1_residual`]. Returns the distinct refined zeros inside the box,
/// in a deterministic order.
pub fn brute_search_m1(grid: &SearchGrid) -> Result<SearchReport> {
    grid.validate()?;
    let (nr, na) = (grid.n_radial, grid.n_angular);
    let radii1: Vec<f64> = (0..nr).map(|i| grid.log_radius1(i).exp()).collect();
    let radii: Vec<f64> = (0..nr).map(|i| grid.log_radius(i).exp()).collect();
    let angles: Vec<f64> = (0..na).map(|i| grid.angle(i)).collect();
    let index = |i1: usize, i2: usize, j: usize, k: usize| ((i1 * nr + i2) * na + j) * na + k;

    let values: Vec<f64> = (0..nr * nr * na * na)
        .into_par_iter()
        .map(|flat| {
            let k = flat % na;
            let j = (flat / na) % na;
            let i2 = (flat / (na * na)) % nr;
            let i1 = flat / (na * na * nr);
            m1_residual(radii1[i1], radii[i2], angles[j], angles[k])
        })
        .collect();

    let minima: Vec<[usize; 4]> = (0..values.len())
        .into_par_iter()
        .filter_map(|flat| {
            let k = flat % na;
            let j = (flat / na) % na;
            let i2 = (flat / (na * na)) % nr;
            let i1 = flat / (na * na * nr);
            let v = values[flat];
            for d1 in -1i64..=1 {
                for d2 in -1i64..=1 {
                    for dj in -1i64..=1 {
                        for dk in -1i64..=1 {
                            if d1 == 0 && d2 == 0 && dj == 0 && dk == 0 {
                                continue;
                            }
                            let n1 = i1 as i64 + d1;
                            let n2 = i2 as i64 + d2;
                            if n1 < 0 || n2 < 0 || n1 >= nr as i64 || n2 >= nr as i64 {
                                continue;
                            }
                            let nj = (j as i64 + dj).rem_euclid(na as i64) as usize;
                            let nk = (k as i64 + dk).rem_euclid(na as i64) as usize;
                            if values[index(n1 as usize, n2 as usize, nj, nk)] < v {
                                return None;
                            }
                        }
                    }
                }
            }
            Some([i1, i2, j, k])
        })
        .collect();

    let refined: Vec<M1Minimizer> = minima
        .par_iter()
        .filter_map(|&[i1, i2, j, k]| {
            let start = Vector4::new(grid.log_radius1(i1), grid.log_radius(i2), angles[j], angles[k]);
            refine(start, grid.refine_steps)
        })
        .filter(|m| {
            let inside = |r: f64, (lo, hi): (f64, f64)| r >= lo * (1.0 - 1e-9) && r <= hi * (1.0 + 1e-9);
            m.residual < grid.accept
                && inside(m.point.r1, grid.r1_bounds())
                && inside(m.point.r2, (grid.r_min, grid.r_max))
        })
        .collect();

    let mut distinct: Vec<M1Minimizer> = Vec::new();
    for cand in refined {
        if !distinct
            .iter()
            .any(|d| point_distance(&d.point, &cand.point) < grid.merge)
        {
            distinct.push(cand);
        }
    }
    distinct.sort_by(|a, b| {
        let key = |m: &M1Minimizer| [m.point.r1, m.point.r2, m.point.theta2, m.point.beta];
        key(a)
            .iter()
            .zip(key(b).iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    Ok(SearchReport {
        grid_points: values.len(),
        grid_minima: minima.len(),
        minimizers: distinct,
    })
}

fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn point_distance(a: &M1Point, b: &M1Point) -> f64 {
    let d = [
        a.r1.ln() - b.r1.ln(),
        a.r2.ln() - b.r2.ln(),
        angle_distance(a.theta2, b.theta2),
        angle_distance(a.beta, b.beta),
    ];
    d.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn residual_at(x: &Vector4<f64>) -> SMatrix<f64, 5, 1> {
    SMatrix::<f64, 5, 1>::from(m1_residual_vector(x[0].exp(), x[1].exp(), x[2], x[3]))
}

fn jacobian_at(x: &Vector4<f64>) -> SMatrix<f64, 5, 4> {
    let h = 1e-7;
    let mut jac = SMatrix::<f64, 5, 4>::zeros();
    for col in 0..4 {
        let mut xp = *x;
        let mut xm = *x;
        xp[col] += h;
        xm[col] -= h;
        jac.set_column(col, &((residual_at(&xp) - residual_at(&xm)) / (2.0 * h)));
    }
    jac
}

/// Levenberg-Marquardt in `(ln r_1, ln r_2, theta_2, beta)`.
fn refine(start: Vector4<f64>, steps: usize) -> Option<M1Minimizer> {
    let mut x = start;
    let mut res = residual_at(&x);
    let mut cost = res.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..steps {
        if cost < 1e-28 {
            break;
        }
        let jac = jacobian_at(&x);
        let jtj = jac.transpose() * jac;
        let jtr = jac.transpose() * res;
        let mut improved = false;
        for _ in 0..30 {
            let damped = jtj + Matrix4::from_diagonal(&jtj.diagonal().map(|d| lambda * d.max(1e-12)));
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = x + step;
            let trial_res = residual_at(&trial);
            let trial_cost = trial_res.norm_squared();
            if trial_cost.is_finite() && trial_cost < cost {
                x = trial;
                res = trial_res;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved || x.iter().any(|v| !v.is_finite()) || x[0].abs() > 50.0 || x[1].abs() > 50.0 {
            break;
        }
    }
    if !cost.is_finite() {
        return None;
    }
    Some(M1Minimizer {
        point: M1Point {
            r1: x[0].exp(),
            r2: x[1].exp(),
            theta2: wrap_angle(x[2]),
            beta: wrap_angle(x[3]),
        },
        residual: cost,
    })
}
