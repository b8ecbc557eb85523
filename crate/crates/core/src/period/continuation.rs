//! Implicit-function continuation of `(F, G) = 0` in the free parameters `(r_1, r_2)`.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::m2::{f_m2, g_m2, jacobian_p, ModuliPoint};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContinuationSettings {
    pub max_newton: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
    /// Largest change of `r_1` or `r_2` per path step.
    pub max_step: f64,
    pub min_abs_det: f64,
}

impl Default for ContinuationSettings {
    fn default() -> Self {
        Self {
            max_newton: 50,
            tolerance: 1e-12,
            max_halvings: 20,
            max_step: 0.02,
            min_abs_det: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContinuationResult {
    pub point: ModuliPoint,
    pub residual: f64,
    pub path_steps: usize,
    pub newton_iterations: usize,
    pub min_abs_det: f64,
}

fn residual(p: &ModuliPoint) -> Vector3<f64> {
    let f = f_m2(p);
    Vector3::new(f.re, f.im, g_m2(p))
}

fn apply(p: &ModuliPoint, step: &Vector3<f64>, scale: f64) -> ModuliPoint {
    ModuliPoint {
        r3: p.r3 + scale * step[0],
        theta2: p.theta2 + scale * step[1],
        theta3: p.theta3 + scale * step[2],
        ..*p
    }
}

/// Damped Newton on `(r_3, theta_2, theta_3)` with `(r_1, r_2)` fixed.
/// Returns the corrected point, its residual norm and the iteration count.
pub fn newton_correct(
    start: &ModuliPoint,
    settings: &ContinuationSettings,
) -> Result<(ModuliPoint, f64, usize, f64)> {
    let mut p = *start;
    let mut res = residual(&p);
    let mut norm = res.norm();
    let mut min_det = f64::INFINITY;
    let mut iterations = 0;
    while norm >= settings.tolerance {
        if iterations >= settings.max_newton {
            return Err(Error::Convergence {
                iterations,
                residual: norm,
            });
        }
        iterations += 1;
        let jac = jacobian_p(&p);
        let det = jac.determinant();
        min_det = min_det.min(det.abs());
        if !(det.abs() > settings.min_abs_det) {
            return Err(Error::SingularJacobian(det.abs()));
        }
        let step = jac
            .lu()
            .solve(&(-res))
            .ok_or(Error::SingularJacobian(det.abs()))?;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=settings.max_halvings {
            let trial = apply(&p, &step, scale);
            if trial.r3 > 0.0 {
                let trial_res = residual(&trial);
                if trial_res.norm() < norm {
                    accepted = Some((trial, trial_res));
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some((next, next_res)) = accepted else {
            return Err(Error::Convergence {
                iterations,
                residual: norm,
            });
        };
        p = next;
        res = next_res;
        norm = res.norm();
    }
    Ok((p, norm, iterations, min_det))
}

/// Continues a solution of `(F, G) = 0` from `start` to the given `(r_1, r_2)`.
pub fn continue_with(
    start: &ModuliPoint,
    r1: f64,
    r2: f64,
    settings: &ContinuationSettings,
) -> Result<ContinuationResult> {
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::Domain("target radii must be positive and finite".into()));
    }
    ModuliPoint::new(start.r1, start.r2, start.r3, start.theta2, start.theta3, start.beta)?;
    let det0 = jacobian_p(start).determinant().abs();
    if !(det0 > settings.min_abs_det) {
        return Err(Error::SingularJacobian(det0));
    }
    let start_res = residual(start).norm();
    if start_res > 1e-8 {
        return Err(Error::Domain(format!(
            "start point is not a solution (residual {start_res:e})"
        )));
    }
    let span = (r1 - start.r1).abs().max((r2 - start.r2).abs());
    let steps = ((span / settings.max_step).ceil() as usize).max(1);
    let mut p = *start;
    let mut total_iterations = 0;
    let mut min_det = det0;
    let mut norm = start_res;
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let guess = ModuliPoint {
            r1: start.r1 + t * (r1 - start.r1),
            r2: start.r2 + t * (r2 - start.r2),
            ..p
        };
        let (next, n, it, det) = newton_correct(&guess, settings)?;
        total_iterations += it;
        min_det = min_det.min(det);
        norm = n;
        p = ModuliPoint {
            beta: ModuliPoint::beta_from_angles(next.theta2, next.theta3, p.beta),
            ..next
        };
    }
    Ok(ContinuationResult {
        point: p,
        residual: norm,
        path_steps: steps,
        newton_iterations: total_iterations,
        min_abs_det: min_det,
    })
}

/// [`continue_with`] using default settings, returning only the point.
pub fn continue_from(start: &ModuliPoint, r1: f64, r2: f64) -> Result<ModuliPoint> {
    continue_with(start, r1, r2, &ContinuationSettings::default()).map(|r| r.point)
}
