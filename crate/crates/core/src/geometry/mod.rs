//! Björling solutions, symmetry verification, flux and curve diagnostics.

pub mod bjorling;
pub mod curve;
pub mod isometry;
pub mod quadrature;

pub use bjorling::{bjorling_solve, strip_error, BjorlingSurface, QUADRATURE_TOLERANCE};
pub use curve::{AnalyticPlanarCurve, TrigTerm};
pub use isometry::{
    certify_map, certify_map_seeded, close_group, enumerate_isometries, enumerate_isometries_seeded,
    fit_rigid_motion, generators, hm_surface, sample_parameters, verify_isometry, verify_isometry_seeded,
    IsometryCertificate, ParamMap, RigidMotion, ISOMETRY_SAMPLES, ISOMETRY_TOLERANCE,
};
pub use quadrature::GaussLegendre;

use crate::weierstrass::{phi_forms, Point3, WeierstrassData};

/// Threshold for [`flux_exactness`] to count a residue as zero.
pub const FLUX_TOLERANCE: f64 = 1e-12;

/// `|Res_0 phi_j|` for `j = 1, 2, 3`.
pub fn flux_exactness(data: &WeierstrassData) -> [f64; 3] {
    let forms = phi_forms(data);
    [forms[0].residue().norm(), forms[1].residue().norm(), forms[2].residue().norm()]
}

pub fn is_exact(data: &WeierstrassData) -> bool {
    flux_exactness(data).iter().all(|r| *r < FLUX_TOLERANCE)
}

/// Number of cusps of a closed curve sampled at `points` (one period,
/// without repeating the first point). A cusp is a place where the
/// direction of motion reverses.
pub fn cusp_count(points: &[Point3]) -> usize {
    let n = points.len();
    if n < 8 {
        return 0;
    }
    let seg = |k: isize| {
        let i = k.rem_euclid(n as isize) as usize;
        points[(i + 1) % n] - points[i]
    };
    let marks: Vec<bool> = (0..n as isize)
        .map(|k| seg(k - 1).dot(&seg(k + 1)) < 0.0)
        .collect();
    if marks.iter().all(|&m| m) {
        return 0;
    }
    // Count runs of marks (cyclically), merging runs separated by at most 2 samples.
    let start = marks.iter().position(|&m| !m).expect("some unmarked sample");
    let mut count = 0;
    let mut gap = usize::MAX;
    for j in 1..=n {
        let i = (start + j) % n;
        if marks[i] {
            if gap > 2 {
                count += 1;
            }
            gap = 0;
        } else {
            gap = gap.saturating_add(1);
        }
    }
    if count > 1 {
        // A run that wraps through `start` may have been split; check the seam.
        let first = (1..=n).map(|j| (start + j) % n).find(|&i| marks[i]);
        let last = (0..n).rev().map(|j| (start + j) % n).find(|&i| marks[i]);
        if let (Some(f), Some(l)) = (first, last) {
            let wrap_gap = (f + n - l) % n;
            if wrap_gap <= 3 {
                count -= 1;
            }
        }
    }
    count
}
