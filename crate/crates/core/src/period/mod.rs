//! Period conditions for the Weierstrass data and their solution spaces.

mod continuation;
mod m1;
mod m2;

pub use continuation::{continue_from, continue_with, newton_correct, ContinuationSettings, ContinuationResult};
pub use m1::{
    brute_search_m1, m1_residual, m1_residual_vector, M1Minimizer, M1Point, SearchGrid, SearchReport,
};
pub use m2::{
    family_f, family_theta2, family_theta2_zero, f_m2, f_m2_alt, g_m2, jacobian_p, jacobian_p_fd,
    FamilyPoint, FamilySign, ModuliPoint,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::BranchConfiguration;
use crate::error::Result;
use crate::weierstrass::{check_one_sided, WeierstrassData};

/// Absolute tolerance used for every period and one-sidedness residual.
pub const PERIOD_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodResiduals {
    /// `conj(c A_m) + c A_{m+2}`.
    pub horizontal: Complex64,
    /// `Im(c A_{m+1})`.
    pub vertical: f64,
    /// `|conj(c)/c + prod e^{2 i theta_j}|`.
    pub onesided: f64,
}

impl PeriodResiduals {
    pub fn periods_closed(&self, tol: f64) -> bool {
        self.horizontal.norm() < tol && self.vertical.abs() < tol
    }

    pub fn is_solution(&self, tol: f64) -> bool {
        self.periods_closed(tol) && self.onesided < tol
    }

    pub fn max_abs(&self) -> f64 {
        self.horizontal.norm().max(self.vertical.abs()).max(self.onesided)
    }
}

pub fn period_residuals(data: &WeierstrassData) -> PeriodResiduals {
    let m = data.complexity() as i32;
    let c = data.c();
    let am = c * data.a_coeff(m);
    PeriodResiduals {
        horizontal: am.conj() + c * data.a_coeff(m + 2),
        vertical: (c * data.a_coeff(m + 1)).im,
        onesided: check_one_sided(data),
    }
}

/// `c = i^{m-1}` with the `(2m+2)`-th roots of unity: `H_1` for `m = 1`,
/// `H_2` for `m = 2`, and their higher analogues.
pub fn symmetric_example(m: usize) -> Result<WeierstrassData> {
    let c = match (m + 3) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    WeierstrassData::new(c, BranchConfiguration::roots_of_unity(m)?)
}
