//! The `m = 2` moduli: `a_1 = r_1`, `a_2 = r_2 e^{i theta_2}`, `a_3 = r_3 e^{i theta_3}`, `c = e^{i beta}`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{cis, r_from_gap, r_gap, r_gap_derivative, BranchConfiguration, I};
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassData;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub beta: f64,
}

impl ModuliPoint {
    pub fn new(r1: f64, r2: f64, r3: f64, theta2: f64, theta3: f64, beta: f64) -> Result<Self> {
        let p = Self {
            r1,
            r2,
            r3,
            theta2,
            theta3,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.r1, self.r2, self.r3, self.theta2, self.theta3, self.beta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("moduli point"));
        }
        if self.r1 <= 0.0 || self.r2 <= 0.0 || self.r3 <= 0.0 {
            return Err(Error::Domain("moduli radii must be positive".into()));
        }
        Ok(())
    }

    /// `H_2` in the representation `(1, 1, 1, pi/3, 2 pi/3)`, `c = i`.
    pub fn h2() -> Self {
        Self {
            r1: 1.0,
            r2: 1.0,
            r3: 1.0,
            theta2: FRAC_PI_3,
            theta3: 2.0 * FRAC_PI_3,
            beta: FRAC_PI_2,
        }
    }

    pub fn gaps(&self) -> [f64; 3] {
        [r_gap(self.r1), r_gap(self.r2), r_gap(self.r3)]
    }

    pub fn to_config(&self) -> Result<BranchConfiguration> {
        BranchConfiguration::from_polar(&[
            (self.r1, 0.0),
            (self.r2, self.theta2),
            (self.r3, self.theta3),
        ])
    }

    pub fn to_data(&self) -> Result<WeierstrassData> {
        self.validate()?;
        WeierstrassData::new(cis(self.beta), self.to_config()?)
    }

    /// Replaces `a_3` by its antipode `-1/conj(a_3)`; `P` is unchanged.
    pub fn with_a3_antipode(&self) -> Self {
        Self {
            r3: 1.0 / self.r3,
            theta3: self.theta3 + PI,
            ..*self
        }
    }

    /// Vertical/one-sided compatible `beta`: the representative of
    /// `pi/2 - (theta_2 + theta_3) (mod pi)` closest to `reference`.
    pub fn beta_from_angles(theta2: f64, theta3: f64, reference: f64) -> f64 {
        let base = FRAC_PI_2 - (theta2 + theta3);
        base + ((reference - base) / PI).round() * PI
    }
}

/// Horizontal equation after eliminating `beta`, in the factored form.
pub fn f_m2(p: &ModuliPoint) -> Complex64 {
    let [g1, g2, g3] = p.gaps();
    let (e2, e3) = (cis(p.theta2), cis(p.theta3));
    1.0 + e2 * e2 + e3 * e3 - g1 * (g2 * e2 + g3 * e3) - g2 * g3 * e2 * e3
}

/// Same quantity written as a polynomial in `e^{i theta_3}`.
pub fn f_m2_alt(p: &ModuliPoint) -> Complex64 {
    let [g1, g2, g3] = p.gaps();
    let (e2, e3) = (cis(p.theta2), cis(p.theta3));
    e3 * e3 + (2.0 * p.theta2.cos() - g1 * g2) * e2 - g3 * (g1 + g2 * e2) * e3
}

/// Vertical equation after eliminating `beta`.
pub fn g_m2(p: &ModuliPoint) -> f64 {
    let [g1, g2, g3] = p.gaps();
    g2 * p.theta3.cos() + g3 * p.theta2.cos() + g1 * (p.theta2 - p.theta3).cos() - 0.5 * g1 * g2 * g3
}

/// Jacobian of `(Re F, Im F, G)` with respect to `(r_3, theta_2, theta_3)`.
pub fn jacobian_p(p: &ModuliPoint) -> Matrix3<f64> {
    let [g1, g2, g3] = p.gaps();
    let dg3 = r_gap_derivative(p.r3);
    let (e2, e3) = (cis(p.theta2), cis(p.theta3));
    let e23 = e2 * e3;
    let df_dr3 = dg3 * (-g1 * e3 - g2 * e23);
    let df_dt2 = I * (2.0 * e2 * e2 - g1 * g2 * e2 - g2 * g3 * e23);
    let df_dt3 = I * (2.0 * e3 * e3 - g1 * g3 * e3 - g2 * g3 * e23);
    let dg_dr3 = dg3 * (p.theta2.cos() - 0.5 * g1 * g2);
    let dg_dt2 = -g3 * p.theta2.sin() - g1 * (p.theta2 - p.theta3).sin();
    let dg_dt3 = -g2 * p.theta3.sin() + g1 * (p.theta2 - p.theta3).sin();
    Matrix3::new(
        df_dr3.re, df_dt2.re, df_dt3.re, //
        df_dr3.im, df_dt2.im, df_dt3.im, //
        dg_dr3, dg_dt2, dg_dt3,
    )
}

/// Central-difference version of [`jacobian_p`].
pub fn jacobian_p_fd(p: &ModuliPoint, h: f64) -> Matrix3<f64> {
    let eval = |q: &ModuliPoint| {
        let f = f_m2(q);
        [f.re, f.im, g_m2(q)]
    };
    let mut jac = Matrix3::zeros();
    for col in 0..3 {
        let mut plus = *p;
        let mut minus = *p;
        match col {
            0 => {
                plus.r3 += h;
                minus.r3 -= h;
            }
            1 => {
                plus.theta2 += h;
                minus.theta2 -= h;
            }
            _ => {
                plus.theta3 += h;
                minus.theta3 -= h;
            }
        }
        let (fp, fm) = (eval(&plus), eval(&minus));
        for row in 0..3 {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    jac
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySign {
    Plus,
    Minus,
}

/// Symmetric solution with `r_3 = r_2`, `theta_3 = -theta_2`, `c = i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub theta2: f64,
    pub sign: FamilySign,
    /// `R(r_1)`.
    pub gap1: f64,
    /// `R(r_2) = R(r_3)`.
    pub gap2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl FamilyPoint {
    pub fn moduli(&self) -> ModuliPoint {
        ModuliPoint {
            r1: self.r1,
            r2: self.r2,
            r3: self.r2,
            theta2: self.theta2,
            theta3: -self.theta2,
            beta: FRAC_PI_2,
        }
    }

    pub fn to_data(&self) -> Result<WeierstrassData> {
        self.moduli().to_data()
    }
}

/// `sqrt(1 - 8 cos 2t - 8 cos 4t)`.
pub fn family_f(theta: f64) -> Result<f64> {
    let radicand = 1.0 - 8.0 * (2.0 * theta).cos() - 8.0 * (4.0 * theta).cos();
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "1 - 8 cos 2t - 8 cos 4t < 0 at t = {theta}"
        )));
    }
    Ok(radicand.sqrt())
}

/// The symmetric family on `(pi/4, pi/3] U [2pi/3, 3pi/4)`.
pub fn family_theta2(theta2: f64, sign: FamilySign) -> Result<FamilyPoint> {
    if !theta2.is_finite() {
        return Err(Error::NonFinite("theta2"));
    }
    // The closed ends pi/3 and 2pi/3 are accepted up to a few ulps, so
    // `PI - FRAC_PI_3` counts as 2pi/3.
    let slack = 8.0 * f64::EPSILON;
    let in_domain = (theta2 > FRAC_PI_4 && theta2 <= FRAC_PI_3 + slack)
        || (theta2 >= 2.0 * FRAC_PI_3 - slack && theta2 < 3.0 * FRAC_PI_4);
    if !in_domain {
        return Err(Error::Domain(format!(
            "theta2 = {theta2} outside (pi/4, pi/3] U [2pi/3, 3pi/4)"
        )));
    }
    let f = family_f(theta2)?;
    // f - 3 vanishes at the H_2 endpoints; absorb rounding there.
    let excess = if f - 3.0 > -1e-12 { (f - 3.0).max(0.0) } else {
        return Err(Error::Domain(format!("f(theta2) < 3 at theta2 = {theta2}")));
    };
    let root = excess.sqrt();
    let (c1, c2) = (theta2.cos(), (2.0 * theta2).cos());
    let mut gap1 = root / (8.0 * std::f64::consts::SQRT_2) / (c1 * c2) * (f + 3.0 + 4.0 * c2);
    let mut gap2 = -root / std::f64::consts::SQRT_2;
    if sign == FamilySign::Minus {
        gap1 = -gap1;
        gap2 = -gap2;
    }
    Ok(FamilyPoint {
        theta2,
        sign,
        gap1,
        gap2,
        r1: r_from_gap(gap1),
        r2: r_from_gap(gap2),
    })
}

/// `theta_{2,0} = (1/2) arccot(9 / sqrt(32 sqrt(10) + 95))`.
pub fn family_theta2_zero() -> f64 {
    let x = 9.0 / (32.0 * 10f64.sqrt() + 95.0).sqrt();
    0.5 * (1.0 / x).atan()
}
