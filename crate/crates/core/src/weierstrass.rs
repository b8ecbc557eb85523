//! Weierstrass data with Gauss map `g(z) = z` and `omega = f dz` on the punctured plane.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, cis, BranchConfiguration, LaurentPoly, I};
use crate::error::{Error, Result};
use crate::period::{self, PERIOD_TOLERANCE};

pub type Point3 = Vector3<f64>;

/// Residues whose imaginary part is below this are snapped to real.
pub const LOG_SNAP_TOLERANCE: f64 = 1e-10;

/// `f(z) = c z^{-m-3} prod_j (z - a_j)(z + 1/conj(a_j))` with `|c| = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeierstrassData {
    c: Complex64,
    c_scale: f64,
    config: BranchConfiguration,
    p: LaurentPoly,
    f: LaurentPoly,
}

impl WeierstrassData {
    /// Builds the data, rescaling `c` onto the unit circle. The discarded
    /// modulus (a homothety of the surface) is kept in [`Self::c_scale`].
    pub fn new(c: Complex64, config: BranchConfiguration) -> Result<Self> {
        algebra::check_finite(c, "c")?;
        let scale = c.norm();
        if scale == 0.0 {
            return Err(Error::InvalidConfig("c must be nonzero".into()));
        }
        let c = c / scale;
        let p = algebra::expand_product(&config);
        let m = config.complexity() as i32;
        let f = p.shift(-m - 3).scale(c);
        Ok(Self {
            c,
            c_scale: scale,
            config,
            p,
            f,
        })
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Modulus of the `c` originally supplied.
    pub fn c_scale(&self) -> f64 {
        self.c_scale
    }

    pub fn complexity(&self) -> usize {
        self.config.complexity()
    }

    pub fn config(&self) -> &BranchConfiguration {
        &self.config
    }

    /// The branch-point polynomial `P`.
    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn f(&self) -> &LaurentPoly {
        &self.f
    }

    /// Coefficient `A_h` of `P`.
    pub fn a_coeff(&self, h: i32) -> Complex64 {
        self.p.coeff(h)
    }

    /// Same branch values with `omega` replaced by `e^{i phi} omega`.
    pub fn rotated(&self, phi: f64) -> Self {
        let rot = cis(phi);
        Self {
            c: self.c * rot,
            c_scale: self.c_scale,
            config: self.config.clone(),
            p: self.p.clone(),
            f: self.f.scale(rot),
        }
    }

    /// Default base point `e^{i pi / (2(m+1))}`.
    pub fn default_base(&self) -> Complex64 {
        cis(std::f64::consts::PI / (2.0 * (self.complexity() + 1) as f64))
    }
}

/// `(phi_1, phi_2, phi_3) = ((1 - z^2) f / 2, i (1 + z^2) f / 2, z f)`.
pub fn phi_forms(data: &WeierstrassData) -> [LaurentPoly; 3] {
    let f = data.f();
    let z2f = f.shift(2);
    let half = Complex64::new(0.5, 0.0);
    [
        (f - &z2f).scale(half),
        (f + &z2f).scale(I * 0.5),
        f.shift(1),
    ]
}

/// Conformal factor `lambda` with `ds = lambda |dz|`.
pub fn metric_density(data: &WeierstrassData, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("metric density is undefined at z = 0".into()));
    }
    Ok(0.5 * (1.0 + z.norm_sqr()) * data.f().evaluate(z)?.norm())
}

/// `|conj(c)/c + prod_j a_j / conj(a_j)|`; zero iff the data is compatible
/// with the antipodal involution `z -> -1/conj(z)`.
pub fn check_one_sided(data: &WeierstrassData) -> f64 {
    let c = data.c();
    let prod = data
        .config()
        .points()
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, a| acc * cis(2.0 * a.theta));
    let residual = (c.conj() / c + prod).norm();
    // Rounding bound for a product of m + 2 unit complex numbers.
    let bound = 8.0 * (data.complexity() + 2) as f64 * f64::EPSILON;
    if residual <= bound {
        0.0
    } else {
        residual
    }
}

/// Antiderivatives of the three Weierstrass forms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegratedForms {
    /// Termwise antiderivative of each `phi_j` without its `z^{-1}` term.
    pub poly_parts: [LaurentPoly; 3],
    /// Real residue of each `phi_j`; contributes `log_coeff * ln r`.
    pub log_coeffs: [f64; 3],
}

impl IntegratedForms {
    /// Integrates the forms, requiring only that every residue be real
    /// (i.e. `X` is single-valued).
    pub fn from_data(data: &WeierstrassData) -> Result<Self> {
        let forms = phi_forms(data);
        let mut poly_parts = [LaurentPoly::zero(), LaurentPoly::zero(), LaurentPoly::zero()];
        let mut log_coeffs = [0.0; 3];
        const NAMES: [&str; 3] = ["Im Res phi_1", "Im Res phi_2", "Im Res phi_3"];
        for (j, form) in forms.iter().enumerate() {
            let (poly, res) = form.antiderivative();
            if res.im.abs() >= LOG_SNAP_TOLERANCE {
                return Err(Error::PeriodFailed {
                    what: NAMES[j],
                    residual: res.im,
                    tolerance: LOG_SNAP_TOLERANCE,
                });
            }
            poly_parts[j] = poly;
            log_coeffs[j] = res.re;
        }
        Ok(Self {
            poly_parts,
            log_coeffs,
        })
    }

    /// `X(z)` with the integration constant chosen as zero.
    pub fn position(&self, z: Complex64) -> Result<Point3> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("immersion is undefined at z = 0".into()));
        }
        let ln_r = z.norm().ln();
        let mut x = Point3::zeros();
        for j in 0..3 {
            x[j] = self.poly_parts[j].evaluate(z)?.re + self.log_coeffs[j] * ln_r;
        }
        Ok(x)
    }

    pub fn is_exact(&self) -> bool {
        self.log_coeffs.iter().all(|&c| c == 0.0)
    }
}

/// Integrates the Weierstrass forms after checking the period conditions.
pub fn integrate_phi(data: &WeierstrassData) -> Result<IntegratedForms> {
    let res = period::period_residuals(data);
    if res.horizontal.norm() >= PERIOD_TOLERANCE {
        return Err(Error::PeriodFailed {
            what: "horizontal",
            residual: res.horizontal.norm(),
            tolerance: PERIOD_TOLERANCE,
        });
    }
    if res.vertical.abs() >= PERIOD_TOLERANCE {
        return Err(Error::PeriodFailed {
            what: "vertical",
            residual: res.vertical,
            tolerance: PERIOD_TOLERANCE,
        });
    }
    IntegratedForms::from_data(data)
}

/// `X(z) - X(base)`.
pub fn immersion(data: &WeierstrassData, z: Complex64, base: Complex64) -> Result<Point3> {
    let forms = integrate_phi(data)?;
    Ok(forms.position(z)? - forms.position(base)?)
}

/// Structural stability check: with `g(z) = z` the extended unoriented
/// Gauss map is the identity of the projective plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityReport {
    pub gauss_map_is_identity: bool,
    pub gauss_map_diffeomorphism: bool,
    pub one_sided: bool,
    pub periods_closed: bool,
    /// `X(a_j)` for each branch value, in the zero-constant normalization.
    pub branch_images: Vec<[f64; 3]>,
    pub distinct_branch_images: Vec<[f64; 3]>,
    pub more_than_one_branch_image: bool,
    pub stable: bool,
}

/// Images closer than this are counted as one point.
pub const BRANCH_IMAGE_MERGE: f64 = 1e-9;

pub fn gauss_structural_stability(data: &WeierstrassData) -> StabilityReport {
    let one_sided = check_one_sided(data) < PERIOD_TOLERANCE;
    let forms = integrate_phi(data).ok();
    let periods_closed = forms.is_some();
    let mut branch_images = Vec::new();
    let mut distinct: Vec<Point3> = Vec::new();
    if let Some(forms) = &forms {
        for a in data.config().values() {
            let Ok(x) = forms.position(a) else { continue };
            branch_images.push([x[0], x[1], x[2]]);
            let scale = 1.0 + x.norm();
            if !distinct
                .iter()
                .any(|d| (d - x).norm() <= BRANCH_IMAGE_MERGE * scale)
            {
                distinct.push(x);
            }
        }
    }
    let more_than_one = distinct.len() >= 2;
    StabilityReport {
        gauss_map_is_identity: true,
        gauss_map_diffeomorphism: true,
        one_sided,
        periods_closed,
        branch_images,
        distinct_branch_images: distinct.iter().map(|x| [x[0], x[1], x[2]]).collect(),
        more_than_one_branch_image: more_than_one,
        stable: one_sided && periods_closed && more_than_one,
    }
}

/// Unit normal `(2 Re g, 2 Im g, |g|^2 - 1) / (|g|^2 + 1)` for `g(z) = z`.
pub fn gauss_normal(z: Complex64) -> Point3 {
    let n2 = z.norm_sqr();
    Point3::new(2.0 * z.re, 2.0 * z.im, n2 - 1.0) / (n2 + 1.0)
}
