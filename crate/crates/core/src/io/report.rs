use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{enumerate_isometries_seeded, flux_exactness, IsometryCertificate, FLUX_TOLERANCE, ISOMETRY_TOLERANCE};
use crate::period::{f_m2, g_m2, period_residuals, ModuliPoint, PERIOD_TOLERANCE};
use crate::weierstrass::{gauss_structural_stability, integrate_phi, StabilityReport, WeierstrassData};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    pub period: f64,
    pub flux: f64,
    pub isometry_relative: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodSection {
    pub horizontal: [f64; 2],
    pub horizontal_abs: f64,
    pub vertical: f64,
    pub onesided: f64,
    pub periods_pass: bool,
    pub onesided_pass: bool,
}

/// `F` and `G` of the `m = 2` reduction, for data with `a_1 > 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct M2Section {
    pub f: [f64; 2],
    pub f_abs: f64,
    pub g: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FluxSection {
    pub residues: [f64; 3],
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub map: String,
    pub q: [[f64; 3]; 3],
    pub t: [f64; 3],
    pub determinant: f64,
    pub residual: f64,
    pub diameter: f64,
    pub passed: bool,
}

impl From<&IsometryCertificate> for CertificateEntry {
    fn from(c: &IsometryCertificate) -> Self {
        let q = c.motion.q;
        Self {
            map: c.map.describe(),
            q: [
                [q[(0, 0)], q[(0, 1)], q[(0, 2)]],
                [q[(1, 0)], q[(1, 1)], q[(1, 2)]],
                [q[(2, 0)], q[(2, 1)], q[(2, 2)]],
            ],
            t: [c.motion.t[0], c.motion.t[1], c.motion.t[2]],
            determinant: q.determinant(),
            residual: c.residual,
            diameter: c.diameter,
            passed: c.passed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometrySection {
    pub m: u32,
    pub expected: usize,
    pub count: usize,
    pub all_passed: bool,
    pub certificates: Vec<CertificateEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchPointEntry {
    pub parameter: [f64; 2],
    pub antipode: [f64; 2],
    pub image: Option<[f64; 3]>,
    pub antipode_image: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub input: String,
    pub complexity: usize,
    pub c: [f64; 2],
    pub c_scale: f64,
    pub tolerances: Tolerances,
    pub period: PeriodSection,
    pub m2: Option<M2Section>,
    pub flux: FluxSection,
    pub stability: StabilityReport,
    pub isometries: Option<IsometrySection>,
    pub branch_points: Vec<BranchPointEntry>,
    pub seed: u64,
    pub pass: bool,
}

impl VerificationReport {
    /// Collects every check for `data`; `isometry_m` also enumerates the
    /// symmetry group of the closed-form `H_m`.
    pub fn build(data: &WeierstrassData, input: &str, isometry_m: Option<u32>) -> Result<Self> {
        Self::build_seeded(data, input, isometry_m, 0)
    }

    /// [`build`](Self::build) with the isometry sample streams derived from `seed`.
    pub fn build_seeded(
        data: &WeierstrassData,
        input: &str,
        isometry_m: Option<u32>,
        seed: u64,
    ) -> Result<Self> {
        let res = period_residuals(data);
        let period = PeriodSection {
            horizontal: [res.horizontal.re, res.horizontal.im],
            horizontal_abs: res.horizontal.norm(),
            vertical: res.vertical,
            onesided: res.onesided,
            periods_pass: res.periods_closed(PERIOD_TOLERANCE),
            onesided_pass: res.onesided < PERIOD_TOLERANCE,
        };
        let points = data.config().points();
        let m2 = (data.complexity() == 2 && points[0].theta == 0.0).then(|| {
            let p = ModuliPoint {
                r1: points[0].r,
                r2: points[1].r,
                r3: points[2].r,
                theta2: points[1].theta,
                theta3: points[2].theta,
                beta: data.c().arg(),
            };
            let f = f_m2(&p);
            M2Section {
                f: [f.re, f.im],
                f_abs: f.norm(),
                g: g_m2(&p),
            }
        });
        let residues = flux_exactness(data);
        let flux = FluxSection {
            residues,
            exact: residues.iter().all(|r| *r < FLUX_TOLERANCE),
        };
        let stability = gauss_structural_stability(data);
        let isometries = match isometry_m {
            Some(m) => {
                let certs = enumerate_isometries_seeded(m, seed)?;
                Some(IsometrySection {
                    m,
                    expected: 4 * m as usize + 4,
                    count: certs.len(),
                    all_passed: certs.iter().all(|c| c.passed),
                    certificates: certs.iter().map(CertificateEntry::from).collect(),
                })
            }
            None => None,
        };
        let forms = integrate_phi(data).ok();
        let image = |z| {
            forms
                .as_ref()
                .and_then(|f| f.position(z).ok())
                .map(|x| [x[0], x[1], x[2]])
        };
        let branch_points = points
            .iter()
            .map(|p| {
                let (a, b) = (p.to_complex(), p.antipode());
                BranchPointEntry {
                    parameter: [a.re, a.im],
                    antipode: [b.re, b.im],
                    image: image(a),
                    antipode_image: image(b),
                }
            })
            .collect();
        let c = data.c();
        let pass = period.periods_pass
            && period.onesided_pass
            && isometries
                .as_ref()
                .is_none_or(|s| s.all_passed && s.count == s.expected);
        Ok(Self {
            schema: REPORT_SCHEMA,
            input: input.to_string(),
            complexity: data.complexity(),
            c: [c.re, c.im],
            c_scale: data.c_scale(),
            tolerances: Tolerances {
                period: PERIOD_TOLERANCE,
                flux: FLUX_TOLERANCE,
                isometry_relative: ISOMETRY_TOLERANCE,
            },
            period,
            m2,
            flux,
            stability,
            isometries,
            branch_points,
            seed,
            pass,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::symmetric_example;

    #[test]
    fn h2_report() {
        let r = VerificationReport::build(&symmetric_example(2).unwrap(), "hm m=2", Some(2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.flux.residues, [0.0; 3]);
        assert_eq!(r.isometries.as_ref().unwrap().count, 12);
        assert_eq!(r.stability.distinct_branch_images.len(), 3);
        let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json["schema"], 1);
    }

    #[test]
    fn perturbed_h2_fails() {
        let p = ModuliPoint { r3: 1.01, ..ModuliPoint::h2() };
        let r = VerificationReport::build(&p.to_data().unwrap(), "perturbed", None).unwrap();
        assert!(!r.pass && !r.period.periods_pass);
        // Every R(r_3) term of F carries R(r_1) or R(r_2), which vanish here; G does not.
        let m2 = r.m2.unwrap();
        assert!(m2.f_abs < 1e-15);
        let expected_g = (1.01 - 1.0 / 1.01) * 0.5;
        assert!((m2.g - expected_g).abs() < 1e-15);
        assert!((r.period.vertical.abs() - 2.0 * expected_g).abs() < 1e-12);
        assert!(r.branch_points.iter().all(|b| b.image.is_none()));
    }
}
