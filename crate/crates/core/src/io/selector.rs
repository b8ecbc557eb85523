use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::datafile::DataFile;
use crate::algebra::BranchConfiguration;
use crate::error::{Error, Result};
use crate::period::{family_theta2, symmetric_example, FamilySign};
use crate::surfaces::{HmParam, SurfaceKind, SurfaceMap};
use crate::weierstrass::WeierstrassData;

/// A named surface or user-supplied Weierstrass data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Selector {
    H1,
    HmOdd(u32),
    HmEven(HmParam),
    Conjugate(u32),
    Associated { m: u32, phi: f64 },
    LimitM2,
    Family { theta2: f64, sign: FamilySign },
    Custom(DataFile),
}

/// Weierstrass data of the `m = 2` limit surface, `f(z) = i (1 + z^{-4})`.
pub fn limit_m2_data() -> Result<WeierstrassData> {
    WeierstrassData::new(
        Complex64::new(0.0, 1.0),
        BranchConfiguration::from_polar(&[(1.0, FRAC_PI_4), (1.0, 3.0 * FRAC_PI_4)])?,
    )
}

impl Selector {
    pub fn surface(&self) -> Result<SurfaceMap> {
        let kind = match self {
            Selector::H1 => SurfaceKind::H1,
            Selector::HmOdd(m) => SurfaceKind::HmOdd(*m),
            Selector::HmEven(p) => SurfaceKind::HmEven(*p),
            Selector::Conjugate(m) => SurfaceKind::Conjugate(*m),
            Selector::Associated { m, phi } => SurfaceKind::Associated {
                data: symmetric_example(*m as usize)?,
                phi: *phi,
            },
            Selector::LimitM2 => SurfaceKind::LimitM2,
            Selector::Family { .. } | Selector::Custom(_) => {
                SurfaceKind::Integrated(self.data()?.expect("data-backed selector"))
            }
        };
        SurfaceMap::new(kind)
    }

    /// Laurent Weierstrass data behind the surface, when it has one.
    pub fn data(&self) -> Result<Option<WeierstrassData>> {
        let sym = |m: u32| symmetric_example(m as usize);
        Ok(Some(match self {
            Selector::H1 => sym(1)?,
            Selector::HmOdd(m) => {
                if m % 2 == 0 {
                    return Err(Error::Domain(format!("hm-odd needs odd m, got {m}")));
                }
                sym(*m)?
            }
            Selector::HmEven(HmParam::Integer(m)) if m % 2 == 0 => sym(*m)?,
            Selector::HmEven(HmParam::Integer(m)) => sym(*m)?.rotated(FRAC_PI_2),
            Selector::HmEven(HmParam::InverseEven(_)) => return Ok(None),
            Selector::Conjugate(m) => sym(*m)?.rotated(FRAC_PI_2),
            Selector::Associated { m, phi } => sym(*m)?.rotated(*phi),
            Selector::LimitM2 => limit_m2_data()?,
            Selector::Family { theta2, sign } => family_theta2(*theta2, *sign)?.to_data()?,
            Selector::Custom(d) => d.to_data()?,
        }))
    }

    /// `m` whose symmetry group should be enumerated, for the `H_m` themselves.
    pub fn isometry_m(&self) -> Option<u32> {
        match self {
            Selector::H1 => Some(1),
            Selector::HmOdd(m) => Some(*m),
            Selector::HmEven(HmParam::Integer(m)) if m % 2 == 0 => Some(*m),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Selector::H1 => "h1".into(),
            Selector::HmOdd(m) => format!("hm-odd m={m}"),
            Selector::HmEven(HmParam::Integer(m)) => format!("hm-even m={m}"),
            Selector::HmEven(HmParam::InverseEven(k)) => format!("hm-even m=1/{}", 2 * k),
            Selector::Conjugate(m) => format!("conjugate m={m}"),
            Selector::Associated { m, phi } => format!("associated m={m} phi={phi}"),
            Selector::LimitM2 => "limit-m2".into(),
            Selector::Family { theta2, sign } => format!("family theta2={theta2} sign={sign:?}"),
            Selector::Custom(d) => format!("custom m={}", d.m),
        }
    }
}
