//! Complex Laurent polynomials, branch-point products and residues.
//!
//! A [`LaurentPoly`] stores a dense coefficient vector for the exponents
//! `low..=low + len - 1`. After every arithmetic operation coefficients whose
//! magnitude is at most [`DROP_TOLERANCE`] times the largest magnitude are
//! set to exactly zero and the exponent range is trimmed, so cancellations
//! that are exact in the algebra come out as exact zeros.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Relative magnitude below which a coefficient is treated as zero.
pub const DROP_TOLERANCE: f64 = 1e-15;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `R(r) = r - 1/r`, a bijection from `(0, inf)` onto the real line.
#[inline]
pub fn r_gap(r: f64) -> f64 {
    r - 1.0 / r
}

/// Derivative of [`r_gap`].
#[inline]
pub fn r_gap_derivative(r: f64) -> f64 {
    1.0 + 1.0 / (r * r)
}

/// Unique positive `r` with `r_gap(r) == value`.
pub fn r_from_gap(value: f64) -> f64 {
    // (R + sqrt(R^2 + 4)) / 2, rewritten for negative R to avoid cancellation.
    let s = (value * value + 4.0).sqrt();
    if value >= 0.0 {
        0.5 * (value + s)
    } else {
        2.0 / (s - value)
    }
}

/// `e^{i theta}`, exact on multiples of a quarter turn.
pub fn cis(theta: f64) -> Complex64 {
    let quarter = theta / std::f64::consts::FRAC_PI_2;
    if quarter == quarter.round() && quarter.abs() < 1e15 {
        match (quarter as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::new(theta.cos(), theta.sin())
    }
}

pub(crate) fn check_finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Finite Laurent polynomial with complex coefficients.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 0)
    }

    pub fn monomial(c: Complex64, exponent: i32) -> Self {
        Self::from_coeffs(exponent, vec![c])
    }

    /// `coeffs[k]` is the coefficient of `z^(low + k)`.
    pub fn from_coeffs(low: i32, coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    /// Polynomial `sum_h coeffs[h] z^h`.
    pub fn from_polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::from_coeffs(0, coeffs)
    }

    fn normalize(&mut self) {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            if max == 0.0 {
                self.coeffs.clear();
                self.low = 0;
            }
            return;
        }
        let cutoff = DROP_TOLERANCE * max;
        for c in &mut self.coeffs {
            if c.norm() <= cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let first = self.coeffs.iter().position(|c| c.norm() != 0.0).unwrap_or(0);
        let last = self.coeffs.iter().rposition(|c| c.norm() != 0.0).unwrap_or(0);
        self.coeffs = self.coeffs[first..=last].to_vec();
        self.low += first as i32;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `z^exponent` (zero outside the stored range).
    pub fn coeff(&self, exponent: i32) -> Complex64 {
        let k = exponent - self.low;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs
            .get(k as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterator over `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(move |(k, c)| (self.low + k as i32, *c))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Complex64 {
        self.coeff(-1)
    }

    /// Multiply by `z^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            low: self.low + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn conj_coeffs(&self) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|a| a.conj()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.low - 1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * f64::from(self.low + k as i32))
                .collect(),
        )
    }

    /// Termwise antiderivative of everything except the `z^{-1}` term,
    /// returned together with that term's coefficient.
    pub fn antiderivative(&self) -> (Self, Complex64) {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.low + k as i32;
                if e == -1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / f64::from(e + 1)
                }
            })
            .collect();
        (Self::from_coeffs(self.low + 1, coeffs), self.residue())
    }

    /// Evaluate at `z`; the polynomial and principal parts are each
    /// evaluated by Horner's rule.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z, "evaluation point")?;
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let high = self.low + self.coeffs.len() as i32 - 1;
        let mut value = Complex64::new(0.0, 0.0);
        if high >= 0 {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in (self.low.max(0)..=high).rev() {
                acc = acc * z + self.coeff(e);
            }
            value += acc * z.powi(self.low.max(0));
        }
        if self.low < 0 {
            if z.norm() == 0.0 {
                return Err(Error::Domain(
                    "Laurent polynomial with negative exponents evaluated at 0".into(),
                ));
            }
            let w = z.inv();
            let top = high.min(-1);
            let mut acc = Complex64::new(0.0, 0.0);
            for e in self.low..=top {
                acc = acc * w + self.coeff(e);
            }
            value += acc * w.powi(-top);
        }
        Ok(value)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)z^{}", c.re, c.im, e)?;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_exponent().unwrap().max(rhs.high_exponent().unwrap());
        LaurentPoly::from_coeffs(
            low,
            (low..=high).map(|e| self.coeff(e) + rhs.coeff(e)).collect(),
        )
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, out)
    }
}

impl Mul<Complex64> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Complex64) -> LaurentPoly {
        self.scale(rhs)
    }
}

/// A branch value `a = r e^{i theta}` kept in polar form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || !theta.is_finite() {
            return Err(Error::NonFinite("branch value"));
        }
        if r <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "branch modulus must be positive, got {r}"
            )));
        }
        Ok(Self { r, theta })
    }

    pub fn from_complex(a: Complex64) -> Result<Self> {
        check_finite(a, "branch value")?;
        Self::new(a.norm(), a.arg())
    }

    pub fn to_complex(self) -> Complex64 {
        cis(self.theta) * self.r
    }

    /// The antipodal point `-1 / conj(a)`.
    pub fn antipode(self) -> Complex64 {
        -cis(self.theta) / self.r
    }
}

/// The `m + 1` branch values `a_1, ..., a_{m+1}` of a complexity-`m` surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchConfiguration {
    branch: Vec<PolarPoint>,
}

impl BranchConfiguration {
    pub fn new(branch: Vec<PolarPoint>) -> Result<Self> {
        if branch.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "complexity m >= 1 needs at least two branch values, got {}",
                branch.len()
            )));
        }
        for p in &branch {
            PolarPoint::new(p.r, p.theta)?;
        }
        Ok(Self { branch })
    }

    pub fn from_polar(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(r, t)| PolarPoint::new(r, t))
                .collect::<Result<_>>()?,
        )
    }

    /// The `(2m+2)`-roots-of-unity representatives `theta_j = pi (j-1)/(m+1)`.
    pub fn roots_of_unity(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("complexity must be >= 1".into()));
        }
        Self::new(
            (0..=m)
                .map(|j| PolarPoint {
                    r: 1.0,
                    theta: std::f64::consts::PI * j as f64 / (m + 1) as f64,
                })
                .collect(),
        )
    }

    /// Complexity `m` (the list holds `m + 1` values).
    pub fn complexity(&self) -> usize {
        self.branch.len() - 1
    }

    pub fn points(&self) -> &[PolarPoint] {
        &self.branch
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.branch.iter().map(|p| p.to_complex()).collect()
    }

    /// All `2m + 2` zeros of `P`: each `a_j` followed by its antipode.
    pub fn roots(&self) -> Vec<Complex64> {
        self.branch
            .iter()
            .flat_map(|p| [p.to_complex(), p.antipode()])
            .collect()
    }

    pub fn with_appended(&self, a: PolarPoint) -> Self {
        let mut branch = self.branch.clone();
        branch.push(a);
        Self { branch }
    }
}

/// `P(z) = prod_j (z - a_j)(z + 1/conj(a_j))`, expanded from its linear factors.
///
/// The running product is accumulated in double-double precision so the
/// only error left in the coefficients is the rounding of the roots.
pub fn expand_product(config: &BranchConfiguration) -> LaurentPoly {
    let roots = config.roots();
    let mut acc = vec![DdComplex::from(Complex64::new(1.0, 0.0))];
    for root in roots {
        let mut next = vec![DdComplex::default(); acc.len() + 1];
        for (h, c) in acc.iter().enumerate() {
            next[h + 1] = next[h + 1].add(*c);
            next[h] = next[h].add(c.mul_f64c(-root));
        }
        acc = next;
    }
    LaurentPoly::from_polynomial(acc.into_iter().map(DdComplex::to_c64).collect())
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let hi_lo = Self::two_sum(s.hi, s.lo + t.hi);
        Self::two_sum(hi_lo.hi, hi_lo.lo + t.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = Self::two_prod(self.hi, b);
        Self::two_sum(p.hi, p.lo + self.lo * b)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl From<Complex64> for DdComplex {
    fn from(z: Complex64) -> Self {
        Self {
            re: Dd { hi: z.re, lo: 0.0 },
            im: Dd { hi: z.im, lo: 0.0 },
        }
    }
}

impl DdComplex {
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    fn mul_f64c(self, z: Complex64) -> Self {
        Self {
            re: self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg()),
            im: self.re.mul_f64(z.im).add(self.im.mul_f64(z.re)),
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}

/// Extend `P_m` by one antipodal pair using the coefficient recursion
/// `A_{m+1,h} = A_{m,h-2} - A_{m,h-1} R(r) e^{i theta} - A_{m,h} e^{2 i theta}`.
pub fn extend_by_pair(p: &LaurentPoly, a_new: Complex64) -> Result<LaurentPoly> {
    check_finite(a_new, "new branch value")?;
    if a_new.norm() == 0.0 {
        return Err(Error::InvalidConfig("branch value must be nonzero".into()));
    }
    let a = PolarPoint::from_complex(a_new)?;
    extend_by_polar(p, a)
}

pub fn extend_by_polar(p: &LaurentPoly, a: PolarPoint) -> Result<LaurentPoly> {
    if let Some(low) = p.low_exponent() {
        if low < 0 {
            return Err(Error::Domain(
                "recursion applies to polynomials, got negative exponents".into(),
            ));
        }
    }
    let Some(deg) = p.high_exponent() else {
        return Ok(LaurentPoly::zero());
    };
    let middle = cis(a.theta) * r_gap(a.r);
    let last = cis(2.0 * a.theta);
    let coeffs = (0..=deg + 2)
        .map(|h| p.coeff(h - 2) - p.coeff(h - 1) * middle - p.coeff(h) * last)
        .collect();
    Ok(LaurentPoly::from_polynomial(coeffs))
}

/// Coefficient of `z^{-1}`.
pub fn residue_at_zero(l: &LaurentPoly) -> Complex64 {
    l.residue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn henneberg_product_is_z4_minus_1() {
        let cfg = BranchConfiguration::from_polar(&[(1.0, 0.0), (1.0, FRAC_PI_2)]).unwrap();
        let p = expand_product(&cfg);
        assert_eq!(p.high_exponent(), Some(4));
        assert_eq!(p.coeff(4), c(1.0, 0.0));
        assert_eq!(p.coeff(0), c(-1.0, 0.0));
        for h in 1..4 {
            assert_eq!(p.coeff(h), c(0.0, 0.0), "A_{h}");
        }
    }

    #[test]
    fn roots_of_unity_product() {
        for m in 1..=8 {
            let p = expand_product(&BranchConfiguration::roots_of_unity(m).unwrap());
            let top = 2 * m as i32 + 2;
            assert_eq!(p.low_exponent(), Some(0));
            assert_eq!(p.high_exponent(), Some(top));
            assert!((p.coeff(top) - c(1.0, 0.0)).norm() < 1e-14);
            assert!((p.coeff(0) + c(1.0, 0.0)).norm() < 1e-14);
            for h in 1..top {
                assert_eq!(p.coeff(h), c(0.0, 0.0), "m={m} A_{h}");
            }
        }
    }

    #[test]
    fn expand_real_and_imaginary_pair() {
        // (z-2)(z+1/2)(z-i)(z+i) = z^4 - 3/2 z^3 - 3/2 z - 1
        let cfg = BranchConfiguration::from_polar(&[(2.0, 0.0), (1.0, FRAC_PI_2)]).unwrap();
        let p = expand_product(&cfg);
        let expected = [c(-1.0, 0.0), c(-1.5, 0.0), c(0.0, 0.0), c(-1.5, 0.0), c(1.0, 0.0)];
        for (h, e) in expected.iter().enumerate() {
            assert!((p.coeff(h as i32) - e).norm() < 1e-15, "A_{h}");
        }
    }

    #[test]
    fn recursion_matches_expansion_single_step() {
        let cfg = BranchConfiguration::from_polar(&[(1.0, 0.0), (1.0, FRAC_PI_2)]).unwrap();
        let p1 = expand_product(&cfg);
        let a = PolarPoint::new(1.0, FRAC_PI_3).unwrap();
        let by_recursion = extend_by_polar(&p1, a).unwrap();
        let direct = expand_product(&cfg.with_appended(a));
        for h in 0..=6 {
            assert!(
                (by_recursion.coeff(h) - direct.coeff(h)).norm() < 1e-15,
                "A_{h}: {} vs {}",
                by_recursion.coeff(h),
                direct.coeff(h)
            );
        }
    }

    #[test]
    fn recursion_with_unit_real_pair_shifts() {
        let p = LaurentPoly::from_polynomial(vec![c(2.0, 1.0), c(-1.0, 0.5), c(0.25, 0.0)]);
        let q = extend_by_pair(&p, c(1.0, 0.0)).unwrap();
        for h in 0..=4 {
            assert_eq!(q.coeff(h), p.coeff(h - 2) - p.coeff(h), "h={h}");
        }
    }

    #[test]
    fn recursion_rejects_zero() {
        let p = LaurentPoly::one();
        assert!(extend_by_pair(&p, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(residue_at_zero(&LaurentPoly::monomial(c(1.0, 0.0), -1)), c(1.0, 0.0));
        let p = expand_product(&BranchConfiguration::roots_of_unity(1).unwrap());
        // z^{-4}(z^4 - 1): the z^{-1} coefficient is A_2 = 0.
        assert_eq!(residue_at_zero(&p.shift(-4)), c(0.0, 0.0));
        // f g^2 = z^{-2}(z^4 - 1): residue A_1 = 0.
        assert_eq!(residue_at_zero(&p.shift(-2)), c(0.0, 0.0));
    }

    #[test]
    fn evaluation() {
        let p = LaurentPoly::from_polynomial(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(p.evaluate(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let v = p.evaluate(cis(FRAC_PI_4)).unwrap();
        assert!((v - c(-2.0, 0.0)).norm() < 1e-15, "{v}");
        let inv = LaurentPoly::monomial(c(1.0, 0.0), -1);
        assert_eq!(inv.evaluate(c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(inv.evaluate(c(0.0, 0.0)).is_err());
        let mixed = LaurentPoly::from_coeffs(-2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let z = c(0.3, -0.7);
        let expected = z.powi(-2) + z.powi(-1) * 2.0 + 3.0 + z * 4.0;
        assert!((mixed.evaluate(z).unwrap() - expected).norm() < 1e-13);
    }

    #[test]
    fn drop_tolerance_snaps_cancellations() {
        let p = LaurentPoly::from_polynomial(vec![c(1e-17, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.low_exponent(), Some(1));
        assert!(LaurentPoly::from_polynomial(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn r_gap_inverse() {
        for &r in &[1e-3, 0.2, 1.0, 1.7, 40.0] {
            assert!((r_from_gap(r_gap(r)) - r).abs() < 1e-12 * r.max(1.0));
        }
        assert_eq!(r_from_gap(0.0), 1.0);
    }

    #[test]
    fn cis_quarter_turns_exact() {
        assert_eq!(cis(FRAC_PI_2), c(0.0, 1.0));
        assert_eq!(cis(PI), c(-1.0, 0.0));
        assert_eq!(cis(-FRAC_PI_2), c(0.0, -1.0));
    }

    #[test]
    fn config_validation() {
        assert!(BranchConfiguration::from_polar(&[(1.0, 0.0)]).is_err());
        assert!(BranchConfiguration::from_polar(&[(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(BranchConfiguration::from_polar(&[(1.0, 0.0), (f64::NAN, 1.0)]).is_err());
    }
}
