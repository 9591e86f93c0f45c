//! Exact arithmetic in the cyclotomic field Q(ζ₈).
//!
//! An element is `c0 + c1·w + c2·w² + c3·w³` with rational `cj`, reduced
//! modulo `w⁴ + 1`. Here `w = exp(iπ/4)`, so `i = w²` and `i^{3/2} = w³`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Element of Q(ζ₈) in the power basis `1, w, w², w³`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    coeffs: [BigRational; 4],
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn new(coeffs: [BigRational; 4]) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self { coeffs: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()] }
    }

    /// `w^k` for any integer `k`, using `w⁸ = 1` and `w⁴ = -1`.
    pub fn omega_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut c = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        if k < 4 {
            c[k] = BigRational::one();
        } else {
            c[k - 4] = -BigRational::one();
        }
        Self { coeffs: c }
    }

    /// The primitive eighth root of unity `w`.
    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// The imaginary unit `i = w²`.
    pub fn i() -> Self {
        Self::omega_pow(2)
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in Q (no `w` components).
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when the element is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { coeffs: [&self.coeffs[0] * r, &self.coeffs[1] * r, &self.coeffs[2] * r, &self.coeffs[3] * r] }
    }

    /// Galois automorphism `w ↦ w^k` for odd `k`.
    pub fn galois(&self, k: i64) -> Self {
        assert!(k.rem_euclid(2) == 1, "Galois exponent must be odd");
        let mut out = Scalar::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out += Scalar::omega_pow(j as i64 * k).scale(c);
        }
        out
    }

    /// Complex conjugation, `w ↦ w⁻¹ = -w³`.
    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    /// Field norm down to Q (product of the four Galois conjugates).
    pub fn norm(&self) -> BigRational {
        let n = self * &self.galois(3) * self.galois(5) * self.galois(7);
        debug_assert!(n.is_rational());
        n.coeffs[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let partial = self.galois(3) * self.galois(5) * self.galois(7);
        let n = self.norm();
        Some(partial.scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..e {
            out *= self;
        }
        out
    }

    /// Human-oriented rendering, e.g. `2`, `-i`, `1/2*w^3`.
    pub fn pretty(&self) -> String {
        const NAMES: [&str; 4] = ["", "w", "i", "w^3"];
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = if j == 0 {
                c.to_string()
            } else if c.is_one() {
                NAMES[j].to_string()
            } else if *c == -BigRational::one() {
                format!("-{}", NAMES[j])
            } else {
                format!("{}*{}", c, NAMES[j])
            };
            parts.push(part);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }

    /// True if the leading nonzero coefficient is negative (used for sign-aware printing).
    pub fn is_negative_rational(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_negative()
    }
}

/// `c₁ x₁ + c₂ x₂ + …` with unit coefficients dropped and rational signs
/// folded into the joins.
pub fn linear_combination<'a>(terms: impl IntoIterator<Item = (&'a Scalar, String)>, sep: &str) -> String {
    let mut out = String::new();
    for (c, x) in terms {
        let neg = c.is_negative_rational();
        let mag = if neg { -c } else { c.clone() };
        let body = if x.is_empty() {
            mag.pretty()
        } else if mag.is_one() {
            x
        } else if mag.is_rational() {
            format!("{}{sep}{x}", mag.pretty())
        } else {
            format!("({}){sep}{x}", mag.pretty())
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn mul_raw(a: &[BigRational; 4], b: &[BigRational; 4]) -> [BigRational; 4] {
    let mut c = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let p = x * y;
            let k = i + j;
            if k < 4 {
                c[k] += p;
            } else {
                c[k - 4] -= p;
            }
        }
    }
    c
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar { coeffs: mul_raw(&self.coeffs, &rhs.coeffs) }
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.coeffs = mul_raw(&self.coeffs, &rhs.coeffs);
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { coeffs: self.coeffs.map(|c| -c) }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

/// Rational in the `p/q` (or bare `p`) form used throughout the JSON output.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical serialization `c0 + c1*w + c2*w^2 + c3*w^3`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        write!(
            f,
            "{} + {}*w + {}*w^2 + {}*w^3",
            format_rational(&c[0]),
            format_rational(&c[1]),
            format_rational(&c[2]),
            format_rational(&c[3])
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.pretty())
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(" + ").collect();
        let bad = || ParseError::Scalar(s.to_string());
        if parts.len() != 4 {
            return Err(bad());
        }
        let suffixes = ["", "*w", "*w^2", "*w^3"];
        let mut coeffs = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for (k, (part, suffix)) in parts.iter().zip(suffixes).enumerate() {
            let body = if suffix.is_empty() { *part } else { part.strip_suffix(suffix).ok_or_else(bad)? };
            coeffs[k] = parse_rational(body).map_err(|_| bad())?;
        }
        Ok(Scalar { coeffs })
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_to_the_fourth_is_minus_one() {
        assert_eq!(Scalar::omega() * Scalar::omega_pow(3), Scalar::from_int(-1));
    }

    #[test]
    fn i_three_halves_squared_is_minus_i() {
        let w3 = Scalar::omega_pow(3);
        assert_eq!(&w3 * &w3, -Scalar::i());
    }

    #[test]
    fn identity_is_neutral() {
        let x = Scalar::new([rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 5)]);
        assert_eq!(Scalar::one() * x.clone(), x);
    }

    #[test]
    fn conjugation_cancels_the_phase() {
        let w3 = Scalar::omega_pow(3);
        assert!((w3.conj() * w3).is_one());
        assert_eq!(Scalar::i().conj(), -Scalar::i());
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn serialization_round_trip() {
        let x = Scalar::new([rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 5)]);
        let s = x.to_string();
        assert_eq!(s, "1/2 + -3*w + 0*w^2 + 7/5*w^3");
        assert_eq!(s.parse::<Scalar>().unwrap(), x);
        assert!("1 + 2*w".parse::<Scalar>().is_err());
        assert!("1 + x*w + 0*w^2 + 0*w^3".parse::<Scalar>().is_err());
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(Scalar::i().pretty(), "i");
        assert_eq!((-Scalar::omega_pow(3)).pretty(), "-w^3");
        assert_eq!(Scalar::zero().pretty(), "0");
        assert_eq!((Scalar::one() - Scalar::i()).pretty(), "1 - i");
        let (two, m1, i) = (Scalar::from_int(2), Scalar::from_int(-1), Scalar::i());
        let s = linear_combination([(&m1, "a".to_string()), (&two, "b".into()), (&i, "c".into())], "*");
        assert_eq!(s, "-a + 2*b + (i)*c");
    }
}
