//! Exact linear combinations of logarithms: `r₀ + Σ rₐ ln a` over prime and
//! symbolic atoms. Carries coupling logs through shifts without rounding.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, TodaError};
use crate::poly::{GradedPoly, Monomial, Symbol};
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogAtom {
    Prime(u64),
    Symbol(String),
}

impl fmt::Display for LogAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogAtom::Prime(p) => write!(f, "{p}"),
            LogAtom::Symbol(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogComb {
    constant: BigRational,
    terms: BTreeMap<LogAtom, BigRational>,
}

const TRIAL_LIMIT: u64 = 1 << 20;

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n && p < TRIAL_LIMIT {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl LogComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(r: BigRational) -> Self {
        Self { constant: r, terms: BTreeMap::new() }
    }

    /// `ln s` for a positive formal symbol `s`.
    pub fn ln_symbol(name: &str) -> Self {
        let mut c = Self::zero();
        c.add_atom(LogAtom::Symbol(name.to_string()), BigRational::one());
        c
    }

    /// `ln r` for a positive rational, split over prime factors.
    pub fn ln_rational(r: &BigRational) -> Result<Self, TodaError> {
        if !r.is_positive() {
            return Err(TodaError::NonPositiveValue(format_rational(r)));
        }
        let mut c = Self::zero();
        for (n, sign) in [(r.numer(), 1), (r.denom(), -1)] {
            let v = n.to_u64().ok_or_else(|| TodaError::NonPositiveValue(format!("{n} exceeds 64 bits")))?;
            for (p, e) in factor(v) {
                c.add_atom(LogAtom::Prime(p), BigRational::from_integer(BigInt::from(sign * i64::from(e))));
            }
        }
        Ok(c)
    }

    pub fn ln_int(n: u64) -> Self {
        Self::ln_rational(&BigRational::from_integer(n.into())).expect("positive")
    }

    fn add_atom(&mut self, a: LogAtom, r: BigRational) {
        let v = self.terms.remove(&a).unwrap_or_else(BigRational::zero) + r;
        if !v.is_zero() {
            self.terms.insert(a, v);
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&LogAtom, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (a, r) in &other.terms {
            out.add_atom(a.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { constant: &self.constant * r, terms: self.terms.iter().map(|(a, v)| (a.clone(), v * r)).collect() }
    }

    /// `e^{self}` as a polynomial: prime powers must be integral and symbol
    /// powers non-negative integers; the constant stays a formal `e^{r}`.
    pub fn exp(&self) -> Result<GradedPoly, TodaError> {
        let mut value = BigRational::one();
        let mut mono = Monomial::exponential(self.constant.clone());
        for (a, r) in &self.terms {
            if !r.is_integer() {
                return Err(TodaError::NonIntegralTransport(self.to_string()));
            }
            let e = r.to_integer();
            match a {
                LogAtom::Prime(p) => {
                    let base = BigRational::from_integer(BigInt::from(*p));
                    let k = e.abs().to_u32().ok_or_else(|| TodaError::NonIntegralTransport(self.to_string()))?;
                    let pw = num_traits::pow(base, k as usize);
                    value = if e.is_negative() { value / pw } else { value * pw };
                }
                LogAtom::Symbol(s) => {
                    let k = e.to_u32().ok_or_else(|| TodaError::NonIntegralTransport(self.to_string()))?;
                    mono = mono.mul(&Monomial::var(Symbol::even(s.clone()), k)).expect("even symbol");
                }
            }
        }
        Ok(GradedPoly::term(mono, Scalar::from_rational(value)))
    }

    pub fn to_json(&self) -> LogCombJson {
        LogCombJson {
            constant: format_rational(&self.constant),
            ln: self.terms.iter().map(|(a, r)| (a.to_string(), format_rational(r))).collect(),
        }
    }

    pub fn from_json(j: &LogCombJson) -> Result<Self, ParseError> {
        let mut out = Self::constant(parse_rational(&j.constant)?);
        for (k, v) in &j.ln {
            let atom = match k.parse::<u64>() {
                Ok(p) if p >= 2 => LogAtom::Prime(p),
                Ok(_) => return Err(ParseError::Document(format!("bad log atom `{k}`"))),
                Err(_) => LogAtom::Symbol(k.clone()),
            };
            out.add_atom(atom, parse_rational(v)?);
        }
        Ok(out)
    }
}

fn coeff_prefix(r: &BigRational, first: bool) -> String {
    let sign = if r.is_negative() {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let a = r.abs();
    let body = if a.is_one() { String::new() } else { format!("{}*", format_rational(&a)) };
    format!("{sign}{body}")
}

impl fmt::Display for LogComb {
    /// Integer prime parts collapse to a single `ln n`: `-ln 2 - ln 3` prints as `-ln 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        let mut loose = Vec::new();
        for (a, r) in &self.terms {
            match a {
                LogAtom::Prime(p) if r.is_integer() => {
                    let e = r
                        .to_integer()
                        .to_u32()
                        .map(|e| (e, true))
                        .or_else(|| (-r.to_integer()).to_u32().map(|e| (e, false)));
                    match e {
                        Some((e, true)) => num *= num_traits::pow(BigInt::from(*p), e as usize),
                        Some((e, false)) => den *= num_traits::pow(BigInt::from(*p), e as usize),
                        None => loose.push((a, r)),
                    }
                }
                _ => loose.push((a, r)),
            }
        }
        if num != den {
            let g = num.gcd(&den);
            let (n, d) = (&num / &g, &den / &g);
            if n.is_one() {
                parts.push(format!("-ln {d}"));
            } else if d.is_one() {
                parts.push(format!("ln {n}"));
            } else {
                parts.push(format!("ln({n}/{d})"));
            }
        }
        for (a, r) in loose {
            parts.push(format!("{}ln {a}", coeff_prefix(r, parts.is_empty())));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            let c = format_rational(&self.constant);
            if parts.is_empty() || self.constant.is_negative() {
                parts.push(c);
            } else {
                parts.push(format!("+{c}"));
            }
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                if let Some(rest) = p.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(rest);
                    continue;
                }
                s.push_str(" + ");
                s.push_str(p.strip_prefix('+').unwrap_or(p));
            } else {
                s.push_str(p);
            }
        }
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogCombJson {
    pub constant: String,
    pub ln: BTreeMap<String, String>,
}
