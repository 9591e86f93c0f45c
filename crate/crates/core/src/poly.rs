//! Polynomials in parity-tagged formal symbols over Q(ζ₈).
//!
//! Odd symbols are not nilpotent: `(ξ⁺)²` is a nonzero even monomial. A
//! product that would mix two distinct odd symbols is rejected; the radial
//! engine contracts `ξ⁻ξ⁺` pairs into even couplings on its own.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, PolyError};
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    name: String,
    parity: u8,
}

impl Symbol {
    pub fn even(name: impl Into<String>) -> Self {
        Self { name: name.into(), parity: 0 }
    }

    pub fn odd(name: impl Into<String>) -> Self {
        Self { name: name.into(), parity: 1 }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == 1
    }
}

/// Product of symbol powers times a formal exponential `e^r`, `r` rational.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    powers: BTreeMap<Symbol, u32>,
    exp: BigRational,
}

impl Default for Monomial {
    fn default() -> Self {
        Self::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self { powers: BTreeMap::new(), exp: BigRational::zero() }
    }

    pub fn var(sym: Symbol, power: u32) -> Self {
        let mut powers = BTreeMap::new();
        if power > 0 {
            powers.insert(sym, power);
        }
        Self { powers, exp: BigRational::zero() }
    }

    pub fn exponential(r: BigRational) -> Self {
        Self { powers: BTreeMap::new(), exp: r }
    }

    pub fn powers(&self) -> &BTreeMap<Symbol, u32> {
        &self.powers
    }

    pub fn exp(&self) -> &BigRational {
        &self.exp
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty() && self.exp.is_zero()
    }

    pub fn power_of(&self, name: &str) -> u32 {
        self.powers.iter().find(|(s, _)| s.name == name).map_or(0, |(_, p)| *p)
    }

    /// Total degree in odd symbols, mod 2.
    pub fn parity(&self) -> u8 {
        let odd: u32 = self.powers.iter().filter(|(s, _)| s.is_odd()).map(|(_, p)| *p).sum();
        (odd % 2) as u8
    }

    fn odd_symbol(&self) -> Option<&Symbol> {
        self.powers.keys().find(|s| s.is_odd())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        if let (Some(a), Some(b)) = (self.odd_symbol(), other.odd_symbol()) {
            if a.name != b.name {
                return Err(PolyError::DistinctOddSymbols(a.name.clone(), b.name.clone()));
            }
        }
        Ok(self.mul_unchecked(other))
    }

    /// Plain product without the odd-symbol guard; parity conflicts still panic-free.
    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        let mut powers = self.powers.clone();
        for (s, p) in &other.powers {
            *powers.entry(s.clone()).or_insert(0) += p;
        }
        Monomial { powers, exp: &self.exp + &other.exp }
    }

    pub(crate) fn with_powers(powers: BTreeMap<Symbol, u32>, exp: BigRational) -> Self {
        let powers = powers.into_iter().filter(|(_, p)| *p > 0).collect();
        Monomial { powers, exp }
    }

    /// Remove a symbol, returning its power and the remaining monomial.
    pub fn split_off(&self, name: &str) -> (u32, Monomial) {
        let mut rest = self.clone();
        let key = rest.powers.keys().find(|s| s.name == name).cloned();
        let p = key.and_then(|k| rest.powers.remove(&k)).unwrap_or(0);
        (p, rest)
    }

    fn render(&self, latex: bool) -> String {
        let mut factors: Vec<String> = self
            .powers
            .iter()
            .map(|(s, p)| {
                let name = if latex { latex_symbol(&s.name) } else { s.name.clone() };
                match (*p, latex) {
                    (1, _) => name,
                    (p, false) => format!("{name}^{p}"),
                    (p, true) => format!("{name}^{{{p}}}"),
                }
            })
            .collect();
        if !self.exp.is_zero() {
            factors.push(if latex {
                format!("e^{{{}}}", format_rational(&self.exp))
            } else {
                format!("e^({})", format_rational(&self.exp))
            });
        }
        if factors.is_empty() {
            "1".into()
        } else if latex {
            factors.join(" ")
        } else {
            factors.join("*")
        }
    }
}

fn latex_symbol(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, idx) = name.split_at(split);
    let head = match head {
        "xp" => r"\xi^{+}",
        "xm" => r"\xi^{-}",
        "lam" => r"\lambda",
        "mu" => r"\mu",
        "k" => r"\kappa",
        "g" => "g",
        other => other,
    };
    if idx.is_empty() {
        head.to_string()
    } else {
        format!("{head}_{{{idx}}}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Finite sum of `Scalar × Monomial`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Scalar::from_int(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::constant(Scalar::from_rational(r))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::term(Monomial::var(sym, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parity of a homogeneous polynomial; `None` for mixed parity. Zero is even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(Monomial::parity);
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        let mut out = GradedPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<GradedPoly, PolyError> {
        let mut out = GradedPoly::one();
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Conjugate coefficients; symbols are real.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    /// Multiply every monomial by a formal exponential `e^r`.
    pub fn times_exp(&self, r: &BigRational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.exp += r;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.terms.keys().flat_map(|m| m.powers.keys().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn has_exponentials(&self) -> bool {
        self.terms.keys().any(|m| !m.exp.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    /// Replace every occurrence of the symbol `name` by `value`.
    pub fn substitute(&self, name: &str, value: &GradedPoly) -> Result<GradedPoly, PolyError> {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let (p, rest) = m.split_off(name);
            let piece = GradedPoly::term(rest, c.clone());
            if p == 0 {
                out = out + piece;
            } else {
                out = out + piece.mul(&value.pow(p)?)?;
            }
        }
        Ok(out)
    }

    /// Replace `sym²` by `value`; fails if `sym` appears to an odd power.
    pub fn substitute_square(&self, name: &str, value: &GradedPoly) -> Result<GradedPoly, PolyError> {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let (p, rest) = m.split_off(name);
            if p % 2 == 1 {
                return Err(PolyError::UnboundSymbol(format!("{name}^{p}")));
            }
            let piece = GradedPoly::term(rest, c.clone());
            out = out + piece.mul(&value.pow(p / 2)?)?;
        }
        Ok(out)
    }

    pub fn pretty(&self) -> String {
        self.render(false)
    }

    pub fn latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative_rational() { (true, -c) } else { (false, c.clone()) };
            let coeff = if mag.is_rational() { mag.pretty() } else { format!("({})", mag.pretty()) };
            let body = if m.is_one() {
                coeff
            } else if mag.is_one() {
                m.render(latex)
            } else if latex {
                format!("{} {}", coeff, m.render(true))
            } else {
                format!("{}*{}", coeff, m.render(false))
            };
            match (k, neg) {
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (0, false) => out.push_str(&body),
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Vec<PolyTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTermJson {
                monomial: m
                    .powers
                    .iter()
                    .map(|(s, p)| FactorJson { symbol: s.name.clone(), parity: s.parity, power: *p })
                    .collect(),
                exp: (!m.exp.is_zero()).then(|| format_rational(&m.exp)),
                scalar: c.clone(),
            })
            .collect()
    }

    pub fn from_json(terms: &[PolyTermJson]) -> Result<Self, ParseError> {
        let mut out = GradedPoly::zero();
        for t in terms {
            let mut powers = BTreeMap::new();
            for f in &t.monomial {
                let sym = match f.parity {
                    0 => Symbol::even(f.symbol.clone()),
                    1 => Symbol::odd(f.symbol.clone()),
                    _ => return Err(ParseError::Monomial(f.symbol.clone())),
                };
                if f.power == 0 {
                    return Err(ParseError::Monomial(f.symbol.clone()));
                }
                powers.insert(sym, f.power);
            }
            let exp = match &t.exp {
                Some(e) => parse_rational(e)?,
                None => BigRational::zero(),
            };
            out.add_term(Monomial::with_powers(powers, exp), &t.scalar);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub symbol: String,
    pub parity: u8,
    pub power: u32,
}

/// JSON form of one term: `{monomial, scalar}` plus an optional formal exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub monomial: Vec<FactorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp: Option<String>,
    pub scalar: Scalar,
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({})", self.pretty())
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, &c);
        }
        self
    }
}

impl Add<&GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        self + (-rhs)
    }
}

impl Sub<&GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.clone() - rhs.clone()
    }
}

impl From<Scalar> for GradedPoly {
    fn from(c: Scalar) -> Self {
        GradedPoly::constant(c)
    }
}

/// Positive-root character symbol `ξ⁺_k`; odd exactly for the short root `k = 1`.
pub fn xi_plus(k: usize) -> Symbol {
    if k == 1 {
        Symbol::odd(format!("xp{k}"))
    } else {
        Symbol::even(format!("xp{k}"))
    }
}

pub fn xi_minus(k: usize) -> Symbol {
    if k == 1 {
        Symbol::odd(format!("xm{k}"))
    } else {
        Symbol::even(format!("xm{k}"))
    }
}

/// Coupling `g_k`; operators only ever contain even powers of it.
pub fn coupling(k: usize) -> Symbol {
    Symbol::even(format!("g{k}"))
}

pub fn lambda(i: usize) -> Symbol {
    Symbol::even(format!("lam{i}"))
}

pub fn mu(i: usize) -> Symbol {
    Symbol::even(format!("mu{i}"))
}

pub fn kappa(i: usize) -> Symbol {
    Symbol::even(format!("k{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn odd_square_survives() {
        let x = GradedPoly::var(xi_plus(1));
        let sq = x.mul(&x).unwrap();
        assert!(!sq.is_zero());
        assert_eq!(sq.parity(), Some(0));
        assert_eq!(sq.pretty(), "xp1^2");
    }

    #[test]
    fn even_symbols_commute() {
        let a = GradedPoly::var(coupling(1)).pow(2).unwrap();
        let b = GradedPoly::var(coupling(2)).pow(2).unwrap();
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn parity_is_additive() {
        let odd = GradedPoly::var(xi_plus(1));
        let even = GradedPoly::var(xi_plus(2));
        assert_eq!(odd.mul(&even).unwrap().parity(), Some(1));
    }

    #[test]
    fn distinct_odd_symbols_are_rejected() {
        let p = GradedPoly::var(xi_plus(1));
        let m = GradedPoly::var(xi_minus(1));
        assert!(matches!(p.mul(&m), Err(PolyError::DistinctOddSymbols(..))));
    }

    #[test]
    fn mixed_parity_is_detected() {
        let p = GradedPoly::var(xi_plus(1)) + GradedPoly::one();
        assert_eq!(p.parity(), None);
    }

    #[test]
    fn substitution() {
        let g = GradedPoly::var(coupling(1));
        let h = g.pow(4).unwrap().scale(&Scalar::from_int(4)) + g.pow(2).unwrap().scale(&Scalar::from_int(2));
        let v = GradedPoly::from_rational(rat(1, 2));
        let out = h.substitute_square("g1", &v).unwrap();
        assert_eq!(out, GradedPoly::from_int(2));
        assert!(g.substitute_square("g1", &v).is_err());
    }

    #[test]
    fn exponentials_cancel() {
        let a = GradedPoly::one().times_exp(&rat(3, 2));
        let b = GradedPoly::one().times_exp(&rat(-3, 2));
        assert_eq!(a.mul(&b).unwrap(), GradedPoly::one());
    }

    #[test]
    fn json_round_trip() {
        let x = GradedPoly::var(xi_plus(1)).pow(2).unwrap().scale(&Scalar::i()).times_exp(&rat(1, 3))
            + GradedPoly::var(coupling(2)).scale(&Scalar::from_ratio(-1, 2));
        let j = x.to_json();
        assert_eq!(GradedPoly::from_json(&j).unwrap(), x);
    }
}
