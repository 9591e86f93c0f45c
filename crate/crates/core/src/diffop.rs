//! Differential operators `Σ c · e^{n·q} · ∂^m` with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::poly::{GradedPoly, PolyTermJson};
use crate::roots::WeightVector;
use crate::scalar::Scalar;

/// Key of a term: exponent vector `n` and derivative multi-index `m`.
pub type TermKey = (Vec<i64>, Vec<u32>);

#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    l: usize,
    terms: BTreeMap<TermKey, GradedPoly>,
}

impl DiffOperator {
    pub fn zero(l: usize) -> Self {
        Self { l, terms: BTreeMap::new() }
    }

    pub fn identity(l: usize) -> Self {
        let mut d = Self::zero(l);
        d.add_term(vec![0; l], vec![0; l], GradedPoly::one());
        d
    }

    /// `Σ ∂²/∂qᵢ²`.
    pub fn laplacian(l: usize) -> Self {
        let mut d = Self::zero(l);
        for i in 0..l {
            let mut m = vec![0; l];
            m[i] = 2;
            d.add_term(vec![0; l], m, GradedPoly::one());
        }
        d
    }

    /// `c · e^{n·q}` with no derivatives.
    pub fn potential(l: usize, n: Vec<i64>, c: GradedPoly) -> Self {
        let mut d = Self::zero(l);
        d.add_term(n, vec![0; l], c);
        d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &GradedPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, n: &[i64], m: &[u32]) -> GradedPoly {
        self.terms.get(&(n.to_vec(), m.to_vec())).cloned().unwrap_or_else(GradedPoly::zero)
    }

    /// Merge into an existing key; zero results are dropped.
    pub fn add_term(&mut self, n: Vec<i64>, m: Vec<u32>, c: GradedPoly) {
        assert_eq!(n.len(), self.l);
        assert_eq!(m.len(), self.l);
        if c.is_zero() {
            return;
        }
        let key = (n, m);
        let merged = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((n, m), c) in &other.terms {
            out.add_term(n.clone(), m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&GradedPoly) -> GradedPoly) -> Self {
        let mut out = Self::zero(self.l);
        for ((n, m), c) in &self.terms {
            out.add_term(n.clone(), m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<E>(
        &self,
        mut f: impl FnMut(&TermKey, &GradedPoly) -> Result<GradedPoly, E>,
    ) -> Result<Self, E> {
        let mut out = Self::zero(self.l);
        for (k, c) in &self.terms {
            out.add_term(k.0.clone(), k.1.clone(), f(k, c)?);
        }
        Ok(out)
    }

    /// `e^{−ρ(q)} ∘ D ∘ e^{ρ(q)}`: every `∂ᵢ` becomes `∂ᵢ + ρᵢ`.
    pub fn conjugate_by_rho(&self, rho: &WeightVector) -> Self {
        let mut out = Self::zero(self.l);
        for ((n, m), c) in &self.terms {
            let mut expanded: Vec<(Vec<u32>, BigRational)> = vec![(vec![0; self.l], BigRational::one())];
            for i in 0..self.l {
                let mut next = Vec::new();
                for (mm, coeff) in &expanded {
                    for (k, binom) in binomials(m[i]).into_iter().enumerate() {
                        let mut m2 = mm.clone();
                        m2[i] = k as u32;
                        let power = pow(&rho.0[i], m[i] - k as u32);
                        next.push((m2, coeff * BigRational::from_integer(binom.into()) * power));
                    }
                }
                expanded = next;
            }
            for (m2, coeff) in expanded {
                if !coeff.is_zero() {
                    out.add_term(n.clone(), m2, c.scale(&Scalar::from_rational(coeff)));
                }
            }
        }
        out
    }

    /// Largest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, m)| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> OperatorJson {
        let name = |i: usize| format!("q{}", i + 1);
        OperatorJson {
            terms: self
                .terms
                .iter()
                .map(|((n, m), c)| OperatorTermJson {
                    coeff: c.to_json(),
                    exp: n.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (name(i), *v)).collect(),
                    deriv: m.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (name(i), *v)).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(l: usize, j: &OperatorJson) -> Result<Self, ParseError> {
        let index = |s: &str| -> Result<usize, ParseError> {
            s.strip_prefix('q')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= l)
                .map(|i| i - 1)
                .ok_or_else(|| ParseError::Document(format!("bad variable `{s}`")))
        };
        let mut out = Self::zero(l);
        for t in &j.terms {
            let mut n = vec![0; l];
            let mut m = vec![0; l];
            for (k, v) in &t.exp {
                n[index(k)?] = *v;
            }
            for (k, v) in &t.deriv {
                m[index(k)?] = *v;
            }
            out.add_term(n, m, GradedPoly::from_json(&t.coeff)?);
        }
        Ok(out)
    }

    fn render(&self, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for ((n, m), c) in &self.terms {
            let mut factors = Vec::new();
            let unit = c.as_constant().filter(|s| s.is_one() || (-s).is_one());
            let neg = c.num_terms() == 1 && c.terms().all(|(_, s)| s.is_negative_rational());
            let mag = if neg { c.scale(&Scalar::from_int(-1)) } else { c.clone() };
            let operator_part = n.iter().any(|v| *v != 0) || m.iter().any(|v| *v != 0);
            if unit.is_none() || !operator_part {
                let coeff = if latex { mag.latex() } else { mag.pretty() };
                factors.push(if mag.num_terms() == 1 { coeff } else { format!("({coeff})") });
            }
            if n.iter().any(|v| *v != 0) {
                let lin = linear_form(n, latex);
                factors.push(if latex { format!("e^{{{lin}}}") } else { format!("e^({lin})") });
            }
            for (i, k) in m.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                factors.push(match (latex, *k) {
                    (true, 1) => format!("\\partial_{{{}}}", i + 1),
                    (true, k) => format!("\\partial_{{{}}}^{{{k}}}", i + 1),
                    (false, 1) => format!("d{}", i + 1),
                    (false, k) => format!("d{}^{k}", i + 1),
                });
            }
            let body = factors.join(if latex { " " } else { "*" });
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    pub fn pretty(&self) -> String {
        self.render(false)
    }

    pub fn latex(&self) -> String {
        self.render(true)
    }
}

fn linear_form(n: &[i64], latex: bool) -> String {
    let mut out = String::new();
    for (i, &c) in n.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&if latex { format!("q_{{{}}}", i + 1) } else { format!("q{}", i + 1) });
    }
    out
}

fn binomials(n: u32) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..n {
        let mut next = vec![1i64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOperator(l={}): {}", self.l, self.pretty())
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorTermJson {
    pub coeff: Vec<PolyTermJson>,
    pub exp: BTreeMap<String, i64>,
    pub deriv: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub terms: Vec<OperatorTermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn d(l: usize, i: usize, k: u32) -> DiffOperator {
        let mut m = vec![0; l];
        m[i] = k;
        let mut out = DiffOperator::zero(l);
        out.add_term(vec![0; l], m, GradedPoly::one());
        out
    }

    #[test]
    fn first_order_conjugation() {
        let rho = WeightVector(vec![rat(3, 2)]);
        let got = d(1, 0, 1).conjugate_by_rho(&rho);
        let want = d(1, 0, 1).add(&DiffOperator::identity(1).scale(&Scalar::from_ratio(3, 2)));
        assert_eq!(got, want);
    }

    #[test]
    fn second_order_conjugation() {
        let rho = WeightVector(vec![rat(1, 2)]);
        let got = d(1, 0, 2).conjugate_by_rho(&rho);
        let want = d(1, 0, 2).add(&d(1, 0, 1)).add(&DiffOperator::identity(1).scale(&Scalar::from_ratio(1, 4)));
        assert_eq!(got, want);
    }

    #[test]
    fn zero_rho_is_identity_map() {
        let op = DiffOperator::laplacian(2).add(&DiffOperator::potential(2, vec![1, -1], GradedPoly::from_int(2)));
        assert_eq!(op.conjugate_by_rho(&WeightVector::zero(2)), op);
    }

    #[test]
    fn terms_merge_and_cancel() {
        let mut op = DiffOperator::laplacian(1);
        op = op.sub(&DiffOperator::laplacian(1));
        assert!(op.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let op = DiffOperator::laplacian(2).scale(&Scalar::from_int(-1)).add(&DiffOperator::potential(
            2,
            vec![0, 2],
            GradedPoly::from_int(4),
        ));
        let j = op.to_json();
        assert_eq!(DiffOperator::from_json(2, &j).unwrap(), op);
    }
}
