//! Root systems B(0,l), C_l and BC_l in the orthonormal basis ε₁..ε_l.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, RootError};
use crate::linalg::{self, QMatrix};
use crate::scalar::{format_rational, rat};

pub type Root = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootType {
    B0,
    C,
    Bc,
}

impl FromStr for RootType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "b0" => Ok(RootType::B0),
            "c" => Ok(RootType::C),
            "bc" => Ok(RootType::Bc),
            other => Err(ParseError::Document(format!("unknown root type `{other}`"))),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::B0 => "b0",
            RootType::C => "c",
            RootType::Bc => "bc",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleRoot {
    pub vector: Root,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    l: usize,
    kind: RootType,
    simple: Vec<SimpleRoot>,
    positive_even: Vec<Root>,
    positive_odd: Vec<Root>,
}

pub fn eps(l: usize, i: usize) -> Root {
    let mut v = vec![0; l];
    v[i - 1] = 1;
    v
}

fn combo(l: usize, terms: &[(usize, i64)]) -> Root {
    let mut v = vec![0; l];
    for &(i, c) in terms {
        v[i - 1] += c;
    }
    v
}

/// Chain root `α_k = ε_{l+1-k} − ε_{l+2-k}`, `2 ≤ k ≤ l`.
pub fn chain_root(l: usize, k: usize) -> Root {
    combo(l, &[(l + 1 - k, 1), (l + 2 - k, -1)])
}

/// `{2εᵢ} ∪ {εᵢ ± εⱼ, i < j}` in a fixed order.
fn long_and_middle_roots(l: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 1..=l {
        out.push(combo(l, &[(i, 2)]));
    }
    for i in 1..=l {
        for j in i + 1..=l {
            out.push(combo(l, &[(i, 1), (j, -1)]));
            out.push(combo(l, &[(i, 1), (j, 1)]));
        }
    }
    out
}

fn short_roots(l: usize) -> Vec<Root> {
    (1..=l).map(|i| eps(l, i)).collect()
}

impl RootSystem {
    pub fn new(kind: RootType, l: usize) -> Result<Self, RootError> {
        match kind {
            RootType::B0 => Self::b0(l),
            RootType::C => Self::c(l),
            RootType::Bc => Self::bc(l),
        }
    }

    /// Roots of osp(1|2l): odd `εᵢ`, even `2εᵢ, εᵢ ± εⱼ`.
    pub fn b0(l: usize) -> Result<Self, RootError> {
        if l == 0 {
            return Err(RootError::ZeroRank);
        }
        let mut simple = vec![SimpleRoot { vector: eps(l, l), parity: 1 }];
        simple.extend((2..=l).map(|k| SimpleRoot { vector: chain_root(l, k), parity: 0 }));
        Ok(Self {
            l,
            kind: RootType::B0,
            simple,
            positive_even: long_and_middle_roots(l),
            positive_odd: short_roots(l),
        })
    }

    /// The even part sp(2l): simple roots `2ε_l` and the chain.
    pub fn c(l: usize) -> Result<Self, RootError> {
        if l == 0 {
            return Err(RootError::ZeroRank);
        }
        let mut simple = vec![SimpleRoot { vector: combo(l, &[(l, 2)]), parity: 0 }];
        simple.extend((2..=l).map(|k| SimpleRoot { vector: chain_root(l, k), parity: 0 }));
        Ok(Self { l, kind: RootType::C, simple, positive_even: long_and_middle_roots(l), positive_odd: Vec::new() })
    }

    /// Non-reduced BC_l with the fixed simple order `(ε_l, 2ε_l, α₂, …, α_l)`.
    pub fn bc(l: usize) -> Result<Self, RootError> {
        if l == 0 {
            return Err(RootError::ZeroRank);
        }
        let mut simple =
            vec![SimpleRoot { vector: eps(l, l), parity: 0 }, SimpleRoot { vector: combo(l, &[(l, 2)]), parity: 0 }];
        simple.extend((2..=l).map(|k| SimpleRoot { vector: chain_root(l, k), parity: 0 }));
        let mut positive_even = short_roots(l);
        positive_even.extend(long_and_middle_roots(l));
        Ok(Self { l, kind: RootType::Bc, simple, positive_even, positive_odd: Vec::new() })
    }

    /// A system given only by its simple roots; positive roots are left empty.
    pub fn from_simple(l: usize, kind: RootType, simple: Vec<SimpleRoot>) -> Result<Self, RootError> {
        if l == 0 {
            return Err(RootError::ZeroRank);
        }
        for s in &simple {
            if s.vector.len() != l {
                return Err(RootError::DimensionMismatch(s.vector.len(), l));
            }
            if s.vector.iter().all(|&c| c == 0) {
                return Err(RootError::ZeroRoot);
            }
        }
        Ok(Self { l, kind, simple, positive_even: Vec::new(), positive_odd: Vec::new() })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn simple(&self) -> &[SimpleRoot] {
        &self.simple
    }

    pub fn positive_even(&self) -> &[Root] {
        &self.positive_even
    }

    pub fn positive_odd(&self) -> &[Root] {
        &self.positive_odd
    }

    /// All positive roots with their parity, even roots first.
    pub fn positive(&self) -> Vec<(Root, u8)> {
        self.positive_even
            .iter()
            .map(|r| (r.clone(), 0))
            .chain(self.positive_odd.iter().map(|r| (r.clone(), 1)))
            .collect()
    }

    pub fn cartan_matrix(&self) -> QMatrix {
        self.simple
            .iter()
            .map(|a| {
                let aa = root_pairing(&a.vector, &a.vector);
                self.simple
                    .iter()
                    .map(|b| {
                        BigRational::from_integer((2 * root_pairing(&a.vector, &b.vector)).into())
                            / BigRational::from_integer(aa.into())
                    })
                    .collect()
            })
            .collect()
    }

    /// `½(Σ even positive − Σ odd positive)`, summed root by root.
    pub fn rho(&self) -> WeightVector {
        let mut acc = vec![BigRational::zero(); self.l];
        let half = rat(1, 2);
        for r in &self.positive_even {
            for (a, &c) in acc.iter_mut().zip(r) {
                *a += &half * BigRational::from_integer(c.into());
            }
        }
        for r in &self.positive_odd {
            for (a, &c) in acc.iter_mut().zip(r) {
                *a -= &half * BigRational::from_integer(c.into());
            }
        }
        WeightVector(acc)
    }

    /// Closed form of ρ for the three standard systems.
    pub fn rho_closed_form(&self) -> WeightVector {
        let offset = match self.kind {
            RootType::B0 => rat(1, 2),
            RootType::C => rat(1, 1),
            RootType::Bc => rat(3, 2),
        };
        WeightVector((1..=self.l).map(|i| BigRational::from_integer(((self.l - i) as i64).into()) + &offset).collect())
    }

    pub fn to_json(&self) -> RootsDocument {
        RootsDocument {
            schema: crate::json::SCHEMA.into(),
            kind: self.kind,
            l: self.l,
            simple: self
                .simple
                .iter()
                .map(|s| RootJson { root: s.vector.clone(), label: root_label(&s.vector), parity: s.parity })
                .collect(),
            positive: self
                .positive()
                .into_iter()
                .map(|(r, p)| RootJson { label: root_label(&r), root: r, parity: p })
                .collect(),
            cartan: self.cartan_matrix().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            rho: self.rho().0.iter().map(format_rational).collect(),
        }
    }

    pub fn latex(&self) -> String {
        let simple: Vec<String> = self.simple.iter().map(|s| root_latex(&s.vector)).collect();
        let rows: Vec<String> = self
            .cartan_matrix()
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" & "))
            .collect();
        format!("\\{{{}\\}}\n\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", simple.join(",\\ "), rows.join(" \\\\\n"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootJson {
    pub root: Root,
    pub label: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsDocument {
    pub schema: String,
    #[serde(rename = "type")]
    pub kind: RootType,
    pub l: usize,
    pub simple: Vec<RootJson>,
    pub positive: Vec<RootJson>,
    pub cartan: Vec<Vec<String>>,
    pub rho: Vec<String>,
}

pub fn root_pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Height with respect to the simple roots of B(0,l): `Σ cᵢ (l − i + 1)`.
pub fn height(r: &[i64]) -> i64 {
    let l = r.len() as i64;
    r.iter().enumerate().map(|(i, c)| c * (l - i as i64)).sum()
}

/// Text label such as `e1-e2`, `-2e3`, `e1+e2`.
pub fn root_label(r: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in r.iter().enumerate() {
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
        out.push_str(&format!("e{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn parse_root_label(s: &str, l: usize) -> Option<Root> {
    let mut v = vec![0i64; l];
    let bytes = s.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = 1;
        if bytes[pos] == b'-' {
            sign = -1;
            pos += 1;
        } else if bytes[pos] == b'+' {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: i64 = if start == pos { 1 } else { s[start..pos].parse().ok()? };
        if pos >= bytes.len() || bytes[pos] != b'e' {
            return None;
        }
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let idx: usize = s[start..pos].parse().ok()?;
        if idx == 0 || idx > l {
            return None;
        }
        v[idx - 1] += sign * coeff;
    }
    Some(v)
}

pub fn root_latex(r: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in r.iter().enumerate() {
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
        out.push_str(&format!("\\epsilon_{{{}}}", i + 1));
    }
    out
}

/// Rational weight in the ε basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<BigRational>);

impl WeightVector {
    pub fn zero(l: usize) -> Self {
        Self(vec![BigRational::zero(); l])
    }

    pub fn from_root(r: &[i64]) -> Self {
        Self(r.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn unit(l: usize, i: usize) -> Self {
        let mut v = Self::zero(l);
        v.0[i - 1] = BigRational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self, RootError> {
        self.check(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RootError> {
        self.check(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    fn check(&self, other: &Self) -> Result<(), RootError> {
        if self.dim() != other.dim() {
            return Err(RootError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// Euclidean pairing with `(εᵢ, εⱼ) = δᵢⱼ`.
pub fn weyl_pairing(u: &WeightVector, v: &WeightVector) -> Result<BigRational, RootError> {
    u.check(v)?;
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

pub fn det(m: &QMatrix) -> BigRational {
    linalg::det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;

    #[test]
    fn b0_rank_one() {
        let rs = RootSystem::b0(1).unwrap();
        assert_eq!(rs.cartan_matrix(), from_ints(&[vec![2]]));
        assert_eq!(rs.rho(), WeightVector(vec![rat(1, 2)]));
    }

    #[test]
    fn root_counts() {
        for l in 1..6 {
            let rs = RootSystem::b0(l).unwrap();
            assert_eq!(rs.positive_even().len(), l * l);
            assert_eq!(rs.positive_odd().len(), l);
        }
    }

    #[test]
    fn labels_round_trip() {
        for r in [vec![1, -1, 0], vec![0, 0, -2], vec![-1, 0, -1], vec![0, 1, 0]] {
            assert_eq!(parse_root_label(&root_label(&r), 3), Some(r));
        }
        assert_eq!(root_label(&[1, -1]), "e1-e2");
        assert_eq!(root_label(&[0, -2]), "-2e2");
    }

    #[test]
    fn pairing_examples() {
        let e1 = WeightVector::unit(1, 1);
        assert_eq!(weyl_pairing(&e1, &e1).unwrap(), rat(1, 1));
        let two = e1.scale(&rat(2, 1));
        assert_eq!(weyl_pairing(&two, &two).unwrap(), rat(4, 1));
        assert!(weyl_pairing(&e1, &WeightVector::zero(2)).is_err());
    }

    #[test]
    fn heights_of_simple_roots_are_one() {
        for l in 1..6 {
            for s in RootSystem::b0(l).unwrap().simple() {
                assert_eq!(height(&s.vector), 1);
            }
        }
    }
}
