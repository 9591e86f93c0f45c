//! Universal enveloping algebra of osp(1|2l): PBW straightening, the quadratic
//! Casimir, centrality and highest-weight evaluation.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::UeaError;
use crate::exec::Execution;
use crate::osp::form::InvariantForm;
use crate::osp::{AlgElem, AlgebraTable, Generator};
use crate::poly::{lambda, GradedPoly, Monomial};
use crate::report::FamilyReport;
use crate::roots::{height, root_pairing, RootSystem, WeightVector};
use crate::scalar::{linear_combination, rat, Scalar};
use crate::supermatrix::{koszul, SuperMatrix};

pub type Word = Vec<usize>;

/// Linear combination of words in basis indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UeaElement {
    terms: BTreeMap<Word, Scalar>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), Scalar::one())
    }

    pub fn generator(i: usize) -> Self {
        Self::word(vec![i], Scalar::one())
    }

    pub fn word(w: Word, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &c);
        e
    }

    pub fn from_alg(x: &AlgElem) -> Self {
        let mut e = Self::zero();
        for (i, c) in x.iter() {
            e.add_term(vec![*i], c);
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Concatenation product, not reordered.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, &(ca * cb));
            }
        }
        out
    }
}

/// Rewriting context: a table together with its PBW order.
#[derive(Clone, Debug)]
pub struct Uea<'a> {
    table: &'a AlgebraTable,
    rank: Vec<usize>,
}

impl<'a> Uea<'a> {
    /// Negative roots by decreasing height of their positive partner, then the
    /// Cartan elements, then positive roots by increasing height.
    pub fn new(table: &'a AlgebraTable) -> Self {
        let b = table.basis();
        let dim = table.dim();
        let mut negatives: Vec<usize> = (0..dim).filter(|&i| b.get(i).is_negative()).collect();
        let cartan: Vec<usize> = (0..dim).filter(|&i| b.get(i).is_cartan()).collect();
        let mut positives: Vec<usize> = (0..dim).filter(|&i| b.get(i).is_positive()).collect();
        let key = |i: &usize| {
            let r = b.get(*i).root().expect("root").clone();
            let pos: Vec<i64> = r.iter().map(|c| c.abs()).collect();
            (height(&pos), std::cmp::Reverse(if height(&r) > 0 { r.clone() } else { r.iter().map(|c| -c).collect() }))
        };
        negatives.sort_by_key(|i| std::cmp::Reverse(key(i)));
        positives.sort_by_key(key);
        let mut rank = vec![0; dim];
        for (k, i) in negatives.iter().chain(&cartan).chain(&positives).enumerate() {
            rank[*i] = k;
        }
        Self { table, rank }
    }

    pub fn table(&self) -> &AlgebraTable {
        self.table
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    fn word_parity(&self, w: &[usize]) -> u8 {
        w.iter().map(|&i| self.table.parity(i)).sum::<u8>() % 2
    }

    /// Parity of a homogeneous element; `None` if mixed.
    pub fn parity(&self, e: &UeaElement) -> Option<u8> {
        let mut ps = e.terms().map(|(w, _)| self.word_parity(w));
        match ps.next() {
            None => Some(0),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }

    fn first_violation(&self, w: &[usize]) -> Option<usize> {
        w.windows(2).position(|p| self.rank[p[0]] > self.rank[p[1]] || (p[0] == p[1] && self.table.parity(p[0]) == 1))
    }

    pub fn is_normal(&self, e: &UeaElement) -> bool {
        e.terms().all(|(w, _)| self.first_violation(w).is_none())
    }

    /// Straighten with `xy = (−1)^{p(x)p(y)} yx + [x,y]` and `xx = ½[x,x]` for odd `x`.
    pub fn normal_order(&self, e: &UeaElement) -> UeaElement {
        let mut pending = e.terms.clone();
        let mut out = UeaElement::zero();
        while let Some((w, c)) = pending.pop_last() {
            let Some(k) = self.first_violation(&w) else {
                out.add_term(w, &c);
                continue;
            };
            let (x, y) = (w[k], w[k + 1]);
            let mut push = |word: Word, coeff: Scalar| {
                if coeff.is_zero() {
                    return;
                }
                let v = pending.entry(word.clone()).or_insert_with(Scalar::zero);
                *v += &coeff;
                if v.is_zero() {
                    pending.remove(&word);
                }
            };
            let splice = |mid: &[usize]| -> Word {
                let mut out = w[..k].to_vec();
                out.extend_from_slice(mid);
                out.extend_from_slice(&w[k + 2..]);
                out
            };
            let br = self.table.bracket_basis(x, y);
            if x == y {
                let half = Scalar::from_ratio(1, 2);
                for (z, cz) in br.iter() {
                    push(splice(&[*z]), &(&c * cz) * &half);
                }
            } else {
                let s = koszul(self.table.parity(x), self.table.parity(y));
                push(splice(&[y, x]), c.clone() * Scalar::from_int(s));
                for (z, cz) in br.iter() {
                    push(splice(&[*z]), &c * cz);
                }
            }
        }
        out
    }

    pub fn product(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        self.normal_order(&a.mul(b))
    }

    /// Normal-ordered super commutator of homogeneous elements.
    pub fn supercommutator(&self, a: &UeaElement, b: &UeaElement) -> Option<UeaElement> {
        let s = koszul(self.parity(a)?, self.parity(b)?);
        Some(self.normal_order(&a.mul(b).sub(&b.mul(a).scale(&Scalar::from_int(s)))))
    }

    /// `Σ_a X^a X_a` from the dual basis of the invariant form.
    pub fn casimir(&self, form: &InvariantForm) -> Result<UeaElement, UeaError> {
        let dual = form.dual_basis()?;
        let mut c = UeaElement::zero();
        for (a, xa) in dual.iter().enumerate() {
            for (b, coeff) in xa.iter() {
                c.add_term(vec![*b, a], coeff);
            }
        }
        Ok(c)
    }

    fn root_gen(&self, r: &[i64]) -> usize {
        self.table.basis().root_index(r).expect("root")
    }

    fn neg(r: &[i64]) -> Vec<i64> {
        r.iter().map(|c| -c).collect()
    }

    /// `Σ_i (h_i² − X_{εi}X_{−εi} + X_{−εi}X_{εi}) + Σ_{α even} ((α,α)/2)(X_αX_{−α} + X_{−α}X_α)`.
    pub fn casimir_closed(&self) -> UeaElement {
        let l = self.table.l();
        let b = self.table.basis();
        let mut c = UeaElement::zero();
        for i in 1..=l {
            let (h, xp, xm) = (b.h(i), b.x(&[(i, 1)]), b.x(&[(i, -1)]));
            c.add_term(vec![h, h], &Scalar::one());
            c.add_term(vec![xp, xm], &Scalar::from_int(-1));
            c.add_term(vec![xm, xp], &Scalar::one());
        }
        for a in RootSystem::b0(l).expect("l >= 1").positive_even() {
            let f = Scalar::from_ratio(root_pairing(a, a), 2);
            let (p, m) = (self.root_gen(a), self.root_gen(&Self::neg(a)));
            c.add_term(vec![p, m], &f);
            c.add_term(vec![m, p], &f);
        }
        c
    }

    /// The same element in the matrix-adapted aliases `a_ij, b_ij, c_ij, x_i, y_i`.
    pub fn casimir_closed_abc(&self) -> UeaElement {
        let l = self.table.l();
        let b = self.table.basis();
        let a = |i: usize, j: usize| if i == j { b.h(i) } else { b.x(&[(i, 1), (j, -1)]) };
        let bb = |i: usize, j: usize| if i == j { b.x(&[(i, 2)]) } else { b.x(&[(i, 1), (j, 1)]) };
        let cc = |i: usize, j: usize| if i == j { b.x(&[(i, -2)]) } else { b.x(&[(i, -1), (j, -1)]) };
        let x = |i: usize| b.x(&[(i, -1)]);
        let y = |i: usize| b.x(&[(i, 1)]);
        let one = Scalar::one();
        let two = Scalar::from_int(2);
        let mut c = UeaElement::zero();
        for i in 1..=l {
            c.add_term(vec![a(i, i), a(i, i)], &one);
            c.add_term(vec![x(i), y(i)], &one);
            c.add_term(vec![y(i), x(i)], &-one.clone());
            c.add_term(vec![cc(i, i), bb(i, i)], &two);
            c.add_term(vec![bb(i, i), cc(i, i)], &two);
            for j in i + 1..=l {
                c.add_term(vec![a(i, j), a(j, i)], &one);
                c.add_term(vec![a(j, i), a(i, j)], &one);
                c.add_term(vec![bb(i, j), cc(i, j)], &one);
                c.add_term(vec![cc(i, j), bb(i, j)], &one);
            }
        }
        c
    }

    /// `Σ_i (a_ii² − a_ii + 2X_{−εi}X_{εi}) + Σ_{α even} ((α,α)/2)(h_{α∨} + 2X_{−α}X_α)`.
    pub fn casimir_reordered(&self) -> UeaElement {
        let l = self.table.l();
        let b = self.table.basis();
        let mut c = UeaElement::zero();
        for i in 1..=l {
            c.add_term(vec![b.h(i), b.h(i)], &Scalar::one());
            c.add_term(vec![b.h(i)], &Scalar::from_int(-1));
            c.add_term(vec![b.x(&[(i, -1)]), b.x(&[(i, 1)])], &Scalar::from_int(2));
        }
        for a in RootSystem::b0(l).expect("l >= 1").positive_even() {
            let aa = root_pairing(a, a);
            let f = Scalar::from_ratio(aa, 2);
            for (i, &ci) in a.iter().enumerate() {
                c.add_term(vec![b.h(i + 1)], &(&f * &Scalar::from_ratio(2 * ci, aa)));
            }
            c.add_term(vec![self.root_gen(&Self::neg(a)), self.root_gen(a)], &(&f * &Scalar::from_int(2)));
        }
        c
    }

    /// `Σ_i (a_ii² + 2ρ(εi)a_ii + 2X_{−εi}X_{εi}) + Σ_{α even} (α,α) X_{−α}X_α`.
    pub fn casimir_normal_form(&self) -> UeaElement {
        let l = self.table.l();
        let b = self.table.basis();
        let rs = RootSystem::b0(l).expect("l >= 1");
        let rho = rs.rho();
        let mut c = UeaElement::zero();
        for i in 1..=l {
            c.add_term(vec![b.h(i), b.h(i)], &Scalar::one());
            c.add_term(vec![b.h(i)], &Scalar::from_rational(&rho.0[i - 1] * rat(2, 1)));
            c.add_term(vec![b.x(&[(i, -1)]), b.x(&[(i, 1)])], &Scalar::from_int(2));
        }
        for a in rs.positive_even() {
            c.add_term(vec![self.root_gen(&Self::neg(a)), self.root_gen(a)], &Scalar::from_int(root_pairing(a, a)));
        }
        c
    }

    /// `[e, x] = 0` for every basis generator.
    pub fn check_central(&self, e: &UeaElement, exec: Execution) -> FamilyReport {
        let mut rep = FamilyReport::new("centrality", "Casimir is central");
        let dim = self.table.dim();
        let bad = exec.map_range(dim, |i| {
            let x = UeaElement::generator(i);
            match self.supercommutator(e, &x) {
                Some(r) if r.is_zero() => None,
                Some(r) => Some(format!("[C, {}] has {} surviving terms", self.table.label(i), r.num_terms())),
                None => Some("element is not parity-homogeneous".into()),
            }
        });
        rep.checked = dim;
        rep.failures = bad.into_iter().flatten().collect();
        rep
    }

    /// Value on a highest-weight vector as a polynomial in `λ₁..λ_l`.
    pub fn hw_value(&self, e: &UeaElement) -> Result<GradedPoly, UeaError> {
        if !self.is_normal(e) {
            return Err(UeaError::NotNormalOrdered);
        }
        let b = self.table.basis();
        let mut out = GradedPoly::zero();
        for (w, c) in e.terms() {
            if w.iter().any(|&i| b.get(i).is_positive()) {
                continue;
            }
            if w.iter().any(|&i| b.get(i).is_negative()) {
                return Err(UeaError::OffDiagonal(self.show_word(w)));
            }
            let mut m = Monomial::one();
            for &i in w {
                let Generator::Cartan(k) = b.get(i).generator else { unreachable!() };
                m = m.mul(&Monomial::var(lambda(k), 1)).expect("even symbols");
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Value on a highest-weight vector of a given rational weight.
    pub fn hw_value_at(&self, e: &UeaElement, weight: &WeightVector) -> Result<Scalar, UeaError> {
        let mut p = self.hw_value(e)?;
        for (i, v) in weight.0.iter().enumerate() {
            p = p.substitute(lambda(i + 1).name(), &GradedPoly::from_rational(v.clone())).expect("even substitution");
        }
        Ok(p.as_constant().expect("all weights substituted"))
    }

    /// Image in the defining (1|2l) representation.
    pub fn realize(&self, e: &UeaElement) -> SuperMatrix {
        let b = self.table.basis();
        let l = self.table.l();
        let mut out = SuperMatrix::zero(l);
        for (w, c) in e.terms() {
            let mut m = SuperMatrix::identity(l);
            for &i in w {
                m = m.mul(&b.get(i).matrix).expect("same rank");
            }
            out.add_scaled(&m, c);
        }
        out
    }

    pub fn show_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&i| self.table.label(i)).collect::<Vec<_>>().join(" ")
    }

    pub fn pretty(&self, e: &UeaElement) -> String {
        linear_combination(
            e.terms().map(|(w, c)| (c, if w.is_empty() { String::new() } else { self.show_word(w) })),
            " ",
        )
    }

    pub fn latex(&self, e: &UeaElement) -> String {
        let b = self.table.basis();
        let show = |w: &Word| w.iter().map(|&i| b.latex_label(i)).collect::<Vec<_>>().join(" ");
        linear_combination(e.terms().map(|(w, c)| (c, show(w))), " ")
    }

    pub fn to_json(&self, e: &UeaElement) -> Vec<UeaTermJson> {
        e.terms()
            .map(|(w, c)| UeaTermJson {
                coeff: c.clone(),
                word: w.iter().map(|&i| self.table.label(i).to_string()).collect(),
            })
            .collect()
    }

    pub fn from_json(&self, terms: &[UeaTermJson]) -> Result<UeaElement, UeaError> {
        let b = self.table.basis();
        let mut e = UeaElement::zero();
        for t in terms {
            let w = t
                .word
                .iter()
                .map(|s| b.index_of(s).map_err(|_| UeaError::UnknownLabel(s.clone())))
                .collect::<Result<Word, _>>()?;
            e.add_term(w, &t.coeff);
        }
        Ok(e)
    }
}

/// `(λ, λ+2ρ)` as a polynomial in `λ₁..λ_l`.
pub fn casimir_eigenvalue_poly(rho: &WeightVector) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for (i, r) in rho.0.iter().enumerate() {
        let li = lambda(i + 1);
        out.add_term(Monomial::var(li.clone(), 2), &Scalar::one());
        out.add_term(Monomial::var(li, 1), &Scalar::from_rational(r * BigRational::from_integer(2.into())));
    }
    out
}

/// Scalar by which the Casimir acts in the defining representation.
pub fn tautological_casimir_scalar(uea: &Uea<'_>, casimir: &UeaElement) -> Result<Scalar, UeaError> {
    uea.realize(casimir).as_scalar_multiple().ok_or(UeaError::NotScalarMatrix)
}

/// `e₁` is a highest-weight vector of weight `ε₁` in the defining representation.
pub fn tautological_highest_weight_holds(table: &AlgebraTable) -> bool {
    let b = table.basis();
    b.elements().iter().all(|el| {
        let col: Vec<&Scalar> = (0..el.matrix.size()).map(|r| el.matrix.get(r, 1)).collect();
        match &el.generator {
            Generator::Cartan(i) => col.iter().enumerate().all(|(r, v)| {
                let want = if r == 1 && *i == 1 { Scalar::one() } else { Scalar::zero() };
                **v == want
            }),
            Generator::Root(r) if height(r) > 0 => col.iter().all(|v| v.is_zero()),
            Generator::Root(_) => true,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UeaTermJson {
    pub coeff: Scalar,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasimirDocument {
    pub schema: String,
    pub l: usize,
    pub form: String,
    pub terms: Vec<UeaTermJson>,
}
