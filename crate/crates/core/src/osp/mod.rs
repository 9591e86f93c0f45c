//! The Cartan–Weyl basis of osp(1|2l), realized by (1|2l) supermatrices,
//! with structure constants extracted by exact linear solve.

pub mod form;
pub mod relations;

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::exec::Execution;
use crate::linalg;
use crate::roots::{height, root_label, Root, RootSystem};
use crate::scalar::Scalar;
use crate::supermatrix::{koszul, SuperMatrix, SuperMatrixJson};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Cartan(usize),
    Root(Root),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub label: String,
    pub generator: Generator,
    pub parity: u8,
    pub matrix: SuperMatrix,
}

impl BasisElement {
    pub fn root(&self) -> Option<&Root> {
        match &self.generator {
            Generator::Root(r) => Some(r),
            Generator::Cartan(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.root().is_some_and(|r| height(r) > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.root().is_some_and(|r| height(r) < 0)
    }

    pub fn is_cartan(&self) -> bool {
        matches!(self.generator, Generator::Cartan(_))
    }

    /// Weight in the ε basis; zero for Cartan elements.
    pub fn weight(&self, l: usize) -> Root {
        self.root().cloned().unwrap_or_else(|| vec![0; l])
    }
}

/// Element of the algebra as sparse coordinates in the basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgElem(pub BTreeMap<usize, Scalar>);

impl AlgElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(i, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = self.0.entry(i).or_insert_with(Scalar::zero);
        *v += c;
        if v.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.0 {
            out.add_term(*i, c);
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
        Self(self.0.iter().map(|(i, v)| (*i, v * c)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &Scalar)> {
        self.0.iter()
    }
}

/// Realization of osp(1|2l) by labeled supermatrices.
#[derive(Clone, Debug)]
pub struct Basis {
    l: usize,
    elements: Vec<BasisElement>,
    by_label: HashMap<String, usize>,
    by_root: HashMap<Root, usize>,
    solver: SpanSolver,
}

fn e(l: usize, i: usize, j: usize) -> SuperMatrix {
    SuperMatrix::unit(l, i, j)
}

fn sum(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix {
    a.add(&b).expect("same rank")
}

fn diff(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix {
    a.sub(&b).expect("same rank")
}

/// Matrix of the root vector `X_α`, or `None` if `α` is not a root of B(0,l).
pub fn root_matrix(l: usize, r: &[i64]) -> Option<SuperMatrix> {
    let nz: Vec<(usize, i64)> = r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i + 1, *c)).collect();
    let m = match nz.as_slice() {
        [(i, 1)] => sum(e(l, *i, 0), e(l, 0, l + i)),
        [(i, -1)] => diff(e(l, 0, *i), e(l, l + i, 0)),
        [(i, 2)] => e(l, *i, l + i),
        [(i, -2)] => e(l, l + i, *i),
        [(i, 1), (j, 1)] => sum(e(l, *i, l + j), e(l, *j, l + i)),
        [(i, -1), (j, -1)] => sum(e(l, l + j, *i), e(l, l + i, *j)),
        [(i, 1), (j, -1)] => diff(e(l, *i, *j), e(l, l + j, l + i)),
        [(i, -1), (j, 1)] => diff(e(l, *j, *i), e(l, l + i, l + j)),
        _ => return None,
    };
    Some(m)
}

pub fn cartan_matrix_element(l: usize, i: usize) -> SuperMatrix {
    diff(e(l, i, i), e(l, l + i, l + i))
}

/// Cartan, then positive roots by height then lexicographically (larger leading
/// ε coefficient first), then the negatives in the mirrored order.
fn ordered_positive_roots(l: usize) -> Vec<(Root, u8)> {
    let rs = RootSystem::b0(l).expect("l >= 1");
    let mut pos = rs.positive();
    pos.sort_by(|(a, _), (b, _)| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
    pos
}

pub fn build_basis(l: usize) -> Result<Basis, AlgebraError> {
    if l == 0 {
        return Err(AlgebraError::ZeroRank);
    }
    let mut elements = Vec::new();
    for i in 1..=l {
        elements.push(BasisElement {
            label: format!("h{i}"),
            generator: Generator::Cartan(i),
            parity: 0,
            matrix: cartan_matrix_element(l, i),
        });
    }
    let pos = ordered_positive_roots(l);
    let neg: Vec<(Root, u8)> = pos.iter().map(|(r, p)| (r.iter().map(|c| -c).collect(), *p)).collect();
    for (r, p) in pos.into_iter().chain(neg) {
        let matrix = root_matrix(l, &r).expect("root of B(0,l)");
        elements.push(BasisElement {
            label: format!("X({})", root_label(&r)),
            generator: Generator::Root(r),
            parity: p,
            matrix,
        });
    }
    let by_label = elements.iter().enumerate().map(|(i, b)| (b.label.clone(), i)).collect();
    let by_root = elements.iter().enumerate().filter_map(|(i, b)| b.root().map(|r| (r.clone(), i))).collect();
    let solver = SpanSolver::new(&elements)?;
    Ok(Basis { l, elements, by_label, by_root, solver })
}

impl Basis {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, AlgebraError> {
        self.by_label.get(label).copied().ok_or_else(|| AlgebraError::UnknownLabel(label.into()))
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.by_root.get(r).copied()
    }

    pub fn h(&self, i: usize) -> usize {
        i - 1
    }

    /// Index of `X_α` for `α = Σ cᵢεᵢ` given as sparse `(i, cᵢ)` pairs.
    pub fn x(&self, terms: &[(usize, i64)]) -> usize {
        let mut r = vec![0; self.l];
        for &(i, c) in terms {
            r[i - 1] += c;
        }
        self.root_index(&r).unwrap_or_else(|| panic!("not a root: {r:?}"))
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.elements[i].parity
    }

    /// Matrix of a linear combination.
    pub fn realize(&self, x: &AlgElem) -> SuperMatrix {
        let mut m = SuperMatrix::zero(self.l);
        for (i, c) in x.iter() {
            m.add_scaled(&self.elements[*i].matrix, c);
        }
        m
    }

    /// Exact coordinates of a matrix in the basis, or `None` if outside the span.
    pub fn coordinates(&self, m: &SuperMatrix) -> Option<AlgElem> {
        let c = self.solver.solve(m);
        (self.realize(&c) == *m).then_some(c)
    }

    pub fn pretty(&self, x: &AlgElem) -> String {
        crate::scalar::linear_combination(x.iter().map(|(i, c)| (c, self.elements[*i].label.clone())), "*")
    }

    pub fn latex_label(&self, i: usize) -> String {
        let e = &self.elements[i];
        match e.root() {
            Some(r) => format!("X_{{{}}}", crate::roots::root_latex(r)),
            None => format!("h_{{{}}}", e.label.trim_start_matches('h')),
        }
    }

    pub fn latex(&self, x: &AlgElem) -> String {
        crate::scalar::linear_combination(x.iter().map(|(i, c)| (c, self.latex_label(*i))), " ")
    }
}

/// Left inverse of the basis restricted to a set of pivot entries.
#[derive(Clone, Debug)]
struct SpanSolver {
    rows: Vec<(usize, usize)>,
    inverse: Vec<Vec<(usize, BigRational)>>,
}

impl SpanSolver {
    fn new(elements: &[BasisElement]) -> Result<Self, AlgebraError> {
        let dim = elements.len();
        let size = elements[0].matrix.size();
        let entry = |b: &BasisElement, i: usize, j: usize| -> Result<BigRational, AlgebraError> {
            b.matrix.get(i, j).as_rational().cloned().ok_or(AlgebraError::DegenerateForm)
        };
        let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut rows = Vec::new();
        'outer: for i in 0..size {
            for j in 0..size {
                if rows.len() == dim {
                    break 'outer;
                }
                let mut v: Vec<BigRational> = elements.iter().map(|b| entry(b, i, j)).collect::<Result<_, _>>()?;
                for (p, row) in &echelon {
                    if !v[*p].is_zero() {
                        let f = &v[*p] / &row[*p];
                        for (a, b) in v.iter_mut().zip(row) {
                            *a -= &f * b;
                        }
                    }
                }
                if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                    echelon.push((p, v));
                    rows.push((i, j));
                }
            }
        }
        if rows.len() < dim {
            return Err(AlgebraError::DegenerateForm);
        }
        let square: linalg::QMatrix = rows
            .iter()
            .map(|&(i, j)| elements.iter().map(|b| entry(b, i, j)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let inv = linalg::inverse(&square).ok_or(AlgebraError::DegenerateForm)?;
        let inverse =
            inv.into_iter().map(|r| r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
        Ok(Self { rows, inverse })
    }

    fn solve(&self, m: &SuperMatrix) -> AlgElem {
        let rhs: Vec<&Scalar> = self.rows.iter().map(|&(i, j)| m.get(i, j)).collect();
        let mut out = AlgElem::zero();
        for (a, row) in self.inverse.iter().enumerate() {
            let mut c = Scalar::zero();
            for (k, x) in row {
                if !rhs[*k].is_zero() {
                    c += &rhs[*k].scale(x);
                }
            }
            out.add_term(a, &c);
        }
        out
    }
}

/// Basis plus the full table of brackets of basis pairs.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    basis: Basis,
    brackets: Vec<AlgElem>,
}

/// Brackets of every ordered basis pair, failing on the first pair that leaves the span.
pub fn structure_constants(basis: &Basis, exec: Execution) -> Result<Vec<AlgElem>, AlgebraError> {
    let dim = basis.dim();
    exec.map_range(dim * dim, |k| {
        let (a, b) = (k / dim, k % dim);
        let m = basis.get(a).matrix.super_bracket(&basis.get(b).matrix)?;
        basis
            .coordinates(&m)
            .ok_or_else(|| AlgebraError::SpanViolation(basis.get(a).label.clone(), basis.get(b).label.clone()))
    })
    .into_iter()
    .collect()
}

impl AlgebraTable {
    pub fn new(l: usize) -> Result<Self, AlgebraError> {
        Self::with_execution(l, Execution::default())
    }

    pub fn with_execution(l: usize, exec: Execution) -> Result<Self, AlgebraError> {
        let basis = build_basis(l)?;
        let brackets = structure_constants(&basis, exec)?;
        Ok(Self { basis, brackets })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn l(&self) -> usize {
        self.basis.l
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.basis.parity(i)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis.get(i).label
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &AlgElem {
        &self.brackets[a * self.dim() + b]
    }

    /// Bilinear extension of the tabulated bracket.
    pub fn bracket(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let cab = ca * cb;
                for (c, cc) in self.bracket_basis(*a, *b).iter() {
                    out.add_term(*c, &(&cab * cc));
                }
            }
        }
        out
    }

    /// `ad_x^n(y)`.
    pub fn ad_pow(&self, x: &AlgElem, n: usize, y: &AlgElem) -> AlgElem {
        (0..n).fold(y.clone(), |acc, _| self.bracket(x, &acc))
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn elem_parity(&self, x: &AlgElem) -> Option<u8> {
        let mut ps = x.iter().map(|(i, _)| self.parity(*i));
        match ps.next() {
            None => Some(0),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }

    /// Copy with the sign of one structure-constant entry flipped.
    pub fn perturbed(&self, a: usize, b: usize) -> Self {
        let mut t = self.clone();
        let k = a * self.dim() + b;
        if let Some((&c, v)) = t.brackets[k].0.iter().next() {
            let v = -v;
            t.brackets[k].0.insert(c, v);
        } else {
            t.brackets[k].add_term(0, &Scalar::one());
        }
        t
    }

    /// Brackets that leave the span of the even basis elements.
    pub fn even_part_closure_failures(&self) -> Vec<(usize, usize)> {
        let even: Vec<usize> = (0..self.dim()).filter(|&i| self.parity(i) == 0).collect();
        let mut out = Vec::new();
        for &a in &even {
            for &b in &even {
                if self.bracket_basis(a, b).iter().any(|(c, _)| self.parity(*c) == 1) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Graded Jacobi identity on one basis triple.
    pub fn jacobi_holds(&self, a: usize, b: usize, c: usize) -> bool {
        let (pa, pb, pc) = (self.parity(a), self.parity(b), self.parity(c));
        let x = AlgElem::basis(a);
        let y = AlgElem::basis(b);
        let z = AlgElem::basis(c);
        let t1 = self.bracket(&x, &self.bracket(&y, &z)).scale(&Scalar::from_int(koszul(pa, pc)));
        let t2 = self.bracket(&y, &self.bracket(&z, &x)).scale(&Scalar::from_int(koszul(pb, pa)));
        let t3 = self.bracket(&z, &self.bracket(&x, &y)).scale(&Scalar::from_int(koszul(pc, pb)));
        t1.add(&t2).add(&t3).is_zero()
    }

    pub fn to_json(&self) -> BasisDocument {
        let b = &self.basis;
        let mut brackets = Vec::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let r = self.bracket_basis(x, y);
                if r.is_zero() {
                    continue;
                }
                brackets.push(BracketJson {
                    a: b.get(x).label.clone(),
                    b: b.get(y).label.clone(),
                    result: r
                        .iter()
                        .map(|(c, v)| CoordJson { label: b.get(*c).label.clone(), scalar: v.clone() })
                        .collect(),
                });
            }
        }
        BasisDocument {
            schema: crate::json::SCHEMA.into(),
            l: self.l(),
            basis: b
                .elements()
                .iter()
                .map(|e| BasisEntryJson { label: e.label.clone(), parity: e.parity, matrix: e.matrix.to_json() })
                .collect(),
            brackets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordJson {
    pub label: String,
    pub scalar: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketJson {
    pub a: String,
    pub b: String,
    pub result: Vec<CoordJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntryJson {
    pub label: String,
    pub parity: u8,
    pub matrix: SuperMatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub schema: String,
    pub l: usize,
    pub basis: Vec<BasisEntryJson>,
    pub brackets: Vec<BracketJson>,
}

impl BasisDocument {
    /// Rebuild the table and check that the document matches it.
    pub fn validate(&self) -> Result<AlgebraTable, AlgebraError> {
        let t = AlgebraTable::new(self.l)?;
        let fresh = t.to_json();
        if fresh != *self {
            return Err(AlgebraError::UnknownLabel("document does not match the rebuilt table".into()));
        }
        for e in &self.basis {
            SuperMatrix::from_json(&e.matrix)?;
        }
        Ok(t)
    }
}
