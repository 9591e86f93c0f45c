//! The invariant form `(X|Y) = ½ str(XY)` and the dual basis.

use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgElem, AlgebraTable, Basis, Generator};
use crate::error::AlgebraError;
use crate::exec::Execution;
use crate::linalg::{self, QMatrix};
use crate::report::FamilyReport;
use crate::roots::{height, root_pairing};
use crate::scalar::{rat, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm {
    gram: QMatrix,
}

pub fn invariant_form(basis: &Basis) -> Result<InvariantForm, AlgebraError> {
    let dim = basis.dim();
    let half = rat(1, 2);
    let mut gram = vec![vec![BigRational::zero(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let p = basis.get(a).matrix.mul(&basis.get(b).matrix)?;
            let s = p.supertrace();
            let r = s.as_rational().ok_or(AlgebraError::DegenerateForm)?;
            gram[a][b] = r * &half;
        }
    }
    Ok(InvariantForm { gram })
}

impl InvariantForm {
    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn value(&self, a: usize, b: usize) -> &BigRational {
        &self.gram[a][b]
    }

    pub fn eval(&self, x: &AlgElem, y: &AlgElem) -> Scalar {
        let mut s = Scalar::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let g = &self.gram[*a][*b];
                if !g.is_zero() {
                    s += &(ca * cb).scale(g);
                }
            }
        }
        s
    }

    /// `X^b` with `(X_a | X^b) = δ_ab`.
    pub fn dual_basis(&self) -> Result<Vec<AlgElem>, AlgebraError> {
        let inv = linalg::inverse(&self.gram).ok_or(AlgebraError::DegenerateForm)?;
        let dim = self.gram.len();
        Ok((0..dim)
            .map(|b| {
                let mut x = AlgElem::zero();
                for (c, row) in inv.iter().enumerate() {
                    x.add_term(c, &Scalar::from_rational(row[b].clone()));
                }
                x
            })
            .collect())
    }
}

/// Expected table: `(h_i|h_j) = δ_ij`, `(X_α|X_{−α}) = 2/(α,α)` for even and `1`
/// for odd positive `α`; the reversed order follows from supersymmetry.
pub fn expected_value(basis: &Basis, a: usize, b: usize) -> BigRational {
    let (ea, eb) = (basis.get(a), basis.get(b));
    match (&ea.generator, &eb.generator) {
        (Generator::Cartan(i), Generator::Cartan(j)) => rat(i64::from(i == j), 1),
        (Generator::Root(r), Generator::Root(s)) if r.iter().zip(s).all(|(x, y)| x == &-y) => {
            let pos = if height(r) > 0 { r } else { s };
            let base = if ea.parity == 1 { rat(1, 1) } else { rat(2, root_pairing(pos, pos)) };
            if height(r) < 0 && ea.parity == 1 {
                -base
            } else {
                base
            }
        }
        _ => BigRational::zero(),
    }
}

pub fn check_table(t: &AlgebraTable, f: &InvariantForm) -> FamilyReport {
    let b = t.basis();
    let mut rep = FamilyReport::new("ISP", "invariant form table");
    for x in 0..t.dim() {
        for y in 0..t.dim() {
            let want = expected_value(b, x, y);
            rep.record(*f.value(x, y) == want, || {
                format!("({}|{}) = {}, expected {}", t.label(x), t.label(y), f.value(x, y), want)
            });
        }
    }
    rep
}

/// `(X|Y) = 0` whenever the parities differ.
pub fn check_even(t: &AlgebraTable, f: &InvariantForm) -> FamilyReport {
    let mut rep = FamilyReport::new("form-even", "form pairs only equal parities");
    for x in 0..t.dim() {
        for y in 0..t.dim() {
            if t.parity(x) != t.parity(y) {
                rep.record(f.value(x, y).is_zero(), || format!("({}|{})", t.label(x), t.label(y)));
            }
        }
    }
    rep
}

/// `([X,Y]|Z) = (X|[Y,Z])` on all basis triples.
pub fn check_invariance(t: &AlgebraTable, f: &InvariantForm, exec: Execution) -> FamilyReport {
    let dim = t.dim();
    let bad = exec.map_range(dim * dim * dim, |k| {
        let (x, y, z) = (k / (dim * dim), (k / dim) % dim, k % dim);
        let lhs = f.eval(t.bracket_basis(x, y), &AlgElem::basis(z));
        let rhs = f.eval(&AlgElem::basis(x), t.bracket_basis(y, z));
        (lhs != rhs).then(|| format!("([{0},{1}]|{2}) != ({0}|[{1},{2}])", t.label(x), t.label(y), t.label(z)))
    });
    let mut rep = FamilyReport::new("ISP-invariance", "invariance of the form");
    rep.checked = dim * dim * dim;
    rep.failures = bad.into_iter().flatten().collect();
    rep
}

/// Dual basis: `h^i = h_i`, `X^α = ((α,α)/2) X_{−α}` for even and `X^β = X_{−β}`
/// for odd positive roots, and `(X_a|X^b) = δ_ab` throughout.
pub fn check_dual(t: &AlgebraTable, f: &InvariantForm, dual: &[AlgElem]) -> FamilyReport {
    let b = t.basis();
    let mut rep = FamilyReport::new("dual-basis", "dual basis of the invariant form");
    for x in 0..t.dim() {
        for y in 0..t.dim() {
            let v = f.eval(&AlgElem::basis(x), &dual[y]);
            let want = Scalar::from_int(i64::from(x == y));
            rep.record(v == want, || format!("({}|{}^) = {}", t.label(x), t.label(y), v.pretty()));
        }
    }
    for (i, el) in b.elements().iter().enumerate() {
        let want = match &el.generator {
            Generator::Cartan(_) => AlgElem::basis(i),
            Generator::Root(r) if height(r) > 0 => {
                let neg: Vec<i64> = r.iter().map(|c| -c).collect();
                let j = b.root_index(&neg).expect("negative root");
                let c = if el.parity == 1 { rat(1, 1) } else { rat(root_pairing(r, r), 2) };
                AlgElem::term(j, Scalar::from_rational(c))
            }
            Generator::Root(_) => continue,
        };
        rep.record(dual[i] == want, || {
            format!("dual of {} is {}, expected {}", el.label, b.pretty(&dual[i]), b.pretty(&want))
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_values() {
        let t = AlgebraTable::new(1).unwrap();
        let f = invariant_form(t.basis()).unwrap();
        let b = t.basis();
        assert_eq!(*f.value(b.h(1), b.h(1)), rat(1, 1));
        assert_eq!(*f.value(b.x(&[(1, 1)]), b.x(&[(1, -1)])), rat(1, 1));
        assert_eq!(*f.value(b.x(&[(1, -1)]), b.x(&[(1, 1)])), rat(-1, 1));
        assert_eq!(*f.value(b.x(&[(1, 2)]), b.x(&[(1, -2)])), rat(1, 2));
    }

    #[test]
    fn rank_two_suite() {
        let t = AlgebraTable::new(2).unwrap();
        let f = invariant_form(t.basis()).unwrap();
        let dual = f.dual_basis().unwrap();
        for rep in [
            check_table(&t, &f),
            check_even(&t, &f),
            check_invariance(&t, &f, Execution::Sequential),
            check_dual(&t, &f, &dual),
        ] {
            assert!(rep.passed(), "{}: {:?}", rep.family, rep.failures);
        }
    }
}
