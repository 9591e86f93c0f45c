//! (1|2l)-graded matrices realizing gl(1|2l).
//!
//! Index 0 is the odd basis vector, indices `1..=2l` are even. A matrix is
//! even when its off-diagonal blocks vanish and odd when its diagonal blocks
//! vanish.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MatrixError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn bit(self) -> Option<u8> {
        match self {
            Parity::Even => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(-1)^{a b}` for parity bits.
pub fn koszul(a: u8, b: u8) -> i64 {
    if a & b & 1 == 1 {
        -1
    } else {
        1
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperMatrix {
    l: usize,
    entries: Vec<Scalar>,
}

fn index_parity(i: usize) -> u8 {
    u8::from(i == 0)
}

impl SuperMatrix {
    pub fn zero(l: usize) -> Self {
        let n = 2 * l + 1;
        Self { l, entries: vec![Scalar::zero(); n * n] }
    }

    pub fn identity(l: usize) -> Self {
        let mut m = Self::zero(l);
        for i in 0..m.size() {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Elementary matrix `E_{ij}`.
    pub fn unit(l: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(l);
        m.set(i, j, Scalar::one());
        m
    }

    pub fn from_rows(l: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, MatrixError> {
        let n = 2 * l + 1;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Malformed(format!("expected {n}x{n} rows")));
        }
        Ok(Self { l, entries: rows.into_iter().flatten().collect() })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn size(&self) -> usize {
        2 * self.l + 1
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.size();
        self.entries[i * n + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.size()).map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn parity(&self) -> Parity {
        let n = self.size();
        let mut has_even = false;
        let mut has_odd = false;
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j).is_zero() {
                    continue;
                }
                if index_parity(i) ^ index_parity(j) == 1 {
                    has_odd = true;
                } else {
                    has_even = true;
                }
            }
        }
        match (has_even, has_odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Split into (even, odd) components.
    pub fn split_by_parity(&self) -> (SuperMatrix, SuperMatrix) {
        let mut even = Self::zero(self.l);
        let mut odd = Self::zero(self.l);
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j).clone();
                if index_parity(i) ^ index_parity(j) == 1 {
                    odd.set(i, j, v);
                } else {
                    even.set(i, j, v);
                }
            }
        }
        (even, odd)
    }

    fn check_dims(&self, other: &Self) -> Result<(), MatrixError> {
        if self.l != other.l {
            return Err(MatrixError::DimensionMismatch(self.l, other.l));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        Ok(Self { l: self.l, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        Ok(Self { l: self.l, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { l: self.l, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    /// Ordinary matrix product `X∘Y`.
    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let n = self.size();
        let mut out = Self::zero(self.l);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.entries[idx] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `[X, Y] = X∘Y - (-1)^{p(X)p(Y)} Y∘X` on homogeneous inputs.
    pub fn super_bracket(&self, other: &Self) -> Result<Self, MatrixError> {
        let px = self.parity().bit().ok_or(MatrixError::MixedParity)?;
        let py = other.parity().bit().ok_or(MatrixError::MixedParity)?;
        let xy = self.mul(other)?;
        let yx = other.mul(self)?;
        if koszul(px, py) == 1 {
            xy.sub(&yx)
        } else {
            xy.add(&yx)
        }
    }

    /// `str(A) = -A₀₀ + Σ_{k≥1} A_kk`.
    pub fn supertrace(&self) -> Scalar {
        let mut s = -self.get(0, 0);
        for k in 1..self.size() {
            s += self.get(k, k);
        }
        s
    }

    /// Block rule `[[A11, A12], [A21, A22]] ↦ [[A11ᵗ, -A21ᵗ], [A12ᵗ, A22ᵗ]]`.
    pub fn super_transpose(&self) -> Self {
        let n = self.size();
        let mut out = Self::zero(self.l);
        out.set(0, 0, self.get(0, 0).clone());
        for k in 1..n {
            out.set(0, k, -self.get(k, 0));
            out.set(k, 0, self.get(0, k).clone());
            for m in 1..n {
                out.set(k, m, self.get(m, k).clone());
            }
        }
        out
    }

    /// Parity operator `Π = diag(-1, Id_{2l})`.
    pub fn parity_operator(l: usize) -> Self {
        let mut p = Self::identity(l);
        p.set(0, 0, Scalar::from_int(-1));
        p
    }

    /// `J = diag(1, [[0, -Id], [Id, 0]])`.
    pub fn j_matrix(l: usize) -> Self {
        let mut j = Self::zero(l);
        j.set(0, 0, Scalar::one());
        for i in 1..=l {
            j.set(i, l + i, Scalar::from_int(-1));
            j.set(l + i, i, Scalar::one());
        }
        j
    }

    pub fn j_inverse(l: usize) -> Self {
        let mut j = Self::zero(l);
        j.set(0, 0, Scalar::one());
        for i in 1..=l {
            j.set(i, l + i, Scalar::one());
            j.set(l + i, i, Scalar::from_int(-1));
        }
        j
    }

    /// The involution `X ↦ -J X^⊤ J⁻¹`; homogeneous inputs only.
    pub fn theta(&self) -> Result<Self, MatrixError> {
        if self.parity() == Parity::Mixed {
            return Err(MatrixError::MixedParity);
        }
        let j = Self::j_matrix(self.l);
        let jinv = Self::j_inverse(self.l);
        Ok(j.mul(&self.super_transpose())?.mul(&jinv)?.scale(&Scalar::from_int(-1)))
    }

    /// Membership in osp(1|2l) as a θ-fixed point, component by component.
    pub fn is_osp(&self) -> bool {
        let (even, odd) = self.split_by_parity();
        [even, odd].iter().all(|m| m.theta().map(|t| t == *m).unwrap_or(false))
    }

    /// Membership via the explicit block shape
    /// `[[0, x, y], [yᵗ, A, B], [-xᵗ, C, -Aᵗ]]` with `B`, `C` symmetric.
    pub fn has_osp_shape(&self) -> bool {
        let l = self.l;
        let g = |i, j| self.get(i, j);
        if !g(0, 0).is_zero() {
            return false;
        }
        for i in 1..=l {
            if *g(i, 0) != *g(0, l + i) || *g(l + i, 0) != -g(0, i) {
                return false;
            }
            for j in 1..=l {
                if *g(l + i, l + j) != -g(j, i) {
                    return false;
                }
                if *g(i, l + j) != *g(j, l + i) || *g(l + i, j) != *g(l + j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Scalar `c` if the matrix equals `c·Id`.
    pub fn as_scalar_multiple(&self) -> Option<Scalar> {
        let c = self.get(0, 0).clone();
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { &c } else { &Scalar::zero() };
                if self.get(i, j) != expect {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn to_json(&self) -> SuperMatrixJson {
        SuperMatrixJson { l: self.l, rows: self.rows(), parity: self.parity().bit() }
    }

    pub fn from_json(j: &SuperMatrixJson) -> Result<Self, MatrixError> {
        let m = Self::from_rows(j.l, j.rows.clone())?;
        if m.parity().bit() != j.parity {
            return Err(MatrixError::Malformed("declared parity does not match entries".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperMatrixJson {
    pub l: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub parity: Option<u8>,
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix(l={}, {:?})", self.l, self.parity())?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Scalar::pretty).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> SuperMatrix {
        SuperMatrix::unit(1, i, j)
    }

    #[test]
    fn odd_odd_bracket_is_anticommutator() {
        let b = e(0, 1).super_bracket(&e(1, 0)).unwrap();
        assert_eq!(b, e(0, 0).add(&e(1, 1)).unwrap());
    }

    #[test]
    fn even_even_bracket_is_commutator() {
        assert_eq!(e(1, 1).super_bracket(&e(1, 2)).unwrap(), e(1, 2));
    }

    #[test]
    fn supertrace_values() {
        assert_eq!(e(0, 0).supertrace(), Scalar::from_int(-1));
        for l in 1..4 {
            assert_eq!(SuperMatrix::identity(l).supertrace(), Scalar::from_int(2 * l as i64 - 1));
        }
    }

    #[test]
    fn mixed_parity_is_rejected() {
        let m = e(0, 1).add(&e(1, 1)).unwrap();
        assert_eq!(m.parity(), Parity::Mixed);
        assert_eq!(m.super_bracket(&e(1, 1)), Err(MatrixError::MixedParity));
        assert_eq!(m.theta(), Err(MatrixError::MixedParity));
        let (ev, od) = m.split_by_parity();
        assert_eq!(ev, e(1, 1));
        assert_eq!(od, e(0, 1));
    }

    #[test]
    fn even_block_diagonal_transposes_plainly() {
        let m = e(1, 2).add(&e(0, 0)).unwrap();
        assert_eq!(m.super_transpose(), e(2, 1).add(&e(0, 0)).unwrap());
    }

    #[test]
    fn generic_unit_is_not_osp() {
        assert!(!e(1, 1).is_osp());
        assert!(!e(1, 1).has_osp_shape());
        assert!(SuperMatrix::zero(1).is_osp());
    }

    #[test]
    fn theta_fixes_generators_at_rank_one() {
        let h = e(1, 1).sub(&e(2, 2)).unwrap();
        assert_eq!(h.theta().unwrap(), h);
        let x = e(1, 0).add(&e(0, 2)).unwrap();
        assert_eq!(x.theta().unwrap(), x);
    }

    #[test]
    fn json_round_trip() {
        let x = e(1, 0).add(&e(0, 2)).unwrap().scale(&Scalar::i());
        let j = x.to_json();
        assert_eq!(j.parity, Some(1));
        assert_eq!(SuperMatrix::from_json(&j).unwrap(), x);
    }
}
