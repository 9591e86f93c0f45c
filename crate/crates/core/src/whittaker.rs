//! Whittaker characters of the nilpotent subalgebras n₊ and n₋.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::osp::AlgebraTable;
use crate::poly::{xi_minus, xi_plus, GradedPoly, Monomial};
use crate::report::FamilyReport;
use crate::roots::{chain_root, eps, root_label};
use crate::scalar::Scalar;
use crate::supermatrix::koszul;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    R,
    L,
}

/// Character values on root generators, keyed by basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    side: Side,
    l: usize,
    values: BTreeMap<usize, GradedPoly>,
}

impl Character {
    pub fn zero(side: Side, l: usize) -> Self {
        Self { side, l, values: BTreeMap::new() }
    }

    /// `χ_R(X_{ε_l}) = ω³ξ⁺₁`, `χ_R(X_{2ε_l}) = i(ξ⁺₁)²`, `χ_R(X_{α_k}) = iξ⁺_k`;
    /// `χ_L` mirrors this on the negative generators with `ξ⁻`.
    pub fn standard(side: Side, table: &AlgebraTable) -> Self {
        let l = table.l();
        let b = table.basis();
        let (sign, xi): (i64, fn(usize) -> crate::poly::Symbol) = match side {
            Side::R => (1, xi_plus),
            Side::L => (-1, xi_minus),
        };
        let flip = |r: Vec<i64>| -> Vec<i64> { r.into_iter().map(|c| sign * c).collect() };
        let mut values = BTreeMap::new();
        let x1 = GradedPoly::var(xi(1));
        values.insert(b.root_index(&flip(eps(l, l))).expect("root"), x1.scale(&Scalar::omega_pow(3)));
        let mut long = eps(l, l);
        long[l - 1] = 2;
        values.insert(
            b.root_index(&flip(long)).expect("root"),
            x1.pow(2).expect("single odd symbol").scale(&Scalar::i()),
        );
        for k in 2..=l {
            values.insert(
                b.root_index(&flip(chain_root(l, k))).expect("root"),
                GradedPoly::var(xi(k)).scale(&Scalar::i()),
            );
        }
        Self { side, l, values }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn value(&self, i: usize) -> GradedPoly {
        self.values.get(&i).cloned().unwrap_or_else(GradedPoly::zero)
    }

    pub fn values(&self) -> &BTreeMap<usize, GradedPoly> {
        &self.values
    }

    pub fn with_value(mut self, i: usize, v: GradedPoly) -> Self {
        if v.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, v);
        }
        self
    }

    /// Adjoint action of `exp(Σ θᵢhᵢ)`: the value on `X_γ` picks up `e^{γ(θ)}`.
    pub fn torus_rescale(&self, table: &AlgebraTable, theta: &[BigRational]) -> Self {
        let b = table.basis();
        let values = self
            .values
            .iter()
            .map(|(i, v)| {
                let r = b.get(*i).root().expect("root generator");
                let w: BigRational = r.iter().zip(theta).map(|(c, t)| t * BigRational::from_integer((*c).into())).sum();
                (*i, v.times_exp(&w))
            })
            .collect();
        Self { side: self.side, l: self.l, values }
    }
}

/// Compatibility of a character with the brackets of its nilpotent subalgebra.
///
/// Right side: `χ([a,b]) = (−1)^{p_a p_b} χ_b χ_a − χ_a χ_b`. Left side, where
/// values act as right scalars: `χ([a,b]) = χ_a χ_b − (−1)^{p_a p_b} χ_b χ_a`.
pub fn check_character(chi: &Character, table: &AlgebraTable) -> FamilyReport {
    let b = table.basis();
    let name = match chi.side {
        Side::R => "character-R",
        Side::L => "character-L",
    };
    let mut rep = FamilyReport::new(name, "Whittaker character compatibility");
    let gens: Vec<usize> = (0..table.dim())
        .filter(|&i| match chi.side {
            Side::R => b.get(i).is_positive(),
            Side::L => b.get(i).is_negative(),
        })
        .collect();
    for &i in &gens {
        let v = chi.value(i);
        let p = table.parity(i);
        rep.record(v.is_zero() || v.parity() == Some(p), || {
            format!("value on {} has the wrong parity", table.label(i))
        });
    }
    for &a in &gens {
        for &c in &gens {
            let (pa, pc) = (table.parity(a), table.parity(c));
            let s = Scalar::from_int(koszul(pa, pc));
            let mut lhs = GradedPoly::zero();
            for (x, cx) in table.bracket_basis(a, c).iter() {
                lhs = lhs + chi.value(*x).scale(cx);
            }
            let (va, vc) = (chi.value(a), chi.value(c));
            let rhs = match (va.mul(&vc), vc.mul(&va)) {
                (Ok(ac), Ok(ca)) => match chi.side {
                    Side::R => ca.scale(&s) - ac,
                    Side::L => ac - ca.scale(&s),
                },
                (Err(e), _) | (_, Err(e)) => {
                    rep.record(false, || format!("({}, {}): {e}", table.label(a), table.label(c)));
                    continue;
                }
            };
            rep.record(lhs == rhs, || {
                format!(
                    "({}, {}): chi(bracket) = {}, product rule gives {}",
                    table.label(a),
                    table.label(c),
                    lhs.pretty(),
                    rhs.pretty()
                )
            });
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterValueJson {
    pub generator: String,
    pub root: String,
    pub value: Vec<crate::poly::PolyTermJson>,
}

pub fn character_json(chi: &Character, table: &AlgebraTable) -> Vec<CharacterValueJson> {
    chi.values
        .iter()
        .map(|(i, v)| CharacterValueJson {
            generator: table.label(*i).to_string(),
            root: root_label(table.basis().get(*i).root().expect("root")),
            value: v.to_json(),
        })
        .collect()
}

/// Monomial `ξ^n` helper for tests and perturbations.
pub fn xi_monomial(side: Side, k: usize, n: u32) -> Monomial {
    match side {
        Side::R => Monomial::var(xi_plus(k), n),
        Side::L => Monomial::var(xi_minus(k), n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn standard_characters_pass() {
        for l in 1..=3 {
            let t = AlgebraTable::new(l).unwrap();
            for side in [Side::R, Side::L] {
                let rep = check_character(&Character::standard(side, &t), &t);
                assert!(rep.passed(), "l={l} {side:?}: {:?}", rep.failures);
            }
        }
    }

    #[test]
    fn zero_character_passes() {
        let t = AlgebraTable::new(2).unwrap();
        assert!(check_character(&Character::zero(Side::R, 2), &t).passed());
    }

    #[test]
    fn nonzero_on_non_simple_short_root_fails() {
        let t = AlgebraTable::new(2).unwrap();
        let i = t.basis().x(&[(1, 1)]);
        let chi =
            Character::standard(Side::R, &t).with_value(i, GradedPoly::term(xi_monomial(Side::R, 1, 1), Scalar::one()));
        assert!(!check_character(&chi, &t).passed());
    }

    #[test]
    fn rescaling_squares_consistently() {
        let t = AlgebraTable::new(1).unwrap();
        let chi = Character::standard(Side::R, &t);
        let theta = vec![rat(3, 2)];
        let r = chi.torus_rescale(&t, &theta);
        let b = t.basis();
        let v1 = r.value(b.x(&[(1, 1)]));
        let v2 = r.value(b.x(&[(1, 2)]));
        assert_eq!(v2, v1.pow(2).unwrap().scale(&Scalar::from_int(-1)));
        assert_eq!(chi.torus_rescale(&t, &[rat(0, 1)]), chi);
    }
}
