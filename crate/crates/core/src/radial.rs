//! Radial part of a normal-ordered central element on the Whittaker pairing
//! `Φ(q) = ⟨ψ_L, e^{−h_q} ψ_R⟩`.
//!
//! Term rules: a Cartan factor `hᵢ` becomes `−∂ᵢ`; a word `X_{−α} h^m X_α`
//! becomes `−conj(χ_L(X_{−α})) χ_R(X_α) e^{α(q)} (−∂)^m`, where `conj` is the
//! antilinear automorphism of the first slot. `ψ_L` is even, so the Koszul
//! factors from moving `X_{−α}` and `χ_R(X_α)` across it are trivial.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diffop::{DiffOperator, OperatorJson};
use crate::error::{PolyError, RadialError};
use crate::osp::Generator;
use crate::poly::{coupling, lambda, mu, GradedPoly, Monomial, PolyTermJson, Symbol};
use crate::roots::{weyl_pairing, WeightVector};
use crate::scalar::Scalar;
use crate::uea::{Uea, UeaElement};
use crate::whittaker::Character;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialPart {
    pub operator: DiffOperator,
    /// `H₂ Ψ = eigenvalue · Ψ`, a polynomial in `λ₁..λ_l`.
    pub eigenvalue: GradedPoly,
}

/// `ξ⁻_k^n ξ⁺_k^n ↦ g_k^{2n}`, with the left factor taken from the L side.
pub fn contract(left: &GradedPoly, right: &GradedPoly) -> Result<GradedPoly, RadialError> {
    let mut out = GradedPoly::zero();
    for (ml, cl) in left.terms() {
        for (mr, cr) in right.terms() {
            let m = contract_monomials(ml, mr)?;
            out.add_term(m, &(cl * cr));
        }
    }
    Ok(out)
}

fn xi_index(s: &Symbol, prefix: &str) -> Option<usize> {
    s.name().strip_prefix(prefix)?.parse().ok()
}

fn contract_monomials(ml: &Monomial, mr: &Monomial) -> Result<Monomial, RadialError> {
    let mut minus = BTreeMap::new();
    let mut plus = BTreeMap::new();
    let mut rest = Monomial::exponential(ml.exp() + mr.exp());
    let mut stray = Vec::new();
    for (m, side) in [(ml, "xm"), (mr, "xp")] {
        for (s, p) in m.powers() {
            match (xi_index(s, "xm"), xi_index(s, "xp")) {
                (Some(k), _) if side == "xm" => {
                    minus.insert(k, *p);
                }
                (_, Some(k)) if side == "xp" => {
                    plus.insert(k, *p);
                }
                _ if s.is_odd() || xi_index(s, "xm").is_some() || xi_index(s, "xp").is_some() => {
                    stray.push(format!("{}^{p}", s.name()));
                }
                _ => rest = rest.mul(&Monomial::var(s.clone(), *p))?,
            }
        }
    }
    if !stray.is_empty() || minus != plus {
        let show = |m: &Monomial| GradedPoly::term(m.clone(), Scalar::one()).pretty();
        return Err(RadialError::UncontractedCoupling(format!("{} * {}", show(ml), show(mr))));
    }
    for (k, n) in minus {
        rest = rest.mul(&Monomial::var(coupling(k), 2 * n))?;
    }
    Ok(rest)
}

fn require_real(c: &GradedPoly) -> Result<(), RadialError> {
    if c.is_real() {
        Ok(())
    } else {
        Err(RadialError::PhaseResidue(c.pretty()))
    }
}

fn cartan_derivative(l: usize, hs: &[usize]) -> (Vec<u32>, Scalar) {
    let mut m = vec![0u32; l];
    for &i in hs {
        m[i - 1] += 1;
    }
    let sign = if hs.len().is_multiple_of(2) { 1 } else { -1 };
    (m, Scalar::from_int(sign))
}

/// Operator `D` with `⟨ψ_L, e^{−h_q} C ψ_R⟩ = D Φ`, before ρ-conjugation.
pub fn pairing_operator(
    uea: &Uea<'_>,
    c: &UeaElement,
    chi_l: &Character,
    chi_r: &Character,
) -> Result<DiffOperator, RadialError> {
    if !uea.is_normal(c) {
        return Err(RadialError::UnorderedInput);
    }
    let table = uea.table();
    let b = table.basis();
    let l = table.l();
    let mut out = DiffOperator::zero(l);
    for (w, coeff) in c.terms() {
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        let mut hs = Vec::new();
        for &i in w {
            match &b.get(i).generator {
                Generator::Cartan(k) => hs.push(*k),
                Generator::Root(_) if b.get(i).is_negative() => neg.push(i),
                Generator::Root(_) => pos.push(i),
            }
        }
        let (m, dsign) = cartan_derivative(l, &hs);
        let unsupported = || RadialError::UnsupportedWord(uea.show_word(w));
        match (neg.as_slice(), pos.as_slice()) {
            ([], []) => {
                out.add_term(vec![0; l], m, GradedPoly::constant(coeff * &dsign));
            }
            ([n], [p]) => {
                let alpha = b.get(*p).root().expect("root");
                let minus = b.get(*n).root().expect("root");
                if alpha.iter().zip(minus).any(|(x, y)| x + y != 0) {
                    return Err(unsupported());
                }
                let (vl, vr) = (chi_l.value(*n), chi_r.value(*p));
                if vl.is_zero() || vr.is_zero() {
                    continue;
                }
                let k = contract(&vl.conj(), &vr)?;
                let k = k.scale(&(-(coeff * &dsign)));
                require_real(&k)?;
                out.add_term(alpha.clone(), m, k);
            }
            _ => return Err(unsupported()),
        }
    }
    Ok(out)
}

/// `H₂ = −e^{−ρ} D e^{ρ} − (ρ,ρ)` together with its eigenvalue `−(λ+ρ, λ+ρ)`.
pub fn radial_part(
    uea: &Uea<'_>,
    c: &UeaElement,
    chi_l: &Character,
    chi_r: &Character,
    rho: &WeightVector,
) -> Result<RadialPart, RadialError> {
    let d = pairing_operator(uea, c, chi_l, chi_r)?;
    let l = d.l();
    let rr = weyl_pairing(rho, rho).expect("rank matches");
    let shift = DiffOperator::identity(l).scale(&Scalar::from_rational(rr.clone()));
    let operator = d.conjugate_by_rho(rho).scale(&Scalar::from_int(-1)).sub(&shift);
    for (_, coeff) in operator.terms() {
        require_real(coeff)?;
    }
    let hw = uea.hw_value(c)?;
    let eigenvalue = -(hw + GradedPoly::from_rational(rr));
    Ok(RadialPart { operator, eigenvalue })
}

/// `−(λ+ρ, λ+ρ)` expanded in `λ₁..λ_l`.
pub fn expected_eigenvalue(rho: &WeightVector) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for (i, r) in rho.0.iter().enumerate() {
        let mut s = GradedPoly::var(lambda(i + 1));
        s.add_term(Monomial::one(), &Scalar::from_rational(r.clone()));
        out = out - s.pow(2).expect("even");
    }
    out
}

/// Replace each `g_k²` by a rational; every coupling must be bound.
pub fn specialize_couplings(
    op: &DiffOperator,
    values: &BTreeMap<usize, BigRational>,
) -> Result<DiffOperator, RadialError> {
    let out = op.try_map_coeffs(|_, c| -> Result<GradedPoly, RadialError> {
        let mut c = c.clone();
        for (k, v) in values {
            c = c.substitute_square(coupling(*k).name(), &GradedPoly::from_rational(v.clone()))?;
        }
        Ok(c)
    })?;
    let unbound: Vec<String> = out
        .terms()
        .flat_map(|(_, c)| c.symbols())
        .map(|s| s.name().to_string())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if unbound.is_empty() {
        Ok(out)
    } else {
        Err(PolyError::UnboundSymbol(unbound.join(", ")).into())
    }
}

/// Substitute `λ = iμ − ρ` into an eigenvalue polynomial.
pub fn at_imaginary_weight(eigenvalue: &GradedPoly, rho: &WeightVector) -> Result<GradedPoly, RadialError> {
    let mut p = eigenvalue.clone();
    for (i, r) in rho.0.iter().enumerate() {
        let mut v = GradedPoly::var(mu(i + 1)).scale(&Scalar::i());
        v.add_term(Monomial::one(), &Scalar::from_rational(-r.clone()));
        p = p.substitute(lambda(i + 1).name(), &v)?;
    }
    Ok(p)
}

/// `Σ μᵢ²`.
pub fn mu_squared(l: usize) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for i in 1..=l {
        out.add_term(Monomial::var(mu(i), 2), &Scalar::one());
    }
    out
}

/// True iff every coefficient is a polynomial in the `g_k²` with nonnegative
/// rational coefficients and no formal exponential.
pub fn coefficients_are_coupling_squares(op: &DiffOperator) -> bool {
    op.terms().all(|((n, _), c)| {
        let potential = n.iter().any(|v| *v != 0);
        c.terms().all(|(m, s)| {
            m.exp().is_zero()
                && m.powers().iter().all(|(sym, p)| sym.name().starts_with('g') && p % 2 == 0)
                && (!potential || (s.is_rational() && !s.is_negative_rational()))
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialDocument {
    pub schema: String,
    pub l: usize,
    pub couplings: BTreeMap<String, String>,
    pub operator: OperatorJson,
    pub eigenvalue: Vec<PolyTermJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eigenvalue_mu: Option<Vec<PolyTermJson>>,
}

impl RadialDocument {
    pub fn operator(&self) -> Result<DiffOperator, crate::error::ParseError> {
        DiffOperator::from_json(self.l, &self.operator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::form::invariant_form;
    use crate::osp::AlgebraTable;
    use crate::roots::RootSystem;
    use crate::scalar::rat;
    use crate::whittaker::Side;

    fn run(l: usize, zero: bool) -> (RadialPart, WeightVector) {
        let t = AlgebraTable::new(l).unwrap();
        let u = Uea::new(&t);
        let f = invariant_form(t.basis()).unwrap();
        let c = u.normal_order(&u.casimir(&f).unwrap());
        let (cl, cr) = if zero {
            (Character::zero(Side::L, l), Character::zero(Side::R, l))
        } else {
            (Character::standard(Side::L, &t), Character::standard(Side::R, &t))
        };
        let rho = RootSystem::b0(l).unwrap().rho();
        (radial_part(&u, &c, &cl, &cr, &rho).unwrap(), rho)
    }

    fn g(k: usize, p: u32, c: i64) -> GradedPoly {
        GradedPoly::term(Monomial::var(coupling(k), p), Scalar::from_int(c))
    }

    #[test]
    fn rank_one_operator() {
        let (r, rho) = run(1, false);
        let want = DiffOperator::laplacian(1)
            .scale(&Scalar::from_int(-1))
            .add(&DiffOperator::potential(1, vec![1], g(1, 2, 2)))
            .add(&DiffOperator::potential(1, vec![2], g(1, 4, 4)));
        assert_eq!(r.operator, want);
        assert_eq!(r.eigenvalue, expected_eigenvalue(&rho));
        assert_eq!(at_imaginary_weight(&r.eigenvalue, &rho).unwrap(), mu_squared(1));
        assert!(coefficients_are_coupling_squares(&r.operator));
    }

    #[test]
    fn rank_two_chain_term() {
        let (r, _) = run(2, false);
        assert_eq!(r.operator.coefficient(&[1, -1], &[0, 0]), g(2, 2, 2));
        assert_eq!(r.operator.coefficient(&[0, 1], &[0, 0]), g(1, 2, 2));
    }

    #[test]
    fn zero_characters_give_free_laplacian() {
        let (r, rho) = run(2, true);
        assert_eq!(r.operator, DiffOperator::laplacian(2).scale(&Scalar::from_int(-1)));
        assert_eq!(r.eigenvalue, expected_eigenvalue(&rho));
    }

    #[test]
    fn specialization() {
        let (r, _) = run(1, false);
        let vals = BTreeMap::from([(1, rat(3, 1))]);
        let s = specialize_couplings(&r.operator, &vals).unwrap();
        assert_eq!(s.coefficient(&[2], &[0]), GradedPoly::from_int(36));
        let none = BTreeMap::new();
        assert!(matches!(
            specialize_couplings(&r.operator, &none),
            Err(RadialError::Poly(PolyError::UnboundSymbol(_)))
        ));
        let zero = BTreeMap::from([(1, rat(0, 1))]);
        assert_eq!(
            specialize_couplings(&r.operator, &zero).unwrap(),
            DiffOperator::laplacian(1).scale(&Scalar::from_int(-1))
        );
    }

    #[test]
    fn unordered_input_rejected() {
        let t = AlgebraTable::new(1).unwrap();
        let u = Uea::new(&t);
        let b = t.basis();
        let w = UeaElement::word(vec![b.x(&[(1, 1)]), b.x(&[(1, -1)])], Scalar::one());
        let chi = Character::standard(Side::R, &t);
        let rho = RootSystem::b0(1).unwrap().rho();
        assert_eq!(
            radial_part(&u, &w, &Character::standard(Side::L, &t), &chi, &rho),
            Err(RadialError::UnorderedInput)
        );
    }

    #[test]
    fn broken_phase_is_reported() {
        let t = AlgebraTable::new(1).unwrap();
        let u = Uea::new(&t);
        let f = invariant_form(t.basis()).unwrap();
        let c = u.normal_order(&u.casimir(&f).unwrap());
        let i = t.basis().x(&[(1, 2)]);
        let cr = Character::standard(Side::R, &t);
        let v = cr.value(i).scale(&Scalar::omega());
        let cr = cr.with_value(i, v);
        let rho = RootSystem::b0(1).unwrap().rho();
        assert!(matches!(
            radial_part(&u, &c, &Character::standard(Side::L, &t), &cr, &rho),
            Err(RadialError::PhaseResidue(_))
        ));
    }
}
