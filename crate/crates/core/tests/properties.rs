use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use osp_toda::diffop::DiffOperator;
use osp_toda::exec::Execution;
use osp_toda::logs::LogComb;
use osp_toda::numerics::bessel::liouville_samples;
use osp_toda::numerics::{ode_residual, Bc1, Grid1D};
use osp_toda::osp::AlgebraTable;
use osp_toda::poly::{GradedPoly, Monomial, Symbol};
use osp_toda::radial::radial_part;
use osp_toda::roots::{RootSystem, WeightVector};
use osp_toda::scalar::{rat, Scalar};
use osp_toda::supermatrix::SuperMatrix;
use osp_toda::toda::{bc_spec, build_toda, canonicalize, osp_class_invariant, osp_spec_numeric, translate, transport};
use osp_toda::uea::{Uea, UeaElement};
use osp_toda::whittaker::{Character, Side};

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn positive_rat() -> impl Strategy<Value = BigRational> {
    (1i64..=30, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::array::uniform4(small_rat()).prop_map(Scalar::new)
}

fn even_poly() -> impl Strategy<Value = GradedPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -2i64..=2, scalar()), 0..4).prop_map(|terms| {
        let mut p = GradedPoly::zero();
        for (a, b, e, c) in terms {
            let m = Monomial::var(Symbol::even("a"), a)
                .mul(&Monomial::var(Symbol::even("b"), b))
                .and_then(|m| m.mul(&Monomial::exponential(rat(e, 2))))
                .unwrap();
            p.add_term(m, &c);
        }
        p
    })
}

/// Integral log combination: rational constant plus integer multiples of ln 2, ln 3.
fn integral_log() -> impl Strategy<Value = LogComb> {
    (small_rat(), -3i64..=3, -3i64..=3).prop_map(|(c, a, b)| {
        LogComb::constant(c).add(&LogComb::ln_int(2).scale(&rat(a, 1))).add(&LogComb::ln_int(3).scale(&rat(b, 1)))
    })
}

fn homogeneous(l: usize, odd: bool) -> impl Strategy<Value = SuperMatrix> {
    let n = 2 * l + 1;
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        let mut m = SuperMatrix::zero(l);
        for i in 0..n {
            for j in 0..n {
                if ((i == 0) != (j == 0)) == odd {
                    m.set(i, j, Scalar::from_int(v[i * n + j]));
                }
            }
        }
        m
    })
}

fn bracket_triple() -> impl Strategy<Value = (bool, bool, SuperMatrix, SuperMatrix, SuperMatrix)> {
    (1usize..=2, any::<bool>(), any::<bool>())
        .prop_flat_map(|(l, ox, oy)| (Just(ox), Just(oy), homogeneous(l, ox), homogeneous(l, oy), homogeneous(l, !ox)))
}

proptest! {
    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), Scalar::zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(a.clone() * inv, Scalar::one());
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&s).unwrap(), a);
    }

    #[test]
    fn poly_ring_laws(p in even_poly(), q in even_poly(), r in even_poly()) {
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(pq.clone(), q.mul(&p).unwrap());
        let mut qr = q.clone();
        for (m, c) in r.terms() {
            qr.add_term(m.clone(), c);
        }
        let mut split = pq;
        for (m, c) in p.mul(&r).unwrap().terms() {
            split.add_term(m.clone(), c);
        }
        prop_assert_eq!(p.mul(&qr).unwrap(), split);
        prop_assert_eq!(GradedPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn supertrace_kills_brackets((ox, oy, x, y, z) in bracket_triple()) {
        prop_assert!(x.super_bracket(&y).unwrap().supertrace().is_zero());
        // graded Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{p(x)p(y)} [y,[x,z]]
        let lhs = x.super_bracket(&y.super_bracket(&z).unwrap()).unwrap();
        let a = x.super_bracket(&y).unwrap().super_bracket(&z).unwrap();
        let b = y.super_bracket(&x.super_bracket(&z).unwrap()).unwrap();
        let sign = if ox && oy { -1 } else { 1 };
        prop_assert_eq!(lhs, a.add(&b.scale(&Scalar::from_int(sign))).unwrap());
    }

    #[test]
    fn log_exp_is_a_homomorphism(a in integral_log(), b in integral_log()) {
        let lhs = a.add(&b).exp().unwrap();
        prop_assert_eq!(lhs, a.exp().unwrap().mul(&b.exp().unwrap()).unwrap());
        prop_assert_eq!(LogComb::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn conjugation_by_rho_inverts(l in 1usize..=3, w in prop::collection::vec(small_rat(), 3)) {
        let rho = WeightVector(w[..l].to_vec());
        let minus = WeightVector(rho.0.iter().map(|x| -x).collect());
        let spec = bc_spec(l, &vec![rat(1, 1); l + 1]).unwrap();
        let h = build_toda(&spec).unwrap();
        prop_assert_eq!(h.conjugate_by_rho(&rho).conjugate_by_rho(&minus), h.clone());
        prop_assert_eq!(DiffOperator::from_json(l, &h.to_json()).unwrap(), h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_order_preserves_the_defining_action(l in 1usize..=2, word in prop::collection::vec(0usize..14, 1..5), c in scalar()) {
        let t = AlgebraTable::new(l).unwrap();
        let u = Uea::new(&t);
        let w: Vec<usize> = word.into_iter().map(|i| i % t.dim()).collect();
        let e = UeaElement::word(w, c);
        let n = u.normal_order(&e);
        prop_assert!(u.is_normal(&n));
        prop_assert_eq!(u.normal_order(&n), n.clone());
        prop_assert_eq!(u.realize(&n), u.realize(&e));
    }

    #[test]
    fn supercommutator_is_graded_antisymmetric(l in 1usize..=2, i in 0usize..14, j in 0usize..14) {
        let t = AlgebraTable::new(l).unwrap();
        let u = Uea::new(&t);
        let (i, j) = (i % t.dim(), j % t.dim());
        let (a, b) = (UeaElement::generator(i), UeaElement::generator(j));
        let ab = u.supercommutator(&a, &b).unwrap();
        let ba = u.supercommutator(&b, &a).unwrap();
        let sign = if t.parity(i) == 1 && t.parity(j) == 1 { 1 } else { -1 };
        prop_assert_eq!(ab.clone(), ba.scale(&Scalar::from_int(sign)));
        prop_assert_eq!(ab, UeaElement::from_alg(t.bracket_basis(i, j)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn radial_part_ignores_torus_rescaling(l in 1usize..=2, theta in prop::collection::vec(small_rat(), 2)) {
        let t = AlgebraTable::new(l).unwrap();
        let u = Uea::new(&t);
        let rho = RootSystem::b0(l).unwrap().rho();
        let c = u.casimir_normal_form();
        let (cl, cr) = (Character::standard(Side::L, &t), Character::standard(Side::R, &t));
        let base = radial_part(&u, &c, &cl, &cr, &rho).unwrap();
        let th = &theta[..l];
        let moved = radial_part(&u, &c, &cl.torus_rescale(&t, th), &cr.torus_rescale(&t, th), &rho).unwrap();
        prop_assert_eq!(moved, base);
    }

    #[test]
    fn invariant_survives_shifts(l in 1usize..=4, k2 in prop::collection::vec(positive_rat(), 4), c in prop::collection::vec(integral_log(), 4)) {
        let spec = osp_spec_numeric(l, &k2[..l]).unwrap();
        let moved = transport(&spec, &c[..l]);
        prop_assert_eq!(osp_class_invariant(&moved).unwrap(), GradedPoly::one());
        let bc = bc_spec(l, &k2.iter().cycle().take(l + 1).cloned().collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(osp_class_invariant(&transport(&bc, &c[..l])).unwrap(), osp_class_invariant(&bc).unwrap());
    }

    #[test]
    fn translation_commutes_with_transport(l in 1usize..=3, g in prop::collection::vec(positive_rat(), 4), c in prop::collection::vec(integral_log(), 3)) {
        let spec = bc_spec(l, &g[..=l]).unwrap();
        let c = &c[..l];
        let lhs = translate(&build_toda(&spec).unwrap(), c).unwrap();
        prop_assert_eq!(lhs, build_toda(&transport(&spec, c)).unwrap());
    }

    #[test]
    fn invariant_is_complete(l in 1usize..=3, a in prop::collection::vec(positive_rat(), 3), b in prop::collection::vec(positive_rat(), 3), r in positive_rat(), s in positive_rat()) {
        // couplings: chain (l - 1 of them), then e_l, then 2e_l = r g_e^2
        let build = |g: &[BigRational], r: &BigRational| {
            let mut v: Vec<BigRational> = g[..l - 1].to_vec();
            v.push(g[2].clone());
            v.push(r * &g[2] * &g[2]);
            bc_spec(l, &v).unwrap()
        };
        let (x, y, z) = (build(&a, &r), build(&b, &r), build(&b, &s));
        let cx = canonicalize(&x).unwrap().spec;
        prop_assert_eq!(build_toda(&cx).unwrap(), build_toda(&canonicalize(&y).unwrap().spec).unwrap());
        prop_assert_eq!(r == s, build_toda(&cx).unwrap() == build_toda(&canonicalize(&z).unwrap().spec).unwrap());
        prop_assert_eq!(osp_class_invariant(&x).unwrap(), GradedPoly::from_rational(r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn residual_is_fourth_order(mu in 0.25f64..2.5, b in 0.5f64..2.0) {
        let exec = Execution::Sequential;
        let pot = Bc1::new(b, 0.0).unwrap();
        let errs: Vec<f64> = [81usize, 161]
            .iter()
            .map(|&n| {
                let g = Grid1D::new(-6.0, 1.0, n).unwrap();
                ode_residual(&pot, mu, &liouville_samples(b, mu, &g, exec), &g, exec).unwrap()
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        prop_assert!((3.5..4.5).contains(&order), "observed order {order} from {errs:?}");
    }
}

#[test]
fn rank_one_shift_table() {
    let mut seen = BTreeMap::new();
    for k in 1..=6i64 {
        let c = canonicalize(&osp_spec_numeric(1, &[rat(k, 1)]).unwrap()).unwrap();
        seen.insert(k, c.shift[0].to_string());
    }
    assert_eq!(seen[&3], "-ln 6");
    assert_eq!(seen[&1], "-ln 2");
}
