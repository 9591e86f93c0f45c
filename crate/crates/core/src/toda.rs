//! Quantum Toda Hamiltonians `−Σ∂² + Σ g²_α e^{α(q)}` over a set of simple
//! roots, the BC specialization and its canonicalizing translations.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diffop::{DiffOperator, OperatorJson};
use crate::error::TodaError;
use crate::linalg::{self, QMatrix};
use crate::logs::{LogComb, LogCombJson};
use crate::poly::{GradedPoly, PolyTermJson, Symbol};
use crate::roots::{eps, root_label, Root, RootSystem, RootType};
use crate::scalar::Scalar;

/// Simple roots with their couplings stored as `ln g²_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct TodaSpec {
    kind: RootType,
    l: usize,
    roots: Vec<Root>,
    couplings: Vec<LogComb>,
}

impl TodaSpec {
    pub fn new(system: &RootSystem, couplings: Vec<LogComb>) -> Result<Self, TodaError> {
        let roots: Vec<Root> = system.simple().iter().map(|s| s.vector.clone()).collect();
        if roots.len() != couplings.len() {
            return Err(TodaError::CouplingCount { expected: roots.len(), found: couplings.len() });
        }
        Ok(Self { kind: system.kind(), l: system.l(), roots, couplings })
    }

    /// Positive rational `g²_α`, in the order of `system.simple()`.
    pub fn from_rationals(system: &RootSystem, g2: &[BigRational]) -> Result<Self, TodaError> {
        let logs = g2
            .iter()
            .enumerate()
            .map(|(i, v)| LogComb::ln_rational(v).map_err(|_| TodaError::NonPositiveCoupling(i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(system, logs)
    }

    /// Couplings listed in coordinate order: chain roots `e^{qᵢ−qᵢ₊₁}` for
    /// `i = 1..l−1`, then `e^{q_l}` and/or `e^{2q_l}` as the system has them.
    pub fn from_coordinate_order(system: &RootSystem, g2: &[BigRational]) -> Result<Self, TodaError> {
        let order = coordinate_order(system);
        if order.len() != g2.len() {
            return Err(TodaError::CouplingCount { expected: order.len(), found: g2.len() });
        }
        let mut by_simple = vec![BigRational::zero(); order.len()];
        for (pos, &idx) in order.iter().enumerate() {
            by_simple[idx] = g2[pos].clone();
        }
        Self::from_rationals(system, &by_simple).map_err(|e| match e {
            TodaError::NonPositiveCoupling(i) => {
                TodaError::NonPositiveCoupling(order.iter().position(|&x| x == i - 1).expect("index") + 1)
            }
            e => e,
        })
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn couplings(&self) -> &[LogComb] {
        &self.couplings
    }

    pub fn coupling_values(&self) -> Result<Vec<GradedPoly>, TodaError> {
        self.couplings.iter().map(LogComb::exp).collect()
    }

    fn index_of(&self, r: &[i64]) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    pub fn to_json(&self) -> Result<Vec<CouplingJson>, TodaError> {
        self.roots
            .iter()
            .zip(&self.couplings)
            .map(|(r, c)| Ok(CouplingJson { root: root_label(r), ln_g2: c.to_json(), g2: c.exp()?.to_json() }))
            .collect()
    }
}

/// Simple-root indices listed in coordinate order.
pub fn coordinate_order(system: &RootSystem) -> Vec<usize> {
    let l = system.l();
    let simple = system.simple();
    let find = |r: &Root| simple.iter().position(|s| &s.vector == r);
    let mut out = Vec::new();
    for i in 1..l {
        let mut r = vec![0; l];
        r[i - 1] = 1;
        r[i] = -1;
        out.extend(find(&r));
    }
    let mut long = vec![0; l];
    long[l - 1] = 2;
    out.extend(find(&eps(l, l)));
    out.extend(find(&long));
    out
}

/// BC_l with couplings `g_1..g_{l-1}` on the chain, `g_l` on `ε_l` and `g_{l+1}` on `2ε_l`.
pub fn bc_spec(l: usize, g2: &[BigRational]) -> Result<TodaSpec, TodaError> {
    let system = RootSystem::bc(l).map_err(|_| TodaError::NotBcType)?;
    TodaSpec::from_coordinate_order(&system, g2)
}

fn osp_logs(l: usize, ln_k2: impl Fn(usize) -> LogComb) -> Vec<LogComb> {
    let ln2 = LogComb::ln_int(2);
    let two = BigRational::from_integer(2.into());
    let mut out = vec![ln2.add(&ln_k2(1)), ln2.scale(&two).add(&ln_k2(1).scale(&two))];
    out.extend((2..=l).map(|k| ln2.add(&ln_k2(k))));
    out
}

/// The couplings produced by osp(1|2l): `2κ₁²` on `ε_l`, `4κ₁⁴` on `2ε_l`,
/// `2κ_k²` on the chain root `α_k`, with `κ_k` the given symbols.
pub fn osp_spec_symbolic(l: usize, symbol: impl Fn(usize) -> Symbol) -> Result<TodaSpec, TodaError> {
    let system = RootSystem::bc(l).map_err(|_| TodaError::NotBcType)?;
    let two = BigRational::from_integer(2.into());
    let logs = osp_logs(l, |k| LogComb::ln_symbol(symbol(k).name()).scale(&two));
    TodaSpec::new(&system, logs)
}

/// Same couplings with rational `κ_k²`, indexed `k = 1..l`.
pub fn osp_spec_numeric(l: usize, kappa2: &[BigRational]) -> Result<TodaSpec, TodaError> {
    if kappa2.len() != l {
        return Err(TodaError::CouplingCount { expected: l, found: kappa2.len() });
    }
    let system = RootSystem::bc(l).map_err(|_| TodaError::NotBcType)?;
    let logs = kappa2
        .iter()
        .enumerate()
        .map(|(i, v)| LogComb::ln_rational(v).map_err(|_| TodaError::NonPositiveCoupling(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    TodaSpec::new(&system, osp_logs(l, |k| logs[k - 1].clone()))
}

pub fn build_toda(spec: &TodaSpec) -> Result<DiffOperator, TodaError> {
    let l = spec.l;
    let mut op = DiffOperator::laplacian(l).scale(&Scalar::from_int(-1));
    for (r, c) in spec.roots.iter().zip(&spec.couplings) {
        op.add_term(r.clone(), vec![0; l], c.exp()?);
    }
    Ok(op)
}

fn pair(r: &[i64], c: &[LogComb]) -> LogComb {
    r.iter()
        .zip(c)
        .filter(|(x, _)| **x != 0)
        .fold(LogComb::zero(), |acc, (x, ci)| acc.add(&ci.scale(&BigRational::from_integer((*x).into()))))
}

/// `g²_α ↦ g²_α e^{α(c)}`, the effect of `q ↦ q + c`.
pub fn transport(spec: &TodaSpec, c: &[LogComb]) -> TodaSpec {
    let mut out = spec.clone();
    for (r, g) in out.roots.iter().zip(out.couplings.iter_mut()) {
        *g = g.add(&pair(r, c));
    }
    out
}

/// `(T_c H)(q) = H(q + c)`: the coefficient of `e^{n·q}` picks up `e^{n·c}`.
pub fn translate(op: &DiffOperator, c: &[LogComb]) -> Result<DiffOperator, TodaError> {
    op.try_map_coeffs(|(n, _), coeff| {
        let f = pair(n, c).exp()?;
        Ok(coeff.mul(&f).expect("even factor"))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Canonical {
    pub shift: Vec<LogComb>,
    pub spec: TodaSpec,
    /// Simple roots outside the solved set with their induced `g²`.
    pub induced: Vec<(Root, GradedPoly)>,
}

impl Canonical {
    pub fn is_canonical(&self) -> bool {
        self.induced.iter().all(|(_, g)| *g == GradedPoly::one())
    }
}

fn independent_rows(roots: &[Root], l: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..roots.len() {
        if chosen.len() == l {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        let rows: QMatrix = linalg::from_ints(&trial.iter().map(|&j| roots[j].clone()).collect::<Vec<_>>());
        let gram: QMatrix = (0..rows.len())
            .map(|a| (0..rows.len()).map(|b| rows[a].iter().zip(&rows[b]).map(|(x, y)| x * y).sum()).collect())
            .collect();
        if !linalg::det(&gram).is_zero() {
            chosen = trial;
        }
    }
    chosen
}

/// Solve `ln g²_α + α(c) = 0` on a maximal independent set of simple roots.
pub fn canonicalize(spec: &TodaSpec) -> Result<Canonical, TodaError> {
    let l = spec.l;
    let rows = independent_rows(&spec.roots, l);
    if rows.len() < l {
        return Err(TodaError::SingularSystem);
    }
    let m = linalg::from_ints(&rows.iter().map(|&j| spec.roots[j].clone()).collect::<Vec<_>>());
    let inv = linalg::inverse(&m).ok_or(TodaError::SingularSystem)?;
    let rhs: Vec<LogComb> = rows.iter().map(|&j| spec.couplings[j].scale(&-BigRational::one())).collect();
    let shift: Vec<LogComb> =
        inv.iter().map(|row| row.iter().zip(&rhs).fold(LogComb::zero(), |acc, (a, b)| acc.add(&b.scale(a)))).collect();
    let moved = transport(spec, &shift);
    let induced = (0..spec.roots.len())
        .filter(|i| !rows.contains(i))
        .map(|i| Ok((spec.roots[i].clone(), moved.couplings[i].exp()?)))
        .collect::<Result<Vec<_>, TodaError>>()?;
    Ok(Canonical { shift, spec: moved, induced })
}

/// `r = g²_{2ε_l} / (g²_{ε_l})²`; shift invariant, equal to 1 exactly on the osp class.
pub fn osp_class_invariant(spec: &TodaSpec) -> Result<GradedPoly, TodaError> {
    let l = spec.l;
    let mut long = vec![0; l];
    long[l - 1] = 2;
    let (Some(s), Some(d)) = (spec.index_of(&eps(l, l)), spec.index_of(&long)) else {
        return Err(TodaError::NotBcType);
    };
    let two = BigRational::from_integer(2.into());
    spec.couplings[d].sub(&spec.couplings[s].scale(&two)).exp()
}

/// Term-by-term equality; both sides are kept merged, so this is structural.
pub fn compare_operators(a: &DiffOperator, b: &DiffOperator) -> bool {
    a.l() == b.l() && a == b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingJson {
    pub root: String,
    pub ln_g2: LogCombJson,
    pub g2: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TodaDocument {
    pub schema: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub l: usize,
    pub couplings: Vec<CouplingJson>,
    pub operator: OperatorJson,
    pub invariant: Option<Vec<PolyTermJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shift: Option<Vec<LogCombJson>>,
    /// After canonicalization: whether every simple root ended with `g² = 1`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unit_couplings: Option<bool>,
}

pub fn document(spec: &TodaSpec, canonical: Option<&Canonical>) -> Result<TodaDocument, TodaError> {
    let shown = canonical.map_or(spec, |c| &c.spec);
    let invariant = match osp_class_invariant(spec) {
        Ok(r) => Some(r.to_json()),
        Err(TodaError::NotBcType) => None,
        Err(e) => return Err(e),
    };
    Ok(TodaDocument {
        schema: crate::json::SCHEMA.to_string(),
        kind: spec.kind.to_string(),
        l: spec.l,
        couplings: shown.to_json()?,
        operator: build_toda(shown)?.to_json(),
        invariant,
        shift: canonical.map(|c| c.shift.iter().map(LogComb::to_json).collect()),
        unit_couplings: canonical.map(Canonical::is_canonical),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::kappa;
    use crate::scalar::rat;

    fn ones(n: usize) -> Vec<BigRational> {
        vec![BigRational::one(); n]
    }

    #[test]
    fn bc_all_ones() {
        let op = build_toda(&bc_spec(2, &ones(3)).unwrap()).unwrap();
        assert_eq!(op.num_terms(), 5);
        assert_eq!(op.coefficient(&[1, -1], &[0, 0]), GradedPoly::one());
        assert_eq!(op.coefficient(&[0, 2], &[0, 0]), GradedPoly::one());
    }

    #[test]
    fn rank_one_shift_is_minus_ln_six() {
        let spec = osp_spec_numeric(1, &[rat(3, 1)]).unwrap();
        let c = canonicalize(&spec).unwrap();
        assert_eq!(c.shift, vec![LogComb::ln_int(6).scale(&rat(-1, 1))]);
        assert_eq!(c.shift[0].to_string(), "-ln 6");
        assert!(c.is_canonical());
        assert_eq!(build_toda(&c.spec).unwrap(), build_toda(&bc_spec(1, &ones(2)).unwrap()).unwrap());
    }

    #[test]
    fn symbolic_osp_is_canonical() {
        for l in 1..=4 {
            let spec = osp_spec_symbolic(l, kappa).unwrap();
            assert_eq!(osp_class_invariant(&spec).unwrap(), GradedPoly::one());
            let c = canonicalize(&spec).unwrap();
            assert!(c.is_canonical());
            let want = build_toda(&bc_spec(l, &ones(l + 1)).unwrap()).unwrap();
            assert!(compare_operators(&build_toda(&c.spec).unwrap(), &want));
        }
    }

    #[test]
    fn generic_bc_is_not_osp() {
        let spec = bc_spec(1, &[rat(2, 1), rat(5, 1)]).unwrap();
        assert_eq!(osp_class_invariant(&spec).unwrap(), GradedPoly::from_rational(rat(5, 4)));
        assert!(!canonicalize(&spec).unwrap().is_canonical());
    }

    #[test]
    fn commuting_square() {
        let spec = bc_spec(3, &[rat(2, 1), rat(3, 5), rat(7, 2), rat(9, 4)]).unwrap();
        let c = canonicalize(&spec).unwrap();
        assert_eq!(build_toda(&c.spec).unwrap(), translate(&build_toda(&spec).unwrap(), &c.shift).unwrap());
    }

    #[test]
    fn zero_shift_for_canonical() {
        let c = canonicalize(&bc_spec(3, &ones(4)).unwrap()).unwrap();
        assert!(c.shift.iter().all(LogComb::is_zero));
    }

    #[test]
    fn empty_simple_set() {
        let sys = RootSystem::from_simple(2, RootType::C, Vec::new()).unwrap();
        let spec = TodaSpec::new(&sys, Vec::new()).unwrap();
        assert_eq!(build_toda(&spec).unwrap(), DiffOperator::laplacian(2).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn bad_couplings() {
        assert_eq!(bc_spec(2, &[rat(1, 1), rat(0, 1), rat(1, 1)]), Err(TodaError::NonPositiveCoupling(2)));
        assert!(matches!(bc_spec(2, &ones(2)), Err(TodaError::CouplingCount { .. })));
        let c = TodaSpec::from_coordinate_order(&RootSystem::c(2).unwrap(), &ones(2)).unwrap();
        assert_eq!(osp_class_invariant(&c), Err(TodaError::NotBcType));
    }
}
