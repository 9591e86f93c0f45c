//! Binary64 cross-checks of the rank-one and rank-two eigenvalue problems.

pub mod bessel;
pub mod shooting;
pub mod spectrum;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOperator;
use crate::error::NumericsError;
use crate::exec::Execution;
use crate::logs::{LogAtom, LogComb};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    q_min: f64,
    q_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(q_min: f64, q_max: f64, n: usize) -> Result<Self, NumericsError> {
        if n < 16
            || q_min.partial_cmp(&q_max) != Some(std::cmp::Ordering::Less)
            || !q_min.is_finite()
            || !q_max.is_finite()
        {
            return Err(NumericsError::BadGrid);
        }
        Ok(Self { q_min, q_max, n })
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self { q_min: self.q_min + c, q_max: self.q_max + c, n: self.n }
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64 + Sync + Send, exec: Execution) -> Vec<f64> {
        exec.map_range(self.n, |i| f(self.point(i)))
    }
}

/// Rank-one potential `b e^q + a e^{2q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bc1 {
    pub b: f64,
    pub a: f64,
}

impl Bc1 {
    pub fn new(b: f64, a: f64) -> Result<Self, NumericsError> {
        if b < 0.0 || a < 0.0 {
            return Err(NumericsError::NegativeCoupling);
        }
        Ok(Self { b, a })
    }

    pub fn potential(&self, q: f64) -> f64 {
        let e = q.exp();
        self.b * e + self.a * e * e
    }
}

fn second_derivative(psi: &[f64], i: usize, h: f64) -> f64 {
    (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h * h)
}

fn first_derivative(psi: &[f64], i: usize, h: f64) -> f64 {
    (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h)
}

/// Pointwise `|−ψ″ + Vψ − μ²ψ|` at interior points, with a five-point stencil.
pub fn residual_profile(
    pot: &Bc1,
    mu: f64,
    psi: &[f64],
    grid: &Grid1D,
    exec: Execution,
) -> Result<Vec<f64>, NumericsError> {
    if psi.len() != grid.len() {
        return Err(NumericsError::LengthMismatch(psi.len(), grid.len()));
    }
    let h = grid.step();
    Ok(exec.map_range(grid.len() - 4, |k| {
        let i = k + 2;
        let v = pot.potential(grid.point(i));
        (-second_derivative(psi, i, h) + (v - mu * mu) * psi[i]).abs()
    }))
}

pub fn ode_residual(pot: &Bc1, mu: f64, psi: &[f64], grid: &Grid1D, exec: Execution) -> Result<f64, NumericsError> {
    Ok(residual_profile(pot, mu, psi, grid, exec)?.into_iter().fold(0.0, f64::max))
}

/// Samples of a solution together with its derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    pub value: Vec<f64>,
    pub derivative: Vec<f64>,
}

impl Sampled {
    /// Derivative by the fourth-order central stencil, one-sided copies at the ends.
    pub fn from_values(value: Vec<f64>, grid: &Grid1D) -> Result<Self, NumericsError> {
        if value.len() != grid.len() {
            return Err(NumericsError::LengthMismatch(value.len(), grid.len()));
        }
        let h = grid.step();
        let n = value.len();
        let mut derivative = vec![0.0; n];
        for (i, d) in derivative.iter_mut().enumerate().take(n - 2).skip(2) {
            *d = first_derivative(&value, i, h);
        }
        derivative[0] = derivative[2];
        derivative[1] = derivative[2];
        derivative[n - 1] = derivative[n - 3];
        derivative[n - 2] = derivative[n - 3];
        Ok(Self { value, derivative })
    }

    fn interior(&self, from_values: bool) -> std::ops::Range<usize> {
        let n = self.value.len();
        if from_values {
            2..n - 2
        } else {
            0..n
        }
    }
}

/// `max |W(q) − W(q₀)| / |W(q₀)|` with `W = ψ₁ψ₂′ − ψ₂ψ₁′` and `q₀` the grid midpoint.
pub fn wronskian_drift(a: &Sampled, b: &Sampled) -> Result<f64, NumericsError> {
    wronskian_drift_on(a, b, 0..a.value.len())
}

/// Same, restricted to points whose derivatives came from the stencil.
pub fn wronskian_drift_interior(a: &Sampled, b: &Sampled) -> Result<f64, NumericsError> {
    wronskian_drift_on(a, b, a.interior(true))
}

fn wronskian_drift_on(a: &Sampled, b: &Sampled, range: std::ops::Range<usize>) -> Result<f64, NumericsError> {
    if a.value.len() != b.value.len() {
        return Err(NumericsError::LengthMismatch(a.value.len(), b.value.len()));
    }
    let w = |i: usize| a.value[i] * b.derivative[i] - b.value[i] * a.derivative[i];
    let w0 = w(a.value.len() / 2);
    if w0.abs() < 1e-12 {
        return Err(NumericsError::DegenerateWronskian(w0));
    }
    Ok(range.map(|i| (w(i) - w0).abs() / w0.abs()).fold(0.0, f64::max))
}

/// Numeric value of a log combination; symbolic atoms are rejected.
pub fn log_value(c: &LogComb) -> Result<f64, NumericsError> {
    let mut v = rational_value(c.constant_part());
    for (a, r) in c.atoms() {
        match a {
            LogAtom::Prime(p) => v += rational_value(r) * (*p as f64).ln(),
            LogAtom::Symbol(s) => return Err(NumericsError::NonNumeric(format!("ln {s}"))),
        }
    }
    Ok(v)
}

pub fn rational_value(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Schrödinger data `−Σ∂² + Σ c e^{n·q}` read off an operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Schrodinger {
    pub l: usize,
    pub potential: Vec<(Vec<i64>, f64)>,
}

impl Schrodinger {
    pub fn from_operator(op: &DiffOperator) -> Result<Self, NumericsError> {
        let l = op.l();
        let mut lap = BTreeMap::new();
        let mut potential = Vec::new();
        for ((n, m), c) in op.terms() {
            let s = c.as_constant().ok_or_else(|| NumericsError::NonNumeric(c.pretty()))?;
            let r = s.as_rational().ok_or_else(|| NumericsError::NonNumeric(c.pretty()))?.clone();
            let order: u32 = m.iter().sum();
            match order {
                0 => {
                    if r < BigRational::zero() {
                        return Err(NumericsError::NegativeCoupling);
                    }
                    potential.push((n.clone(), rational_value(&r)));
                }
                2 if n.iter().all(|v| *v == 0) && m.contains(&2) => {
                    lap.insert(m.iter().position(|v| *v == 2).expect("index"), r);
                }
                _ => return Err(NumericsError::NotSchrodinger(format!("term with derivative {m:?}"))),
            }
        }
        let minus_one = -BigRational::from_integer(1.into());
        if lap.len() != l || lap.values().any(|v| *v != minus_one) {
            return Err(NumericsError::NotSchrodinger("kinetic part is not -Σ∂²".into()));
        }
        Ok(Self { l, potential })
    }

    pub fn potential_at(&self, q: &[f64]) -> f64 {
        self.potential.iter().map(|(n, c)| c * n.iter().zip(q).map(|(k, x)| *k as f64 * x).sum::<f64>().exp()).sum()
    }

    /// Rank-one case as `(b, a)` with potential `b e^q + a e^{2q}`.
    pub fn as_bc1(&self) -> Result<Bc1, NumericsError> {
        if self.l != 1 {
            return Err(NumericsError::NotSchrodinger(format!("rank {} is not one", self.l)));
        }
        let (mut b, mut a) = (0.0, 0.0);
        for (n, c) in &self.potential {
            match n[0] {
                1 => b += c,
                2 => a += c,
                k => return Err(NumericsError::NotSchrodinger(format!("exponent {k}"))),
            }
        }
        Bc1::new(b, a)
    }
}

/// Image of a rank-one operator under `z = 2e^{q/2}`: `e^{nq} ↦ z^{2n}/4ⁿ`,
/// `∂ ↦ θ/2` with `θ = z d/dz`. Keys are `(power of z, power of θ)`.
pub fn bessel_reduction(op: &DiffOperator) -> Result<BTreeMap<(i64, u32), BigRational>, NumericsError> {
    if op.l() != 1 {
        return Err(NumericsError::NotSchrodinger("rank is not one".into()));
    }
    let mut out: BTreeMap<(i64, u32), BigRational> = BTreeMap::new();
    for ((n, m), c) in op.terms() {
        let s = c.as_constant().ok_or_else(|| NumericsError::NonNumeric(c.pretty()))?;
        let r = s.as_rational().ok_or_else(|| NumericsError::NonNumeric(c.pretty()))?;
        let four_n = num_traits::pow(BigRational::from_integer(4.into()), n[0].unsigned_abs() as usize);
        let scale = if n[0] >= 0 { r / four_n } else { r * four_n };
        let two_m = num_traits::pow(BigRational::from_integer(2.into()), m[0] as usize);
        let v = out.entry((2 * n[0], m[0])).or_insert_with(BigRational::zero);
        *v += scale / two_m;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GradedPoly;
    use crate::scalar::{rat, Scalar};

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 1.0, 15).is_err());
        assert!(Grid1D::new(1.0, 1.0, 100).is_err());
        let g = Grid1D::new(-10.0, 2.0, 2401).unwrap();
        assert!((g.step() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn free_equation_residual_is_fourth_order() {
        let pot = Bc1::new(0.0, 0.0).unwrap();
        let mu = 1.0;
        let mut errs = Vec::new();
        for n in [201, 401] {
            let g = Grid1D::new(0.0, 10.0, n).unwrap();
            let psi = g.sample(|q| (mu * q).cos(), Execution::Sequential);
            errs.push(ode_residual(&pot, mu, &psi, &g, Execution::Sequential).unwrap());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order >= 3.5, "observed order {order}");
    }

    #[test]
    fn free_wronskian() {
        let g = Grid1D::new(-5.0, 5.0, 2001).unwrap();
        let mu = 1.0;
        let c = Sampled {
            value: g.sample(|q| (mu * q).cos(), Execution::Sequential),
            derivative: g.sample(|q| -mu * (mu * q).sin(), Execution::Sequential),
        };
        let s = Sampled {
            value: g.sample(|q| (mu * q).sin(), Execution::Sequential),
            derivative: g.sample(|q| mu * (mu * q).cos(), Execution::Sequential),
        };
        assert!(wronskian_drift(&c, &s).unwrap() <= 1e-10);
        let c2 = Sampled::from_values(c.value.clone(), &g).unwrap();
        let s2 = Sampled::from_values(s.value.clone(), &g).unwrap();
        assert!(wronskian_drift_interior(&c2, &s2).unwrap() <= 1e-10);
        let zero = Sampled { value: vec![0.0; g.len()], derivative: vec![0.0; g.len()] };
        assert!(matches!(wronskian_drift(&c, &zero), Err(NumericsError::DegenerateWronskian(_))));
    }

    #[test]
    fn liouville_reduces_to_bessel() {
        let op = DiffOperator::laplacian(1).scale(&Scalar::from_int(-1)).add(&DiffOperator::potential(
            1,
            vec![1],
            GradedPoly::one(),
        ));
        let red = bessel_reduction(&op).unwrap();
        let want = BTreeMap::from([((0, 2), rat(-1, 4)), ((2, 0), rat(1, 4))]);
        assert_eq!(red, want);
    }

    #[test]
    fn schrodinger_extraction() {
        let op = DiffOperator::laplacian(1)
            .scale(&Scalar::from_int(-1))
            .add(&DiffOperator::potential(1, vec![1], GradedPoly::from_int(2)))
            .add(&DiffOperator::potential(1, vec![2], GradedPoly::from_int(4)));
        let s = Schrodinger::from_operator(&op).unwrap();
        assert_eq!(s.as_bc1().unwrap(), Bc1 { b: 2.0, a: 4.0 });
        assert!(Schrodinger::from_operator(&DiffOperator::laplacian(1)).is_err());
    }

    #[test]
    fn log_values() {
        let c = LogComb::ln_int(6).scale(&rat(-1, 1));
        assert!((log_value(&c).unwrap() + 6f64.ln()).abs() < 1e-15);
        assert!(log_value(&LogComb::ln_symbol("k1")).is_err());
    }
}
