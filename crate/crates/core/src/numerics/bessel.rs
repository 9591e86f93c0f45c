//! Modified Bessel functions from `K_ν(z) = ∫₀^∞ e^{−z cosh t} cosh(νt) dt`.
//!
//! The integrand is entire and decays double-exponentially, so the trapezoid
//! error roughly squares with each halving of the step. Halving stops once two
//! successive sums agree to `1e−9`; one further halving is then taken.

use super::{Grid1D, Sampled};
use crate::error::NumericsError;
use crate::exec::Execution;

const AGREE: f64 = 1e-9;
const MAX_HALVINGS: usize = 16;

fn trapezoid(f: impl Fn(f64) -> f64, t_max: f64) -> f64 {
    let mut h = 0.25f64.min(t_max / 4.0);
    let mut n = (t_max / h).ceil() as usize;
    h = t_max / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(t_max)) + (1..n).map(|k| f(k as f64 * h)).sum::<f64>();
    let mut prev = sum * h;
    let mut converged = false;
    for _ in 0..MAX_HALVINGS {
        let odd: f64 = (0..n).map(|k| f((2 * k + 1) as f64 * h / 2.0)).sum();
        sum += odd;
        n *= 2;
        h /= 2.0;
        let cur = sum * h;
        let done = converged;
        converged = (cur - prev).abs() <= AGREE;
        prev = cur;
        if done {
            break;
        }
    }
    prev
}

fn cutoff(z: f64, growth: f64) -> f64 {
    let mut t = (50.0 / z).max(1.0).acosh() + 1.0;
    while z * t.cosh() - growth * t < 50.0 {
        t += 0.5;
    }
    t
}

/// `K_{iτ}(z)` for real `τ` and `z > 0`.
pub fn bessel_k_imag(tau: f64, z: f64) -> f64 {
    trapezoid(|t| (-z * t.cosh()).exp() * (tau * t).cos(), cutoff(z, 0.0))
}

/// `K_ν(z)` for real `ν` and `z > 0`.
pub fn bessel_k_real(nu: f64, z: f64) -> f64 {
    trapezoid(|t| (-z * t.cosh() + nu.abs() * t).exp() * 0.5 * (1.0 + (-2.0 * nu.abs() * t).exp()), cutoff(z, nu.abs()))
}

/// `ψ(q) = K_{2iμ}(2√b e^{q/2})`, which solves `−ψ″ + b e^q ψ = μ²ψ`.
pub fn liouville_solution(b: f64, mu: f64, q: f64) -> f64 {
    bessel_k_imag(2.0 * mu, 2.0 * b.sqrt() * (q / 2.0).exp())
}

pub fn liouville_samples(b: f64, mu: f64, grid: &Grid1D, exec: Execution) -> Vec<f64> {
    grid.sample(|q| liouville_solution(b, mu, q), exec)
}

/// Oracle samples with stencil derivatives.
pub fn liouville_sampled(b: f64, mu: f64, grid: &Grid1D, exec: Execution) -> Result<Sampled, NumericsError> {
    Sampled::from_values(liouville_samples(b, mu, grid, exec), grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_order_closed_form() {
        for z in [0.1, 1.0, 3.5, 10.0] {
            let want = (PI / (2.0 * z)).sqrt() * (-z).exp();
            let got = bessel_k_real(0.5, z);
            assert!((got - want).abs() <= 1e-14 * want.max(1e-300) + 1e-16, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn order_zero_reference() {
        assert!((bessel_k_real(0.0, 1.0) - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((bessel_k_imag(0.0, 1.0) - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn imaginary_order_small_argument_asymptotics() {
        // K_{iτ}(z) ≈ −sqrt(π/(τ sinh πτ)) sin(τ ln(z/2) − arg Γ(1+iτ)); check the modulus envelope.
        let tau: f64 = 2.0;
        let amp = (PI / (tau * (PI * tau).sinh())).sqrt();
        let max = (0..700).map(|k| bessel_k_imag(tau, 1e-5 * (k as f64 * 0.005).exp()).abs()).fold(0.0, f64::max);
        assert!((max - amp).abs() < 1e-3 * amp, "{max} vs {amp}");
    }
}

#[cfg(test)]
mod liouville {
    use super::*;
    use crate::numerics::{ode_residual, Bc1};

    #[test]
    fn oracle_satisfies_the_ode() {
        let g = Grid1D::new(-10.0, 2.0, 2401).unwrap();
        let pot = Bc1::new(1.0, 0.0).unwrap();
        for mu in [0.5, 1.0, 2.0] {
            let psi = liouville_samples(1.0, mu, &g, Execution::default());
            let r = ode_residual(&pot, mu, &psi, &g, Execution::default()).unwrap();
            assert!(r <= 1e-8);
        }
    }
}
