//! RK4 shooting for `ψ″ = (V(q) − μ²) ψ` on the rank-one potential.

use serde::{Deserialize, Serialize};

use super::{ode_residual, wronskian_drift, Bc1, Grid1D, Sampled};
use crate::error::NumericsError;
use crate::exec::Execution;

/// RK4 substeps per grid interval.
pub const SUBSTEPS: usize = 8;

fn rk4_step(pot: &Bc1, mu2: f64, q: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let f = |q: f64, y: [f64; 2]| [y[1], (pot.potential(q) - mu2) * y[0]];
    let k1 = f(q, y);
    let k2 = f(q + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
    let k3 = f(q + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
    let k4 = f(q + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Integrate from grid index `start` to `end` (either direction), returning
/// `(ψ, ψ′)` at each visited grid point, indexed like the grid.
pub fn integrate(pot: &Bc1, mu: f64, grid: &Grid1D, start: usize, end: usize, y0: [f64; 2]) -> Sampled {
    let n = grid.len();
    let mut value = vec![f64::NAN; n];
    let mut derivative = vec![f64::NAN; n];
    let mu2 = mu * mu;
    let dir: f64 = if end >= start { 1.0 } else { -1.0 };
    let h = dir * grid.step() / SUBSTEPS as f64;
    let mut y = y0;
    let mut i = start;
    value[i] = y[0];
    derivative[i] = y[1];
    while i != end {
        let q0 = grid.point(i);
        for s in 0..SUBSTEPS {
            y = rk4_step(pot, mu2, q0 + s as f64 * h, y, h);
        }
        i = if dir > 0.0 { i + 1 } else { i - 1 };
        value[i] = y[0];
        derivative[i] = y[1];
    }
    Sampled { value, derivative }
}

/// Decaying WKB data at `q`: `ψ = κ^{−1/2}`, `ψ′ = −(κ + κ′/(2κ)) ψ`, `κ = √(V − μ²)`.
pub fn wkb_seed(pot: &Bc1, mu: f64, q: f64) -> Result<[f64; 2], NumericsError> {
    let k2 = pot.potential(q) - mu * mu;
    if k2 <= 0.0 {
        return Err(NumericsError::NotSchrodinger(format!("no decaying WKB branch at q = {q}")));
    }
    let kappa = k2.sqrt();
    let e = q.exp();
    let dk2 = pot.b * e + 2.0 * pot.a * e * e;
    let dkappa = dk2 / (2.0 * kappa);
    let psi = kappa.powf(-0.5);
    Ok([psi, -(kappa + dkappa / (2.0 * kappa)) * psi])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingReport {
    pub mu: f64,
    pub b: f64,
    pub a: f64,
    pub grid: Grid1D,
    /// Residual of the forward copy on `[q_min, midpoint]`.
    pub forward_residual: f64,
    /// Relative mismatch of forward and backward copies at the midpoint.
    pub midpoint_mismatch: f64,
    /// Wronskian drift between the decaying solution and an oscillatory one shot forward.
    pub wronskian_drift: f64,
}

pub struct Bc1Solutions {
    pub backward: Sampled,
    pub forward: Sampled,
    pub oscillatory: Sampled,
}

/// Backward decaying solution normalized to unit maximum, its forward copy
/// restarted from the data at `q_min`, and an independent solution with
/// `ψ(q_min) = cos(μ q_min)`, `ψ′(q_min) = −μ sin(μ q_min)`.
pub fn solve_bc1(pot: &Bc1, mu: f64, grid: &Grid1D) -> Result<Bc1Solutions, NumericsError> {
    let n = grid.len();
    let seed = wkb_seed(pot, mu, grid.q_max())?;
    let mut backward = integrate(pot, mu, grid, n - 1, 0, seed);
    let scale = backward.value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in backward.value.iter_mut().chain(backward.derivative.iter_mut()) {
        *v /= scale;
    }
    let forward = integrate(pot, mu, grid, 0, n - 1, [backward.value[0], backward.derivative[0]]);
    let q0 = grid.q_min();
    let oscillatory = integrate(pot, mu, grid, 0, n - 1, [(mu * q0).cos(), -mu * (mu * q0).sin()]);
    Ok(Bc1Solutions { backward, forward, oscillatory })
}

pub fn shoot_bc1(pot: &Bc1, mu: f64, grid: &Grid1D, exec: Execution) -> Result<ShootingReport, NumericsError> {
    let s = solve_bc1(pot, mu, grid)?;
    let mid = grid.len() / 2;
    let head = Grid1D::new(grid.q_min(), grid.point(mid), mid + 1)?;
    let forward_residual = ode_residual(pot, mu, &s.forward.value[..=mid], &head, exec)?;
    let midpoint_mismatch = (s.forward.value[mid] - s.backward.value[mid]).abs();
    let wronskian_drift = wronskian_drift(&s.backward, &s.oscillatory)?;
    Ok(ShootingReport { mu, b: pot.b, a: pot.a, grid: *grid, forward_residual, midpoint_mismatch, wronskian_drift })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bc1_two_directions_agree() {
        let g = Grid1D::new(-10.0, 2.0, 2401).unwrap();
        let pot = Bc1::new(1.0, 1.0).unwrap();
        for mu in [0.5, 1.0, 2.0] {
            let r = shoot_bc1(&pot, mu, &g, Execution::Sequential).unwrap();
            assert!(r.wronskian_drift <= 1e-8, "{r:?}");
            assert!(r.midpoint_mismatch <= 1e-8, "{r:?}");
            assert!(r.forward_residual <= 1e-8, "{r:?}");
        }
    }

    #[test]
    fn seed_needs_a_classically_forbidden_end() {
        let pot = Bc1::new(0.0, 0.0).unwrap();
        assert!(wkb_seed(&pot, 1.0, 0.0).is_err());
    }
}
