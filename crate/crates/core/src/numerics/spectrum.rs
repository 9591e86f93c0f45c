//! Dirichlet box discretization of `−Σ∂² + V` and its low spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Schrodinger;
use crate::diffop::DiffOperator;
use crate::error::NumericsError;

/// Axis-aligned box `Π [loᵢ, hiᵢ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub bounds: Vec<(f64, f64)>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, NumericsError> {
        if bounds.is_empty() || bounds.iter().any(|(a, b)| a.partial_cmp(b) != Some(std::cmp::Ordering::Less)) {
            return Err(NumericsError::BadGrid);
        }
        Ok(Self { bounds })
    }

    pub fn shifted(&self, c: &[f64]) -> Self {
        Self { bounds: self.bounds.iter().zip(c).map(|((a, b), s)| (a + s, b + s)).collect() }
    }
}

/// Second-order stencil on `n` interior points per axis with Dirichlet walls.
pub fn discretize(op: &DiffOperator, domain: &BoxDomain, n: usize) -> Result<DMatrix<f64>, NumericsError> {
    let s = Schrodinger::from_operator(op)?;
    if domain.bounds.len() != s.l {
        return Err(NumericsError::LengthMismatch(domain.bounds.len(), s.l));
    }
    if n < 2 {
        return Err(NumericsError::BadGrid);
    }
    let l = s.l;
    let size = n.pow(l as u32);
    let hs: Vec<f64> = domain.bounds.iter().map(|(a, b)| (b - a) / (n + 1) as f64).collect();
    let mut m = DMatrix::<f64>::zeros(size, size);
    let mut idx = vec![0usize; l];
    for row in 0..size {
        let mut r = row;
        for d in (0..l).rev() {
            idx[d] = r % n;
            r /= n;
        }
        let q: Vec<f64> = (0..l).map(|d| domain.bounds[d].0 + (idx[d] + 1) as f64 * hs[d]).collect();
        let mut diag = s.potential_at(&q);
        let mut stride = 1;
        for d in (0..l).rev() {
            let inv = 1.0 / (hs[d] * hs[d]);
            diag += 2.0 * inv;
            if idx[d] > 0 {
                m[(row, row - stride)] = -inv;
            }
            if idx[d] + 1 < n {
                m[(row, row + stride)] = -inv;
            }
            stride *= n;
        }
        m[(row, row)] = diag;
    }
    Ok(m)
}

/// The `k` smallest eigenvalues in increasing order.
pub fn lowest_eigenvalues(m: &DMatrix<f64>, k: usize) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.truncate(k);
    ev
}

pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).abs().max()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub domain: BoxDomain,
    pub shift: Vec<f64>,
    pub original: Vec<f64>,
    pub translated: Vec<f64>,
    pub max_difference: f64,
}

/// Spectra of `H` on `B` and of `H(· + c)` on `B − c`.
pub fn covariance(
    original: &DiffOperator,
    translated: &DiffOperator,
    shift: &[f64],
    domain: &BoxDomain,
    n: usize,
    k: usize,
) -> Result<CovarianceReport, NumericsError> {
    let minus: Vec<f64> = shift.iter().map(|c| -c).collect();
    let moved = domain.shifted(&minus);
    let a = lowest_eigenvalues(&discretize(original, domain, n)?, k);
    let b = lowest_eigenvalues(&discretize(translated, &moved, n)?, k);
    let max_difference = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(CovarianceReport { domain: domain.clone(), shift: shift.to_vec(), original: a, translated: b, max_difference })
}
