//! Functions of symmetric positive-definite matrices.

use super::eig::sym_eig;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Default relative threshold separating positive-definite from indefinite spectra.
pub const DEFAULT_PD_TOL: f64 = 1e-12;

/// `A^t` for symmetric positive-definite `A`, via the eigendecomposition.
///
/// Rejects `A` when `lambda_min <= pd_tol * lambda_max`.
pub fn spd_power(a: &Matrix, t: f64, pd_tol: f64) -> Result<Matrix> {
    let e = sym_eig(a)?;
    let lambda_max = e.values.first().copied().unwrap_or(0.0);
    let lambda_min = e.values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 || lambda_min <= pd_tol * lambda_max {
        return Err(Error::NotPositiveDefinite {
            lambda_min,
            lambda_max,
        });
    }
    Ok(e.map_values(|l| l.powf(t)))
}

/// Weighted geometric mean `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`.
pub fn matrix_geomean_t(a: &Matrix, b: &Matrix, t: f64) -> Result<Matrix> {
    let e = sym_eig(a)?;
    let lambda_max = e.values.first().copied().unwrap_or(0.0);
    let lambda_min = e.values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 || lambda_min <= DEFAULT_PD_TOL * lambda_max {
        return Err(Error::NotPositiveDefinite {
            lambda_min,
            lambda_max,
        });
    }
    let half = e.map_values(f64::sqrt);
    let neg_half = e.map_values(|l| 1.0 / l.sqrt());
    let inner = neg_half.matmul(b)?.matmul(&neg_half)?.symmetrized();
    let inner_t = spd_power(&inner, t, DEFAULT_PD_TOL)?;
    Ok(half.matmul(&inner_t)?.matmul(&half)?.symmetrized())
}

/// Geometric mean `A # B` (t = 1/2).
pub fn matrix_geomean(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    matrix_geomean_t(a, b, 0.5)
}
