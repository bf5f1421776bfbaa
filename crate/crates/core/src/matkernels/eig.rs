//! Cyclic Jacobi eigensolver for real symmetric matrices.

use super::matrix::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;
const SYMMETRY_TOL: f64 = 1e-10;

/// `A = Q diag(values) Q^T` with eigenvalues in non-increasing order.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub q: Matrix,
    pub values: Vec<f64>,
}

impl SymEig {
    /// `Q diag(f(lambda)) Q^T`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for (k, &w) in fl.iter().enumerate() {
                    acc += self.q[(i, k)] * w * self.q[(j, k)];
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }
}

pub fn sym_eig(a: &Matrix) -> Result<SymEig> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let norm = a.frobenius_norm();
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL * norm {
        return Err(Error::NotSymmetric(asym / norm));
    }
    let mut w = a.symmetrized();
    let mut q = Matrix::identity(n);

    let mut sweep = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| w[(i, j)] * w[(i, j)])
            .sum();
        if off.sqrt() <= f64::EPSILON * norm * 1e-2 || off == 0.0 {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for r in p + 1..n {
                let apr = w[(p, r)];
                let (app, arr) = (w[(p, p)], w[(r, r)]);
                // Skip entries already negligible relative to both diagonals.
                if apr.abs() <= f64::EPSILON * 1e-2 * (app.abs() + arr.abs()).max(f64::MIN_POSITIVE)
                    || apr == 0.0
                {
                    w[(p, r)] = 0.0;
                    w[(r, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (arr - app) / (2.0 * apr);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (wkp, wkr) = (w[(k, p)], w[(k, r)]);
                    w[(k, p)] = c * wkp - s * wkr;
                    w[(k, r)] = s * wkp + c * wkr;
                }
                for k in 0..n {
                    let (wpk, wrk) = (w[(p, k)], w[(r, k)]);
                    w[(p, k)] = c * wpk - s * wrk;
                    w[(r, k)] = s * wpk + c * wrk;
                }
                w[(p, r)] = 0.0;
                w[(r, p)] = 0.0;
                for k in 0..n {
                    let (qkp, qkr) = (q[(k, p)], q[(k, r)]);
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| w[(y, y)].total_cmp(&w[(x, x)]).then(x.cmp(&y)));
    let values = order.iter().map(|&i| w[(i, i)]).collect();
    let qs = Matrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok(SymEig { q: qs, values })
}
