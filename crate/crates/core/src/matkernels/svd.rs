//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns of the working copy are rotated pairwise until every pair is
//! orthogonal to working precision. The column norms are then the singular
//! values and the accumulated rotations form `V`. Columns are stored
//! contiguously (the working copy is the transpose of the input) so each
//! rotation touches two contiguous rows.

use super::matrix::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Full singular value decomposition `A = U diag(s) V^T`.
///
/// `u` is `m x m`, `v` is `n x n`, and `s` has `min(m, n)` non-negative
/// entries in non-increasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// `U[:, :k] diag(s[:k]) V[:, :k]^T`.
    pub fn reconstruct_rank(&self, k: usize) -> Matrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let k = k.min(self.s.len());
        let mut out = Matrix::zeros(m, n);
        for r in 0..k {
            let sr = self.s[r];
            if sr == 0.0 {
                continue;
            }
            for i in 0..m {
                let ui = self.u[(i, r)] * sr;
                if ui == 0.0 {
                    continue;
                }
                let row = &mut out.as_mut_slice()[i * n..(i + 1) * n];
                for (j, o) in row.iter_mut().enumerate() {
                    *o += ui * self.v[(j, r)];
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_rank(self.s.len())
    }
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.transpose())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

/// Singular values only.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.s)
}

fn svd_tall(a: &Matrix) -> Result<Svd> {
    let (m, n) = a.shape();
    // cols[j] is column j of A, length m
    let mut cols = a.transpose().into_vec();
    let mut v = Matrix::identity(n).into_vec();
    let tol = f64::EPSILON * (m as f64).sqrt();

    let mut converged = n < 2;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        converged = true;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (ci, cj) = pair(&mut cols, m, i, j);
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for (x, y) in ci.iter().zip(cj.iter()) {
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(ci, cj, c, s);
                let (vi, vj) = pair(&mut v, n, i, j);
                rotate(vi, vj, c, s);
            }
        }
    }

    let mut norms: Vec<(usize, f64)> = (0..n)
        .map(|j| {
            let c = &cols[j * m..(j + 1) * m];
            (j, c.iter().map(|x| x * x).sum::<f64>().sqrt())
        })
        .collect();
    norms.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));

    let s_max = norms.first().map_or(0.0, |x| x.1);
    let negligible = s_max * f64::EPSILON * (m.max(n) as f64);

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(n);
    let mut vm = Matrix::zeros(n, n);
    for (r, &(j, sigma)) in norms.iter().enumerate() {
        s.push(sigma);
        for row in 0..n {
            vm[(row, r)] = v[j * n + row];
        }
        if sigma > negligible && sigma > 0.0 {
            u_cols.push(cols[j * m..(j + 1) * m].iter().map(|x| x / sigma).collect());
        }
    }
    // Negligible sigmas sort last, so the completion lands in the trailing columns.
    complete_basis(&mut u_cols, m);
    let mut um = Matrix::zeros(m, m);
    for (r, col) in u_cols.iter().enumerate() {
        for (row, &x) in col.iter().enumerate() {
            um[(row, r)] = x;
        }
    }
    Ok(Svd { u: um, s, v: vm })
}

fn pair(buf: &mut [f64], len: usize, i: usize, j: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(i < j);
    let (lo, hi) = buf.split_at_mut(j * len);
    (&mut lo[i * len..(i + 1) * len], &mut hi[..len])
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = c * xa - s * yb;
        *b = s * xa + c * yb;
    }
}

/// Extends an orthonormal set of vectors in R^dim to a full basis, picking
/// at each step the standard basis vector with the largest residual.
pub(crate) fn complete_basis(basis: &mut Vec<Vec<f64>>, dim: usize) {
    // residual[l] = 1 - sum_b b[l]^2 is the squared distance of e_l from the span
    let mut residual = vec![1.0; dim];
    for b in basis.iter() {
        for (r, x) in residual.iter_mut().zip(b) {
            *r -= x * x;
        }
    }
    while basis.len() < dim {
        let e = (0..dim)
            .max_by(|&x, &y| residual[x].total_cmp(&residual[y]))
            .expect("dim > 0");
        let mut r = vec![0.0; dim];
        r[e] = 1.0;
        for _ in 0..2 {
            for b in basis.iter() {
                let d: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= d * bi;
                }
            }
        }
        let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        r.iter_mut().for_each(|x| *x /= nr);
        for (res, x) in residual.iter_mut().zip(&r) {
            *res -= x * x;
        }
        basis.push(r);
    }
}
