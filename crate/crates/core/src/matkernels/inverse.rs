//! Dense inverse and symmetric positive-definite solves.

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::Singular);
    }
    let threshold = scale * f64::EPSILON * n as f64;
    let mut w = a.clone();
    let mut inv = Matrix::identity(n);
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&x, &y| w[(x, c)].abs().total_cmp(&w[(y, c)].abs()))
            .unwrap();
        if w[(piv, c)].abs() <= threshold {
            return Err(Error::Singular);
        }
        if piv != c {
            for j in 0..n {
                w.as_mut_slice().swap(c * n + j, piv * n + j);
                inv.as_mut_slice().swap(c * n + j, piv * n + j);
            }
        }
        let d = 1.0 / w[(c, c)];
        for j in 0..n {
            w[(c, j)] *= d;
            inv[(c, j)] *= d;
        }
        for r in 0..n {
            if r == c {
                continue;
            }
            let f = w[(r, c)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                w[(r, j)] -= f * w[(c, j)];
                inv[(r, j)] -= f * inv[(c, j)];
            }
        }
    }
    Ok(inv)
}

/// Lower Cholesky factor `L` with `A = L L^T`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("cholesky of non-square matrix".into()));
    }
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite {
                lambda_min: d,
                lambda_max: a.max_abs(),
            });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `A X = B` for symmetric positive-definite `A`.
pub fn spd_solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with {} right-hand-side rows",
            a.rows(),
            a.cols(),
            b.rows()
        )));
    }
    let l = cholesky(a)?;
    let (n, k) = (b.rows(), b.cols());
    let mut x = b.clone();
    for c in 0..k {
        for i in 0..n {
            let mut s = x[(i, c)];
            for j in 0..i {
                s -= l[(i, j)] * x[(j, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for j in i + 1..n {
                s -= l[(j, i)] * x[(j, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    Ok(x)
}
