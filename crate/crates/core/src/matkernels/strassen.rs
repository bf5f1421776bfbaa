//! Strassen's seven-multiplication recursion with a naive base case.

use super::matrix::{naive_mul, Matrix};
use crate::error::{Error, Result};

/// Default size below which the recursion hands off to the triple loop.
pub const DEFAULT_CROSSOVER: usize = 64;

/// Product `A B` by Strassen recursion.
///
/// Each level pads odd dimensions by one zero row/column, splits into 2x2
/// blocks and forms the seven block products. Any dimension at or below
/// `crossover` falls back to the naive product.
pub fn strassen_mul(a: &Matrix, b: &Matrix, crossover: usize) -> Result<Matrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(recurse(a, b, crossover.max(1)))
}

fn recurse(a: &Matrix, b: &Matrix, crossover: usize) -> Matrix {
    let (m, n, s) = (a.rows(), a.cols(), b.cols());
    if m.min(n).min(s) <= crossover {
        return naive_mul(a, b);
    }
    let (m2, n2, s2) = (m.div_ceil(2), n.div_ceil(2), s.div_ceil(2));

    let a11 = block(a, 0, 0, m2, n2);
    let a12 = block(a, 0, n2, m2, n2);
    let a21 = block(a, m2, 0, m2, n2);
    let a22 = block(a, m2, n2, m2, n2);
    let b11 = block(b, 0, 0, n2, s2);
    let b12 = block(b, 0, s2, n2, s2);
    let b21 = block(b, n2, 0, n2, s2);
    let b22 = block(b, n2, s2, n2, s2);

    let p1 = recurse(&plus(&a11, &a22), &plus(&b11, &b22), crossover);
    let p2 = recurse(&plus(&a21, &a22), &b11, crossover);
    let p3 = recurse(&a11, &minus(&b12, &b22), crossover);
    let p4 = recurse(&a22, &minus(&b21, &b11), crossover);
    let p5 = recurse(&plus(&a11, &a12), &b22, crossover);
    let p6 = recurse(&minus(&a21, &a11), &plus(&b11, &b12), crossover);
    let p7 = recurse(&minus(&a12, &a22), &plus(&b21, &b22), crossover);

    let mut out = Matrix::zeros(m, s);
    for i in 0..m2 {
        for j in 0..s2 {
            let (c11, c12) = (
                p1[(i, j)] + p4[(i, j)] - p5[(i, j)] + p7[(i, j)],
                p3[(i, j)] + p5[(i, j)],
            );
            let (c21, c22) = (
                p2[(i, j)] + p4[(i, j)],
                p1[(i, j)] - p2[(i, j)] + p3[(i, j)] + p6[(i, j)],
            );
            out[(i, j)] = c11;
            if j + s2 < s {
                out[(i, j + s2)] = c12;
            }
            if i + m2 < m {
                out[(i + m2, j)] = c21;
                if j + s2 < s {
                    out[(i + m2, j + s2)] = c22;
                }
            }
        }
    }
    out
}

/// `rows x cols` block starting at (r0, c0); entries past the edge read as zero.
fn block(x: &Matrix, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
    let mut out = Matrix::zeros(rows, cols);
    let src_cols = x.cols();
    for i in 0..rows.min(x.rows().saturating_sub(r0)) {
        let w = cols.min(src_cols.saturating_sub(c0));
        let src = &x.as_slice()[(r0 + i) * src_cols + c0..(r0 + i) * src_cols + c0 + w];
        out.as_mut_slice()[i * cols..i * cols + w].copy_from_slice(src);
    }
    out
}

fn plus(x: &Matrix, y: &Matrix) -> Matrix {
    let data = x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a + b).collect();
    Matrix::from_vec(x.rows(), x.cols(), data).expect("equal block shapes")
}

fn minus(x: &Matrix, y: &Matrix) -> Matrix {
    let data = x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a - b).collect();
    Matrix::from_vec(x.rows(), x.cols(), data).expect("equal block shapes")
}
