//! Determinant analogues for `2 x 2 x 2` tensors.
//!
//! Index convention: `a_ijk` (0-based) is entry `(i+1, j+1)` of frontal
//! slice `k+1`.

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// `a1 x^2 + a2 xy + a3 y^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Quadratic {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a1 * x * x + self.a2 * x * y + self.a3 * y * y
    }
}

/// Resultant of two binary quadratic forms; zero iff they share a projective root.
pub fn quadratic_resultant(f1: Quadratic, f2: Quadratic) -> f64 {
    let Quadratic { a1, a2, a3 } = f1;
    let Quadratic { a1: b1, a2: b2, a3: b3 } = f2;
    a3 * a3 * b1 * b1 - a2 * a3 * b1 * b2 + a1 * a3 * b2 * b2 + a2 * a2 * b1 * b3
        - 2.0 * a1 * a3 * b1 * b3
        - a1 * a2 * b2 * b3
        + a1 * a1 * b3 * b3
}

fn check_shape(a: &Tensor3) -> Result<()> {
    if a.dims() != (2, 2, 2) {
        return Err(Error::WrongShape {
            expected: "2x2x2",
            got: format!("{}x{}x{}", a.m(), a.n(), a.p()),
        });
    }
    Ok(())
}

/// The quadratic form of lateral slice `j` (0-based), with the cross term symmetrized.
pub fn lateral_quadratic(a: &Tensor3, j: usize) -> Result<Quadratic> {
    check_shape(a)?;
    let l = |i, k| a.at(i, j, k);
    Ok(Quadratic::new(l(0, 0), l(0, 1) + l(1, 0), l(1, 1)))
}

/// Resultant of the two lateral-slice quadratics.
pub fn resultant_2x2x2(a: &Tensor3) -> Result<f64> {
    Ok(quadratic_resultant(lateral_quadratic(a, 0)?, lateral_quadratic(a, 1)?))
}

/// The degree-4 hyperdeterminant polynomial in the form used by the
/// reference worked examples.
///
/// Two of the six `-2` terms differ from the textbook expansion (see
/// [`cayley_hyperdet_2x2x2`]), so this polynomial is not invariant under
/// swapping the frontal slices.
pub fn hyperdet_2x2x2(t: &Tensor3) -> Result<f64> {
    check_shape(t)?;
    let a = |i, j, k| t.at(i, j, k);
    Ok(a(0, 0, 0).powi(2) * a(1, 1, 1).powi(2)
        + a(0, 0, 1).powi(2) * a(1, 1, 0).powi(2)
        + a(0, 1, 0).powi(2) * a(1, 0, 1).powi(2)
        + a(1, 0, 0).powi(2) * a(0, 1, 1).powi(2)
        - 2.0
            * (a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1)
                + a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1)
                + a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 1)
                + a(0, 1, 0) * a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1))
        + 4.0
            * (a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0) * a(1, 1, 1)))
}

/// Cayley's hyperdeterminant in its textbook form, invariant under
/// permutations of the three index positions and under flipping any index.
pub fn cayley_hyperdet_2x2x2(t: &Tensor3) -> Result<f64> {
    check_shape(t)?;
    let a = |i, j, k| t.at(i, j, k);
    Ok(a(0, 0, 0).powi(2) * a(1, 1, 1).powi(2)
        + a(0, 0, 1).powi(2) * a(1, 1, 0).powi(2)
        + a(0, 1, 0).powi(2) * a(1, 0, 1).powi(2)
        + a(1, 0, 0).powi(2) * a(0, 1, 1).powi(2)
        - 2.0
            * (a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1)
                + a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1)
                + a(0, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 1)
                + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 0)
                + a(0, 1, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 0, 1))
        + 4.0
            * (a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0) * a(1, 1, 1)))
}
