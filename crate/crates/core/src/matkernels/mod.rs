//! Dense matrix primitives used slice-wise by the tensor algebra.

mod eig;
mod inverse;
mod matrix;
mod spd;
mod strassen;
mod svd;

pub use eig::{sym_eig, SymEig};
pub use inverse::{cholesky, inverse, spd_solve};
pub use matrix::Matrix;
pub use spd::{matrix_geomean, matrix_geomean_t, spd_power, DEFAULT_PD_TOL};
pub use strassen::{strassen_mul, DEFAULT_CROSSOVER};
pub use svd::{singular_values, svd, Svd};
