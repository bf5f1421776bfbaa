//! Random fixtures for unit tests.

use crate::matkernels::Matrix;
use crate::rng::SeededRng;
use crate::tensor::Tensor3;

pub fn rng(seed: u64) -> SeededRng {
    SeededRng::new(seed)
}

pub fn gaussian_matrix(r: &mut SeededRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| r.normal())
}

pub fn random_spd(r: &mut SeededRng, n: usize) -> Matrix {
    let g = gaussian_matrix(r, n, n);
    g.matmul(&g.transpose())
        .unwrap()
        .add(&Matrix::identity(n).scale(n as f64 * 0.5))
        .unwrap()
}

pub fn gaussian_tensor(r: &mut SeededRng, m: usize, n: usize, p: usize) -> Tensor3 {
    Tensor3::from_fn(m, n, p, |_, _, _| r.normal())
}
