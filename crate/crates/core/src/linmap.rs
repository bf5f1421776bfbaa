//! Full-rank linear maps acting along the third mode.
//!
//! A `q x p` matrix `M` of full rank is invertible (`q = p`), surjective
//! (`q < p`) or injective (`q > p`). Its Moore-Penrose inverse is computed
//! from the one-sided closed forms `M^T (M M^T)^{-1}` and `(M^T M)^{-1} M^T`
//! with a Cholesky solve, and `M^{-1}` in the square case.

use crate::error::{Error, Result};
use crate::matkernels::{inverse, singular_values, spd_solve, sym_eig, Matrix};
use crate::rng::SeededRng;
use crate::tensor::Tensor3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Invertible,
    Surjective,
    Injective,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::Invertible => "invertible",
            MapKind::Surjective => "surjective",
            MapKind::Injective => "injective",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullRankMap {
    matrix: Matrix,
    pinv: Matrix,
    kind: MapKind,
}

/// `max(p, q) * eps`, relative to the largest singular value.
pub fn default_rank_tol(q: usize, p: usize) -> f64 {
    q.max(p) as f64 * f64::EPSILON
}

impl FullRankMap {
    /// Classifies with the default rank tolerance.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let tol = default_rank_tol(matrix.rows(), matrix.cols());
        Self::classify(matrix, tol)
    }

    /// Checks full rank (`sigma_min > rank_tol * sigma_max`), sets the kind
    /// from the shape and caches the pseudoinverse.
    pub fn classify(matrix: Matrix, rank_tol: f64) -> Result<Self> {
        let (q, p) = matrix.shape();
        if q == 0 || p == 0 {
            return Err(Error::DimensionMismatch("empty map matrix".into()));
        }
        let s = singular_values(&matrix)?;
        let (sigma_max, sigma_min) = (s[0], *s.last().unwrap());
        if sigma_min <= rank_tol * sigma_max {
            return Err(Error::NotFullRank {
                sigma_min,
                sigma_max,
            });
        }
        let mt = matrix.transpose();
        let (kind, pinv) = if q == p {
            (MapKind::Invertible, inverse(&matrix)?)
        } else if q < p {
            // (M M^T)^{-1} M is q x p; its transpose is M^T (M M^T)^{-1}.
            let gram = matrix.matmul(&mt)?;
            (MapKind::Surjective, spd_solve(&gram, &matrix)?.transpose())
        } else {
            let gram = mt.matmul(&matrix)?;
            (MapKind::Injective, spd_solve(&gram, &mt)?)
        };
        Ok(Self { matrix, pinv, kind })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            matrix: Matrix::identity(p),
            pinv: Matrix::identity(p),
            kind: MapKind::Invertible,
        }
    }

    /// Output dimension (rows of `M`).
    pub fn q(&self) -> usize {
        self.matrix.rows()
    }

    /// Input dimension (columns of `M`).
    pub fn p(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn pinv(&self) -> &Matrix {
        &self.pinv
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    /// `T x_3 M`.
    pub fn forward(&self, t: &Tensor3) -> Result<Tensor3> {
        mode3_product(t, &self.matrix)
    }

    /// `T x_3 M^+`.
    pub fn backward(&self, t: &Tensor3) -> Result<Tensor3> {
        mode3_product(t, &self.pinv)
    }
}

/// Mode-3 product `T x_3 W`: every fiber of `T` is multiplied by `W`.
///
/// With slice-major storage, output slice `r` is `sum_k W[r, k] * T^(k)`.
pub fn mode3_product(t: &Tensor3, w: &Matrix) -> Result<Tensor3> {
    if w.cols() != t.p() {
        return Err(Error::DimensionMismatch(format!(
            "mode-3 product of depth-{} tensor with {}x{} matrix",
            t.p(),
            w.rows(),
            w.cols()
        )));
    }
    let (m, n) = (t.m(), t.n());
    let mut out = Tensor3::zeros(m, n, w.rows());
    for r in 0..w.rows() {
        let dst = out.slice_values_mut(r);
        for (k, &wrk) in w.row(r).iter().enumerate() {
            if wrk == 0.0 {
                continue;
            }
            for (d, s) in dst.iter_mut().zip(t.slice_values(k)) {
                *d += wrk * s;
            }
        }
    }
    Ok(out)
}

/// Sylvester Hadamard matrix of order `n`, `H H^T = n I`.
pub fn hadamard(n: usize) -> Result<Matrix> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    // H[i][j] = (-1)^{popcount(i & j)}
    Ok(Matrix::from_fn(n, n, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Row count `q = 2^ceil(log2(2p))` of the embedding built by [`build_jl_map`].
pub fn jl_dimension(p: usize) -> usize {
    (2 * p).next_power_of_two()
}

/// Injective subsampled signed-Hadamard embedding `R^p -> R^q`.
///
/// `q = 2^ceil(log2(2p))`, `S = H_q D / sqrt(p)` with random signs on the
/// diagonal of `D`, `P` selects `p` distinct rows of `S`, and `M = (P S)^T`.
/// Since `S S^T = (q/p) I`, the pseudoinverse is `(p/q) M^T`.
pub fn build_jl_map(p: usize, seed: u64) -> FullRankMap {
    assert!(p >= 1, "embedding needs p >= 1");
    let q = jl_dimension(p);
    let h = hadamard(q).expect("q is a power of two");
    let mut rng = SeededRng::new(seed);
    let signs: Vec<f64> = (0..q).map(|_| rng.sign()).collect();
    let rows = rng.subset(q, p);
    let scale = 1.0 / (p as f64).sqrt();
    // M[c, r] = S[rows[r], c] = H[rows[r], c] * signs[c] / sqrt(p)
    let m = Matrix::from_fn(q, p, |c, r| h[(rows[r], c)] * signs[c] * scale);
    FullRankMap::new(m).expect("distinct Hadamard rows are orthogonal")
}

/// Data-dependent invertible map `U_3^T` built from the left singular vectors
/// of the mode-3 unfolding.
///
/// `U_3` comes from the eigendecomposition of `X X^T` (`X` the `p x mn`
/// unfolding), ordered by decreasing singular value. Each singular vector is
/// flipped so its largest-magnitude entry is positive (first such entry on
/// ties). The returned matrix has the singular vectors as rows, so
/// `T x_3 M` expresses every fiber in the singular basis.
pub fn build_u3_map(t: &Tensor3) -> Result<FullRankMap> {
    let p = t.p();
    let mut gram = Matrix::zeros(p, p);
    for k in 0..p {
        for l in k..p {
            let d: f64 = t
                .slice_values(k)
                .iter()
                .zip(t.slice_values(l))
                .map(|(a, b)| a * b)
                .sum();
            gram[(k, l)] = d;
            gram[(l, k)] = d;
        }
    }
    let e = sym_eig(&gram)?;
    let mut m = e.q.transpose();
    for r in 0..p {
        let row = &mut m.as_mut_slice()[r * p..(r + 1) * p];
        let mut best = 0;
        for (c, v) in row.iter().enumerate() {
            if v.abs() > row[best].abs() {
                best = c;
            }
        }
        if row[best] < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
    }
    FullRankMap::new(m)
}
