//! Dense third-order tensors.
//!
//! Storage is frontal-slice-major and row-major within each slice: the
//! 0-based entry `(i, j, k)` of an `m x n x p` tensor lives at
//! `k * m * n + i * n + j`. Public accessors that mirror the mathematical
//! notation (`entry`, `frontal_slice`, `mode3_fiber`) take 1-based indices;
//! methods documented as 0-based (`at`, `slice_values`) are for kernels.

use crate::error::{Error, Result};
use crate::matkernels::Matrix;

#[derive(Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    p: usize,
    data: Vec<f64>,
}

/// A `1 x 1 x p` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    pub values: Vec<f64>,
}

impl Tensor3 {
    /// Panics if any dimension is zero.
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        assert!(m >= 1 && n >= 1 && p >= 1, "tensor dimensions must be >= 1");
        Self {
            m,
            n,
            p,
            data: vec![0.0; m * n * p],
        }
    }

    pub fn from_vec(m: usize, n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 {
            return Err(Error::DimensionMismatch(format!(
                "tensor dimensions must be >= 1, got {m}x{n}x{p}"
            )));
        }
        if data.len() != m * n * p {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {m}x{n}x{p} tensor",
                data.len()
            )));
        }
        Ok(Self { m, n, p, data })
    }

    /// Builds from a 0-based generator `f(i, j, k)`.
    pub fn from_fn(m: usize, n: usize, p: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(m, n, p);
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    t.data[(k * m + i) * n + j] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Stacks equally sized matrices as frontal slices.
    pub fn from_slices(slices: &[Matrix]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no frontal slices given".into()))?;
        let (m, n) = first.shape();
        let mut data = Vec::with_capacity(m * n * slices.len());
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (m, n) {
                return Err(Error::DimensionMismatch(format!(
                    "slice {} is {}x{}, expected {m}x{n}",
                    k + 1,
                    s.rows(),
                    s.cols()
                )));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::from_vec(m, n, slices.len(), data)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// 0-based entry access.
    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(k * self.m + i) * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut f64 {
        &mut self.data[(k * self.m + i) * self.n + j]
    }

    /// Contiguous values of the 0-based frontal slice `k`.
    #[inline]
    pub fn slice_values(&self, k: usize) -> &[f64] {
        let len = self.m * self.n;
        &self.data[k * len..(k + 1) * len]
    }

    #[inline]
    pub fn slice_values_mut(&mut self, k: usize) -> &mut [f64] {
        let len = self.m * self.n;
        &mut self.data[k * len..(k + 1) * len]
    }

    /// 0-based slice copy, unchecked beyond the slice bounds assertion.
    pub(crate) fn slice_matrix(&self, k: usize) -> Matrix {
        Matrix::from_vec(self.m, self.n, self.slice_values(k).to_vec()).expect("slice shape")
    }

    fn check(what: &'static str, index: usize, bound: usize) -> Result<()> {
        if index == 0 || index > bound {
            Err(Error::IndexOutOfRange { what, index, bound })
        } else {
            Ok(())
        }
    }

    /// Entry `a_{ijk}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        Self::check("i", i, self.m)?;
        Self::check("j", j, self.n)?;
        Self::check("k", k, self.p)?;
        Ok(self.at(i - 1, j - 1, k - 1))
    }

    /// Copy of the 1-based frontal slice `k`.
    pub fn frontal_slice(&self, k: usize) -> Result<Matrix> {
        Self::check("k", k, self.p)?;
        Ok(self.slice_matrix(k - 1))
    }

    /// Frontal slices in order, as owned matrices.
    pub fn frontal_slices(&self) -> Vec<Matrix> {
        (0..self.p).map(|k| self.slice_matrix(k)).collect()
    }

    /// The mode-3 fiber at 1-based `(i, j)`.
    pub fn mode3_fiber(&self, i: usize, j: usize) -> Result<Tube> {
        Self::check("i", i, self.m)?;
        Self::check("j", j, self.n)?;
        Ok(Tube {
            values: (0..self.p).map(|k| self.at(i - 1, j - 1, k)).collect(),
        })
    }

    /// Lateral slice `j` (1-based) as an `m x p` matrix with entries `a_{i j k}`.
    pub fn lateral_slice(&self, j: usize) -> Result<Matrix> {
        Self::check("j", j, self.n)?;
        Ok(Matrix::from_fn(self.m, self.p, |i, k| self.at(i, j - 1, k)))
    }

    /// `p x (m n)` matrix whose row `k` lists frontal slice `k` in row-major
    /// order, i.e. column `i * n + j` holds the fiber at 0-based `(i, j)`.
    pub fn mode3_unfolding(&self) -> Matrix {
        Matrix::from_vec(self.p, self.m * self.n, self.data.clone()).expect("unfolding shape")
    }

    /// Inverse of [`Tensor3::mode3_unfolding`].
    pub fn from_mode3_unfolding(m: usize, n: usize, unfolded: &Matrix) -> Result<Self> {
        if unfolded.cols() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "unfolding has {} columns, expected {}",
                unfolded.cols(),
                m * n
            )));
        }
        Self::from_vec(m, n, unfolded.rows(), unfolded.as_slice().to_vec())
    }

    /// Slice-wise Frobenius norm, accumulated in increasing slice order.
    pub fn frobenius_norm(&self) -> f64 {
        (0..self.p)
            .map(|k| self.slice_values(k).iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// `||A - B|| <= tol * max(1, ||A||)`.
    pub fn approx_eq(&self, other: &Tensor3, tol: f64) -> Result<bool> {
        let diff = self.sub(other)?;
        Ok(diff.frobenius_norm() <= tol * self.frobenius_norm().max(1.0))
    }

    fn same_dims(&self, other: &Tensor3) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        self.same_dims(other)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.same_dims(other)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn scale(&self, a: f64) -> Tensor3 {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= a);
        out
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &Tensor3) -> Result<()> {
        self.same_dims(x)?;
        self.data.iter_mut().zip(&x.data).for_each(|(y, v)| *y += a * v);
        Ok(())
    }

    /// Transposes every frontal slice (no map involved).
    pub fn transpose_slices(&self) -> Tensor3 {
        let (m, n, p) = self.dims();
        Tensor3::from_fn(n, m, p, |i, j, k| self.at(j, i, k))
    }

    /// The sub-tensor made of the first `s` frontal slices.
    pub fn leading_slices(&self, s: usize) -> Result<Tensor3> {
        Self::check("s", s, self.p)?;
        let len = self.m * self.n * s;
        Tensor3::from_vec(self.m, self.n, s, self.data[..len].to_vec())
    }
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Tensor3 {}x{}x{} [", self.m, self.n, self.p)?;
        for k in 0..self.p {
            writeln!(f, "  slice {}:", k + 1)?;
            for i in 0..self.m {
                writeln!(f, "    {:?}", &self.slice_values(k)[i * self.n..(i + 1) * self.n])?;
            }
        }
        write!(f, "]")
    }
}

impl Tube {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_tensor(&self) -> Result<Tensor3> {
        Tensor3::from_vec(1, 1, self.values.len(), self.values.clone())
    }

    pub fn from_tensor(t: &Tensor3) -> Result<Self> {
        if t.m() != 1 || t.n() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "a tube is 1x1xp, got {}x{}x{}",
                t.m(),
                t.n(),
                t.p()
            )));
        }
        Ok(Self {
            values: t.as_slice().to_vec(),
        })
    }
}
