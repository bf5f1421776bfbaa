//! The `*_M` algebra.
//!
//! Every operation moves its operands into the hat domain with `x_3 M`,
//! works slice by slice there, and maps the result back with `x_3 M^+`.
//! For invertible `M` this is the classical transform-domain product. For
//! surjective `M` the hat domain has fewer slices than the input and the
//! round trip only reproduces `A x_3 (M^+ M)`. For injective `M` the round
//! trip is exact but the product is no longer associative.

use crate::error::{Error, Result};
use crate::linmap::{FullRankMap, MapKind};
use crate::matkernels::{inverse, strassen_mul, sym_eig, Matrix, DEFAULT_CROSSOVER};
use crate::rng::SeededRng;
use crate::tensor::{Tensor3, Tube};

/// Slice-level multiplication backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulAlgo {
    Naive,
    Strassen { crossover: usize },
}

impl MulAlgo {
    pub fn strassen() -> Self {
        MulAlgo::Strassen {
            crossover: DEFAULT_CROSSOVER,
        }
    }

    fn mul(self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        match self {
            MulAlgo::Naive => a.matmul(b),
            MulAlgo::Strassen { crossover } => strassen_mul(a, b, crossover),
        }
    }
}

/// Face-wise product: slice `i` of the result is `A^(i) B^(i)`.
pub fn facewise(a: &Tensor3, b: &Tensor3, algo: MulAlgo) -> Result<Tensor3> {
    if a.n() != b.m() || a.p() != b.p() {
        return Err(Error::DimensionMismatch(format!(
            "face-wise product of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let mut out = Tensor3::zeros(a.m(), b.n(), a.p());
    for k in 0..a.p() {
        let prod = algo.mul(&a.slice_matrix(k), &b.slice_matrix(k))?;
        out.slice_values_mut(k).copy_from_slice(prod.as_slice());
    }
    Ok(out)
}

/// Returns true when every entry off the diagonal fibers has magnitude at most `tol`.
pub fn is_f_diagonal(s: &Tensor3, tol: f64) -> bool {
    let (m, n, p) = s.dims();
    (0..p).all(|k| {
        (0..m).all(|i| (0..n).all(|j| i == j || s.at(i, j, k).abs() <= tol))
    })
}

/// The operator `*_M` together with its backend and tolerance.
#[derive(Debug, Clone)]
pub struct MprodContext {
    pub map: FullRankMap,
    pub algo: MulAlgo,
    pub tol: f64,
}

pub const DEFAULT_TOL: f64 = 1e-10;

impl MprodContext {
    pub fn new(map: FullRankMap) -> Self {
        Self {
            map,
            algo: MulAlgo::Naive,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_algo(mut self, algo: MulAlgo) -> Self {
        self.algo = algo;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn kind(&self) -> MapKind {
        self.map.kind()
    }

    fn check_depth(&self, t: &Tensor3) -> Result<()> {
        if t.p() != self.map.p() {
            return Err(Error::DimensionMismatch(format!(
                "tensor depth {} but map expects {}",
                t.p(),
                self.map.p()
            )));
        }
        Ok(())
    }

    /// `A x_3 M`.
    pub fn hat(&self, a: &Tensor3) -> Result<Tensor3> {
        self.check_depth(a)?;
        self.map.forward(a)
    }

    /// `A_hat x_3 M^+`.
    pub fn unhat(&self, a_hat: &Tensor3) -> Result<Tensor3> {
        self.map.backward(a_hat)
    }

    /// `A *_M B`.
    pub fn mprod(&self, a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
        if a.n() != b.m() {
            return Err(Error::DimensionMismatch(format!(
                "*_M product of {:?} and {:?}",
                a.dims(),
                b.dims()
            )));
        }
        let prod = facewise(&self.hat(a)?, &self.hat(b)?, self.algo)?;
        self.unhat(&prod)
    }

    /// The tube `x` with `x x_3 M` closest to the all-ones tube, and the residual.
    fn unit_tube(&self) -> (Vec<f64>, f64) {
        let q = self.map.q();
        let ones = vec![1.0; q];
        let x = self.map.pinv().matvec(&ones).expect("pinv is p x q");
        let mx = self.map.matrix().matvec(&x).expect("map is q x p");
        let res = mx.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>().sqrt() / (q as f64).sqrt();
        (x, res)
    }

    /// The `*_M`-identity tensor of size `n x n x p`.
    ///
    /// For injective maps it exists only when the all-ones tube lies in the
    /// image of `x_3 M`. For surjective maps the minimal-norm representative
    /// is returned.
    pub fn identity(&self, n: usize) -> Result<Tensor3> {
        let (x, residual) = self.unit_tube();
        if self.kind() == MapKind::Injective && residual > self.tol {
            return Err(Error::NoIdentityTensor { residual });
        }
        let mut id = Tensor3::zeros(n, n, self.map.p());
        for (k, &v) in x.iter().enumerate() {
            for i in 0..n {
                *id.at_mut(i, i, k) = v;
            }
        }
        Ok(id)
    }

    /// `A^H`: the tensor whose hat slices are the transposed hat slices of `A`.
    ///
    /// Rectangular slices are accepted, giving an `n x m x p` result.
    pub fn m_transpose(&self, a: &Tensor3) -> Result<Tensor3> {
        let h = self.hat(a)?;
        self.unhat(&h.transpose_slices())
    }

    pub fn is_m_hermitian(&self, a: &Tensor3) -> Result<bool> {
        if a.m() != a.n() {
            return Ok(false);
        }
        let h = self.hat(a)?;
        Ok(h.approx_eq(&h.transpose_slices(), self.tol)?)
    }

    /// `A^{-1}` with `A *_M A^{-1} = A^{-1} *_M A = I`.
    ///
    /// Each hat slice is inverted and the stack is mapped back. For
    /// injective maps the stack of inverses must itself lie in the image of
    /// `x_3 M`; this is verified by mapping the candidate forward again.
    pub fn m_inverse(&self, a: &Tensor3) -> Result<Tensor3> {
        if a.m() != a.n() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of non-square slices {:?}",
                a.dims()
            )));
        }
        let h = self.hat(a)?;
        let mut inv_hat = Tensor3::zeros(a.n(), a.n(), h.p());
        for k in 0..h.p() {
            let inv = inverse(&h.slice_matrix(k)).map_err(|e| match e {
                Error::Singular => Error::SingularSlice { slice: k + 1 },
                other => other,
            })?;
            inv_hat.slice_values_mut(k).copy_from_slice(inv.as_slice());
        }
        let candidate = self.unhat(&inv_hat)?;
        if self.kind() == MapKind::Injective {
            let back = self.hat(&candidate)?;
            let residual =
                back.sub(&inv_hat)?.frobenius_norm() / inv_hat.frobenius_norm().max(f64::MIN_POSITIVE);
            if residual > self.tol {
                return Err(Error::NotMInvertible { residual });
            }
            // The inverse is only meaningful relative to an identity.
            self.identity(a.n())?;
        }
        Ok(candidate)
    }

    /// `<X, Y> = Y^H *_M X` for lateral slices `X, Y` of shape `m x 1 x p`.
    pub fn inner_product(&self, x: &Tensor3, y: &Tensor3) -> Result<Tube> {
        if x.n() != 1 || x.dims() != y.dims() {
            return Err(Error::DimensionMismatch(format!(
                "inner product needs equal m x 1 x p operands, got {:?} and {:?}",
                x.dims(),
                y.dims()
            )));
        }
        let yh = self.m_transpose(y)?;
        Tube::from_tensor(&self.mprod(&yh, x)?)
    }

    /// Every hat slice symmetric (within `tol`) with `lambda_min > pd_tol * lambda_max`.
    pub fn is_ppd(&self, a: &Tensor3, pd_tol: f64) -> Result<bool> {
        if a.m() != a.n() {
            return Ok(false);
        }
        let h = self.hat(a)?;
        for k in 0..h.p() {
            let s = h.slice_matrix(k);
            if s.asymmetry() > self.tol * s.frobenius_norm().max(1.0) {
                return Ok(false);
            }
            let e = sym_eig(&s.symmetrized())?;
            let (hi, lo) = (e.values[0], *e.values.last().unwrap());
            if hi <= 0.0 || lo <= pd_tol * hi {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Searches for `X` with `<X, A *_M X>` not positive in the tube order
    /// (some entry below `-tol`, or every entry within `tol` of zero).
    ///
    /// Samples standard normal `X` normalized to unit Frobenius norm. `None`
    /// means no violation was found, not that `A` is positive definite.
    pub fn pd_falsify(&self, a: &Tensor3, trials: usize, seed: u64) -> Result<Option<Tensor3>> {
        if a.m() != a.n() {
            return Err(Error::DimensionMismatch(format!(
                "positive-definiteness needs square slices, got {:?}",
                a.dims()
            )));
        }
        self.check_depth(a)?;
        let tol = self.tol * a.frobenius_norm().max(1.0);
        let mut rng = SeededRng::new(seed);
        let (n, p) = (a.n(), a.p());
        for _ in 0..trials {
            let x = Tensor3::from_fn(n, 1, p, |_, _, _| rng.normal());
            let nrm = x.frobenius_norm();
            if nrm == 0.0 {
                continue;
            }
            let x = x.scale(1.0 / nrm);
            let y = self.inner_product(&x, &self.mprod(a, &x)?)?;
            let negative = y.values.iter().any(|&v| v < -tol);
            let vanishing = y.values.iter().all(|&v| v.abs() <= tol);
            if negative || vanishing {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// `||(A *_M B) *_M C - A *_M (B *_M C)||_F`.
    pub fn associativity_defect(&self, a: &Tensor3, b: &Tensor3, c: &Tensor3) -> Result<f64> {
        let left = self.mprod(&self.mprod(a, b)?, c)?;
        let right = self.mprod(a, &self.mprod(b, c)?)?;
        Ok(left.sub(&right)?.frobenius_norm())
    }

    /// `sum_i coeffs[i] X^i` by Horner's scheme, with `X^0` the identity tensor.
    pub fn eval_tensor_poly(&self, coeffs: &[f64], x: &Tensor3) -> Result<Tensor3> {
        self.eval_tensor_poly_counted(coeffs, x).map(|(t, _)| t)
    }

    /// As [`MprodContext::eval_tensor_poly`], also returning the number of `*_M` products.
    pub fn eval_tensor_poly_counted(&self, coeffs: &[f64], x: &Tensor3) -> Result<(Tensor3, usize)> {
        if self.kind() == MapKind::Injective {
            return Err(Error::MapKindUnsupported("injective"));
        }
        if x.m() != x.n() {
            return Err(Error::DimensionMismatch(format!(
                "polynomial argument needs square slices, got {:?}",
                x.dims()
            )));
        }
        self.check_depth(x)?;
        let n = x.n();
        let mut identity: Option<Tensor3> = None;
        let mut add_constant = |acc: &mut Tensor3, c: f64| -> Result<()> {
            if c != 0.0 {
                if identity.is_none() {
                    identity = Some(self.identity(n)?);
                }
                acc.axpy(c, identity.as_ref().unwrap())?;
            }
            Ok(())
        };

        let Some((&lead, rest)) = coeffs.split_last() else {
            return Ok((Tensor3::zeros(n, n, x.p()), 0));
        };
        if rest.is_empty() {
            let mut acc = Tensor3::zeros(n, n, x.p());
            add_constant(&mut acc, lead)?;
            return Ok((acc, 0));
        }
        let mut acc = x.scale(lead);
        let (&next, lower) = rest.split_last().unwrap();
        add_constant(&mut acc, next)?;
        let mut products = 0;
        for &c in lower.iter().rev() {
            acc = self.mprod(&acc, x)?;
            products += 1;
            add_constant(&mut acc, c)?;
        }
        Ok((acc, products))
    }
}
