//! Full and truncated `*_M`-pseudo-SVD and compression metrics.
//!
//! The cube is mapped to the hat domain once, every hat slice gets an
//! ordinary SVD, and reconstructions are mapped back with `M^+`. For
//! injective maps there is no associative product to factor through, so the
//! factors only make sense as this hat-domain stack.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linmap::FullRankMap;
use crate::matkernels::svd;
use crate::tensor::Tensor3;

/// Stacked hat-domain SVD factors: slice `i` of `A x_3 M` is
/// `U_hat^(i) S_hat^(i) V_hat^(i)T`.
#[derive(Debug, Clone)]
pub struct PsvdFactors {
    /// `m x m x q`
    pub u_hat: Tensor3,
    /// `m x n x q`, f-diagonal
    pub s_hat: Tensor3,
    /// `n x n x q`
    pub v_hat: Tensor3,
    pub map: FullRankMap,
}

impl PsvdFactors {
    pub fn rank_bound(&self) -> usize {
        self.s_hat.m().min(self.s_hat.n())
    }

    /// Diagonal of hat slice `k` (0-based).
    fn sigmas(&self, k: usize) -> Vec<f64> {
        (0..self.rank_bound()).map(|i| self.s_hat.at(i, i, k)).collect()
    }

    /// Hat-domain reconstruction keeping the leading `k` columns of every slice.
    pub fn truncated_hat(&self, k: usize) -> Result<Tensor3> {
        let max = self.rank_bound();
        if k == 0 || k > max {
            return Err(Error::BadTruncation { k, max });
        }
        let (m, n, q) = self.s_hat.dims();
        let mut out = Tensor3::zeros(m, n, q);
        let mut vrow = vec![0.0; k];
        for slice in 0..q {
            let sig = self.sigmas(slice);
            let u = self.u_hat.slice_values(slice);
            let v = self.v_hat.slice_values(slice);
            // Rows of (V diag(s))[:, :k] stored as a k x n block for contiguous access.
            let mut vs = vec![0.0; k * n];
            for j in 0..n {
                for r in 0..k {
                    vs[r * n + j] = v[j * n + r] * sig[r];
                }
            }
            let dst = out.slice_values_mut(slice);
            for i in 0..m {
                vrow.copy_from_slice(&u[i * m..i * m + k]);
                let row = &mut dst[i * n..(i + 1) * n];
                for (r, &uir) in vrow.iter().enumerate() {
                    if uir == 0.0 {
                        continue;
                    }
                    for (o, &x) in row.iter_mut().zip(&vs[r * n..(r + 1) * n]) {
                        *o += uir * x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(U_hat[:, :k] S_hat[:k, :k] V_hat[:, :k]^T) x_3 M^+`.
    pub fn truncate(&self, k: usize) -> Result<Tensor3> {
        self.map.backward(&self.truncated_hat(k)?)
    }

    /// Full-rank reconstruction. Equals `A` for invertible and injective maps
    /// and `A x_3 (M^+ M)` for surjective ones.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        self.truncate(self.rank_bound())
    }
}

/// Slice-wise SVD of `A x_3 M`.
pub fn pseudo_svd_full(a: &Tensor3, map: &FullRankMap) -> Result<PsvdFactors> {
    if a.p() != map.p() {
        return Err(Error::DimensionMismatch(format!(
            "cube depth {} but map expects {}",
            a.p(),
            map.p()
        )));
    }
    let hat = map.forward(a)?;
    let (m, n, q) = hat.dims();
    let mut u_hat = Tensor3::zeros(m, m, q);
    let mut s_hat = Tensor3::zeros(m, n, q);
    let mut v_hat = Tensor3::zeros(n, n, q);
    for k in 0..q {
        let d = svd(&hat.slice_matrix(k))?;
        u_hat.slice_values_mut(k).copy_from_slice(d.u.as_slice());
        v_hat.slice_values_mut(k).copy_from_slice(d.v.as_slice());
        for (i, &s) in d.s.iter().enumerate() {
            *s_hat.at_mut(i, i, k) = s;
        }
    }
    Ok(PsvdFactors {
        u_hat,
        s_hat,
        v_hat,
        map: map.clone(),
    })
}

/// Rank-`k` truncated pseudo-SVD reconstruction of `A`.
pub fn pseudo_svd_truncated(a: &Tensor3, map: &FullRankMap, k: usize) -> Result<Tensor3> {
    let max = a.m().min(a.n());
    if k == 0 || k > max {
        return Err(Error::BadTruncation { k, max });
    }
    pseudo_svd_full(a, map)?.truncate(k)
}

/// `||A(:,:,1:s) - B(:,:,1:s)||_F / ||A(:,:,1:s)||_F`.
pub fn relative_error(a: &Tensor3, rec: &Tensor3, s: usize) -> Result<f64> {
    if a.dims() != rec.dims() {
        return Err(Error::DimensionMismatch(format!(
            "relative error of {:?} against {:?}",
            a.dims(),
            rec.dims()
        )));
    }
    if s == 0 || s > a.p() {
        return Err(Error::IndexOutOfRange {
            what: "s",
            index: s,
            bound: a.p(),
        });
    }
    let len = a.m() * a.n() * s;
    let (x, y) = (&a.as_slice()[..len], &rec.as_slice()[..len]);
    let num: f64 = x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum();
    let den: f64 = x.iter().map(|p| p * p).sum();
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((num / den).sqrt())
}

/// `m n p / (q k (m + n + 1) + q p)`: raw scalars of the cube against the
/// truncated factors plus the map.
pub fn compression_ratio(m: usize, n: usize, p: usize, q: usize, k: usize) -> f64 {
    let original = (m * n * p) as f64;
    let stored = (q * k * (m + n + 1) + q * p) as f64;
    original / stored
}

/// `||S_hat(i, i, :)||_F` for `i = 1..min(m, n)`.
pub fn singular_tube_norms(f: &PsvdFactors) -> Vec<f64> {
    (0..f.rank_bound())
        .map(|i| {
            (0..f.s_hat.p())
                .map(|k| f.s_hat.at(i, i, k).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionRow {
    pub k: usize,
    pub s: usize,
    pub re: f64,
    pub cr: f64,
    pub seconds: f64,
}

/// One compression sweep over truncation ranks `k` and channel prefixes `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport {
    pub rows: Vec<CompressionRow>,
    pub map: String,
    pub seed: Option<u64>,
    pub q: usize,
}

impl CompressionReport {
    /// Factorizes once and evaluates every `(k, s)` pair.
    ///
    /// `seconds` is the factorization time plus the rank-`k` reconstruction
    /// time, i.e. what compressing at that `k` alone would cost.
    pub fn sweep(
        a: &Tensor3,
        map: &FullRankMap,
        ks: &[usize],
        ss: &[usize],
        map_name: &str,
        seed: Option<u64>,
    ) -> Result<Self> {
        let max = a.m().min(a.n());
        if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > max) {
            return Err(Error::BadTruncation { k, max });
        }
        if let Some(&s) = ss.iter().find(|&&s| s == 0 || s > a.p()) {
            return Err(Error::IndexOutOfRange {
                what: "s",
                index: s,
                bound: a.p(),
            });
        }
        let start = Instant::now();
        let factors = pseudo_svd_full(a, map)?;
        let factor_time = start.elapsed().as_secs_f64();
        let (m, n, p) = a.dims();
        let mut rows = Vec::with_capacity(ks.len() * ss.len());
        for &k in ks {
            let start = Instant::now();
            let rec = factors.truncate(k)?;
            let seconds = factor_time + start.elapsed().as_secs_f64();
            let cr = compression_ratio(m, n, p, map.q(), k);
            for &s in ss {
                rows.push(CompressionRow {
                    k,
                    s,
                    re: relative_error(a, &rec, s)?,
                    cr,
                    seconds,
                });
            }
        }
        Ok(Self {
            rows,
            map: map_name.to_string(),
            seed,
            q: map.q(),
        })
    }
}
