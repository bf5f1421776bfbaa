//! Means of `*_M`-pseudo-positive-definite tensors.
//!
//! Only invertible maps are supported. Every mean is evaluated slice by
//! slice on the symmetrized hat slices and mapped back once.

use crate::error::{Error, Result};
use crate::linmap::MapKind;
use crate::matkernels::{matrix_geomean_t, spd_power, sym_eig, Matrix, DEFAULT_PD_TOL};
use crate::mprod::MprodContext;
use crate::tensor::Tensor3;

fn require_invertible(ctx: &MprodContext) -> Result<()> {
    if ctx.kind() != MapKind::Invertible {
        return Err(Error::MapNotInvertible);
    }
    Ok(())
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("weight t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// Symmetrized hat slices of a PPD tensor.
fn ppd_hat_slices(ctx: &MprodContext, a: &Tensor3) -> Result<Vec<Matrix>> {
    if !ctx.is_ppd(a, DEFAULT_PD_TOL)? {
        return Err(Error::NotPpd);
    }
    Ok(ctx.hat(a)?.frontal_slices().iter().map(Matrix::symmetrized).collect())
}

fn pair_slices(ctx: &MprodContext, a: &Tensor3, b: &Tensor3) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    require_invertible(ctx)?;
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!(
            "mean of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok((ppd_hat_slices(ctx, a)?, ppd_hat_slices(ctx, b)?))
}

fn from_hat_slices(ctx: &MprodContext, slices: &[Matrix]) -> Result<Tensor3> {
    ctx.unhat(&Tensor3::from_slices(slices)?)
}

/// The unique PPD `k`-th root of `A`.
pub fn ppd_root(ctx: &MprodContext, a: &Tensor3, k: u32) -> Result<Tensor3> {
    require_invertible(ctx)?;
    if k == 0 {
        return Err(Error::InvalidParameter("root order must be at least 1".into()));
    }
    let roots = ppd_hat_slices(ctx, a)?
        .iter()
        .map(|s| spd_power(s, 1.0 / f64::from(k), DEFAULT_PD_TOL))
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(ctx, &roots)
}

/// Weighted geometric mean `A #_t B`; `t = 1/2` gives the midpoint `A # B`.
pub fn geometric_mean(ctx: &MprodContext, a: &Tensor3, b: &Tensor3, t: f64) -> Result<Tensor3> {
    check_weight(t)?;
    let (sa, sb) = pair_slices(ctx, a, b)?;
    let means = sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| matrix_geomean_t(x, y, t))
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(ctx, &means)
}

/// `(X Y)^{1/2}` for SPD `X`, `Y`, as `X^{1/2} (X^{1/2} Y X^{1/2})^{1/2} X^{-1/2}`.
fn product_sqrt(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    let e = sym_eig(x)?;
    let half = e.map_values(f64::sqrt);
    let neg_half = e.map_values(|l| 1.0 / l.sqrt());
    let inner = half.matmul(y)?.matmul(&half)?.symmetrized();
    let inner_half = spd_power(&inner, 0.5, DEFAULT_PD_TOL)?;
    half.matmul(&inner_half)?.matmul(&neg_half)
}

/// Weighted Wasserstein mean
/// `(1-t)^2 A + t^2 B + t(1-t) [(A *_M B)^{1/2} + (B *_M A)^{1/2}]`.
pub fn wasserstein_mean(ctx: &MprodContext, a: &Tensor3, b: &Tensor3, t: f64) -> Result<Tensor3> {
    check_weight(t)?;
    let (sa, sb) = pair_slices(ctx, a, b)?;
    let (wa, wb, wc) = ((1.0 - t) * (1.0 - t), t * t, t * (1.0 - t));
    let means = sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| {
            let r = product_sqrt(x, y)?;
            // (Y X)^{1/2} = ((X Y)^{1/2})^T for symmetric X, Y
            let cross = r.add(&r.transpose())?;
            x.scale(wa).add(&y.scale(wb))?.add(&cross.scale(wc))
        })
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(ctx, &means)
}

/// `||X *_M A^{-1} *_M X - B||_F / ||B||_F`.
pub fn riccati_residual(ctx: &MprodContext, x: &Tensor3, a: &Tensor3, b: &Tensor3) -> Result<f64> {
    let ainv = ctx.m_inverse(a)?;
    let lhs = ctx.mprod(&ctx.mprod(x, &ainv)?, x)?;
    Ok(lhs.sub(b)?.frobenius_norm() / b.frobenius_norm())
}

/// The unique PPD solution of `X *_M A^{-1} *_M X = B`, which is `A # B`.
pub fn solve_riccati(ctx: &MprodContext, a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    geometric_mean(ctx, a, b, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linmap::FullRankMap;
    use crate::matkernels::matrix_geomean_t;
    use crate::rng::SeededRng;
    use crate::testutil::{gaussian_matrix, random_spd, rng};

    fn random_ctx(r: &mut SeededRng, p: usize) -> MprodContext {
        let m = gaussian_matrix(r, p, p).add(&Matrix::identity(p).scale(2.0)).unwrap();
        MprodContext::new(FullRankMap::new(m).unwrap())
    }

    fn random_ppd(r: &mut SeededRng, ctx: &MprodContext, n: usize) -> Tensor3 {
        let slices: Vec<Matrix> = (0..ctx.map.p()).map(|_| random_spd(r, n)).collect();
        ctx.unhat(&Tensor3::from_slices(&slices).unwrap()).unwrap()
    }

    fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1.0)
    }

    fn diag_pair(d1: &[f64], d2: &[f64]) -> Tensor3 {
        Tensor3::from_slices(&[Matrix::from_diag(d1), Matrix::from_diag(d2)]).unwrap()
    }

    #[test]
    fn roots() {
        let ctx = MprodContext::new(FullRankMap::identity(2));
        let a = diag_pair(&[4.0, 9.0], &[16.0, 25.0]);
        let root = ppd_root(&ctx, &a, 2).unwrap();
        assert!(rel(&root, &diag_pair(&[2.0, 3.0], &[4.0, 5.0])) < 1e-15);

        let mut r = rng(1);
        let ctx = random_ctx(&mut r, 3);
        let id = ctx.identity(3).unwrap();
        assert!(rel(&ppd_root(&ctx, &id, 3).unwrap(), &id) < 1e-12);

        for k in 1..=4u32 {
            let a = random_ppd(&mut r, &ctx, 4);
            let root = ppd_root(&ctx, &a, k).unwrap();
            assert!(ctx.is_ppd(&root, DEFAULT_PD_TOL).unwrap());
            let mut pow = root.clone();
            for _ in 1..k {
                pow = ctx.mprod(&pow, &root).unwrap();
            }
            assert!(rel(&pow, &a) <= 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = MprodContext::new(FullRankMap::identity(2));
        let indefinite = diag_pair(&[1.0, -1.0], &[1.0, 1.0]);
        let good = diag_pair(&[1.0, 1.0], &[1.0, 1.0]);
        assert_eq!(ppd_root(&ctx, &indefinite, 2), Err(Error::NotPpd));
        assert_eq!(geometric_mean(&ctx, &good, &indefinite, 0.5), Err(Error::NotPpd));
        assert!(matches!(geometric_mean(&ctx, &good, &good, 1.5), Err(Error::InvalidParameter(_))));

        let inj = MprodContext::new(FullRankMap::new(Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])).unwrap());
        assert_eq!(geometric_mean(&inj, &good, &good, 0.5), Err(Error::MapNotInvertible));
        let sur = MprodContext::new(FullRankMap::new(Matrix::from_rows(&[[1.0, 1.0]])).unwrap());
        assert_eq!(wasserstein_mean(&sur, &good, &good, 0.5), Err(Error::MapNotInvertible));
        assert_eq!(ppd_root(&sur, &good, 2), Err(Error::MapNotInvertible));
    }

    #[test]
    fn geometric_mean_properties() {
        let mut r = rng(2);
        for trial in 0..20 {
            let (n, p) = (1 + trial % 4, 1 + trial % 3);
            let ctx = random_ctx(&mut r, p);
            let a = random_ppd(&mut r, &ctx, n);
            let b = random_ppd(&mut r, &ctx, n);
            let g = geometric_mean(&ctx, &a, &b, 0.5).unwrap();
            assert!(ctx.is_ppd(&g, DEFAULT_PD_TOL).unwrap());

            assert!(rel(&geometric_mean(&ctx, &a, &a, 0.5).unwrap(), &a) <= 1e-10);
            assert!(rel(&geometric_mean(&ctx, &b, &a, 0.5).unwrap(), &g) <= 1e-10);

            let lhs = ctx.m_inverse(&g).unwrap();
            let rhs = geometric_mean(&ctx, &ctx.m_inverse(&b).unwrap(), &ctx.m_inverse(&a).unwrap(), 0.5).unwrap();
            assert!(rel(&lhs, &rhs) <= 1e-9);

            let c = 0.1 + 3.0 * r.unit();
            let scaled = geometric_mean(&ctx, &a.scale(c), &b.scale(c), 0.5).unwrap();
            assert!(rel(&scaled, &g.scale(c)) <= 1e-10);

            // congruence by an m-invertible tensor
            let cs: Vec<Matrix> = (0..p)
                .map(|_| gaussian_matrix(&mut r, n, n).add(&Matrix::identity(n).scale(3.0)).unwrap())
                .collect();
            let cc = ctx.unhat(&Tensor3::from_slices(&cs).unwrap()).unwrap();
            let ch = ctx.m_transpose(&cc).unwrap();
            let cong = |x: &Tensor3| ctx.mprod(&ctx.mprod(&ch, x).unwrap(), &cc).unwrap();
            let lhs = geometric_mean(&ctx, &cong(&a), &cong(&b), 0.5).unwrap();
            assert!(rel(&lhs, &cong(&g)) <= 1e-8);

            let ha = ctx.hat(&a).unwrap();
            let hb = ctx.hat(&b).unwrap();
            let t = r.unit();
            let gt = ctx.hat(&geometric_mean(&ctx, &a, &b, t).unwrap()).unwrap();
            for k in 1..=p {
                let expect = matrix_geomean_t(
                    &ha.frontal_slice(k).unwrap().symmetrized(),
                    &hb.frontal_slice(k).unwrap().symmetrized(),
                    t,
                )
                .unwrap();
                let got = gt.frontal_slice(k).unwrap();
                assert!(got.sub(&expect).unwrap().frobenius_norm() <= 1e-12 * expect.frobenius_norm().max(1.0));
            }
        }
    }

    #[test]
    fn scalar_consistency() {
        let mut r = rng(3);
        let ctx = random_ctx(&mut r, 3);
        let id = ctx.identity(2).unwrap();
        let (a, b) = (2.0, 8.0);
        let g = geometric_mean(&ctx, &id.scale(a), &id.scale(b), 0.5).unwrap();
        assert!(rel(&g, &id.scale(4.0)) <= 1e-12);
        let w = wasserstein_mean(&ctx, &id.scale(a), &id.scale(b), 0.5).unwrap();
        let expect = ((a.sqrt() + b.sqrt()) / 2.0).powi(2);
        assert!(rel(&w, &id.scale(expect)) <= 1e-12);
    }

    #[test]
    fn wasserstein_properties() {
        let mut r = rng(4);
        for _ in 0..10 {
            let ctx = random_ctx(&mut r, 3);
            let a = random_ppd(&mut r, &ctx, 3);
            let b = random_ppd(&mut r, &ctx, 3);
            assert!(wasserstein_mean(&ctx, &a, &b, 0.0).unwrap().approx_eq(&a, 1e-12).unwrap());
            assert!(wasserstein_mean(&ctx, &a, &b, 1.0).unwrap().approx_eq(&b, 1e-12).unwrap());
            assert!(rel(&wasserstein_mean(&ctx, &a, &a, 0.5).unwrap(), &a) <= 1e-10);
            let w = wasserstein_mean(&ctx, &a, &b, 0.5).unwrap();
            assert!(rel(&w, &wasserstein_mean(&ctx, &b, &a, 0.5).unwrap()) <= 1e-10);
            assert!(ctx.is_ppd(&w, DEFAULT_PD_TOL).unwrap());
        }
    }

    #[test]
    fn product_sqrt_squares_back() {
        let mut r = rng(5);
        let x = random_spd(&mut r, 5);
        let y = random_spd(&mut r, 5);
        let s = product_sqrt(&x, &y).unwrap();
        let xy = x.matmul(&y).unwrap();
        assert!(s.matmul(&s).unwrap().sub(&xy).unwrap().frobenius_norm() <= 1e-10 * xy.frobenius_norm());
    }

    #[test]
    fn riccati() {
        let ctx = MprodContext::new(FullRankMap::identity(2));
        let id = ctx.identity(3).unwrap();
        assert_eq!(riccati_residual(&ctx, &id, &id, &id).unwrap(), 0.0);

        let a = Tensor3::from_vec(1, 1, 2, vec![2.0, 3.0]).unwrap();
        let b = Tensor3::from_vec(1, 1, 2, vec![8.0, 12.0]).unwrap();
        let x = solve_riccati(&ctx, &a, &b).unwrap();
        assert!(x.approx_eq(&Tensor3::from_vec(1, 1, 2, vec![4.0, 6.0]).unwrap(), 1e-14).unwrap());
        assert!(solve_riccati(&ctx, &a, &a).unwrap().approx_eq(&a, 1e-14).unwrap());

        let mut r = rng(6);
        let ctx = random_ctx(&mut r, 3);
        let a = random_ppd(&mut r, &ctx, 4);
        let b = random_ppd(&mut r, &ctx, 4);
        let x = solve_riccati(&ctx, &a, &b).unwrap();
        assert!(riccati_residual(&ctx, &x, &a, &b).unwrap() <= 1e-9);
        assert!(riccati_residual(&ctx, &a, &a, &b).unwrap() > 1e-3);
    }
}
