use mprod_core::means::{geometric_mean, wasserstein_mean};
use mprod_core::psvd::{pseudo_svd_full, relative_error};
use mprod_core::rng::SeededRng;
use mprod_core::{build_jl_map, facewise, FullRankMap, Matrix, MprodContext, MulAlgo, Tensor3};
use proptest::prelude::*;

fn gaussian(r: &mut SeededRng, m: usize, n: usize, p: usize) -> Tensor3 {
    Tensor3::from_fn(m, n, p, |_, _, _| r.normal())
}

fn well_conditioned(r: &mut SeededRng, p: usize) -> MprodContext {
    let g = Matrix::from_fn(p, p, |_, _| r.normal());
    let m = g.add(&Matrix::identity(p).scale(3.0)).unwrap();
    MprodContext::new(FullRankMap::new(m).unwrap())
}

fn random_ppd(r: &mut SeededRng, c: &MprodContext, n: usize) -> Tensor3 {
    let slices: Vec<Matrix> = (0..c.map.p())
        .map(|_| {
            let g = Matrix::from_fn(n, n, |_, _| r.normal());
            g.matmul(&g.transpose()).unwrap().add(&Matrix::identity(n)).unwrap()
        })
        .collect();
    c.unhat(&Tensor3::from_slices(&slices).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identity_map_product_is_facewise(seed in any::<u64>(), m in 1usize..6, n in 1usize..6, s in 1usize..6, p in 1usize..5) {
        let mut r = SeededRng::new(seed);
        let a = gaussian(&mut r, m, n, p);
        let b = gaussian(&mut r, n, s, p);
        let c = MprodContext::new(FullRankMap::identity(p));
        let prod = c.mprod(&a, &b).unwrap();
        prop_assert!(prod.approx_eq(&facewise(&a, &b, MulAlgo::Naive).unwrap(), 1e-13).unwrap());
    }

    #[test]
    fn strassen_context_matches_naive(seed in any::<u64>(), n in 1usize..40, p in 1usize..4) {
        let mut r = SeededRng::new(seed);
        let c = well_conditioned(&mut r, p);
        let a = gaussian(&mut r, n, n, p);
        let b = gaussian(&mut r, n, n, p);
        let fast = c.clone().with_algo(MulAlgo::Strassen { crossover: 4 });
        let x = c.mprod(&a, &b).unwrap();
        let y = fast.mprod(&a, &b).unwrap();
        prop_assert!(y.sub(&x).unwrap().frobenius_norm() <= 1e-9 * x.frobenius_norm().max(1.0));
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..5, p in 1usize..5) {
        let mut r = SeededRng::new(seed);
        let c = well_conditioned(&mut r, p);
        let a = random_ppd(&mut r, &c, n);
        let ai = c.m_inverse(&a).unwrap();
        let id = c.identity(n).unwrap();
        prop_assert!(c.mprod(&a, &ai).unwrap().sub(&id).unwrap().frobenius_norm() <= 1e-8);
        prop_assert!(c.mprod(&ai, &a).unwrap().sub(&id).unwrap().frobenius_norm() <= 1e-8);
    }

    #[test]
    fn means_are_symmetric_and_ppd(seed in any::<u64>(), n in 1usize..5, p in 1usize..4) {
        let mut r = SeededRng::new(seed);
        let c = well_conditioned(&mut r, p);
        let a = random_ppd(&mut r, &c, n);
        let b = random_ppd(&mut r, &c, n);
        for mean in [geometric_mean, wasserstein_mean] {
            let ab = mean(&c, &a, &b, 0.5).unwrap();
            let ba = mean(&c, &b, &a, 0.5).unwrap();
            prop_assert!(ab.sub(&ba).unwrap().frobenius_norm() <= 1e-9 * ab.frobenius_norm());
            prop_assert!(c.is_ppd(&ab, 1e-12).unwrap());
        }
    }

    #[test]
    fn full_rank_pseudo_svd_is_exact(seed in any::<u64>(), m in 1usize..12, n in 1usize..12, p in 1usize..8) {
        let mut r = SeededRng::new(seed);
        let a = gaussian(&mut r, m, n, p);
        let f = pseudo_svd_full(&a, &build_jl_map(p, seed)).unwrap();
        prop_assert!(relative_error(&a, &f.reconstruct().unwrap(), p).unwrap() <= 1e-12);
    }
}
