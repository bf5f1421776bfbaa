//! Fixed-fixture verification of the worked examples.
//!
//! Fixtures are plain data so that tests can perturb them and watch the
//! corresponding check fail.

use std::fmt;

use mprod_core::means::{geometric_mean, riccati_residual, wasserstein_mean};
use mprod_core::polydet::{hyperdet_2x2x2, resultant_2x2x2};
use mprod_core::rng::SeededRng;
use mprod_core::{Error, FullRankMap, Matrix, MprodContext, Tensor3};

/// Default tolerance for values quoted to four decimals.
pub const DEFAULT_REFERENCE_TOL: f64 = 5e-3;

#[derive(Debug, Clone)]
pub struct Fixtures {
    /// Injective `4 x 3` map and its pseudoinverse scaled by 95.
    pub assoc_map: Matrix,
    pub assoc_pinv_95: Matrix,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// `(u * v) * w` and `u * (v * w)` scaled by 9025.
    pub assoc_left_9025: Vec<f64>,
    pub assoc_right_9025: Vec<f64>,

    pub zero_map: Matrix,
    pub zero_pairs: usize,
    pub zero_seed: u64,

    pub no_identity_map: Matrix,

    pub ppd_injective_map: Matrix,
    pub ppd_injective_a: Tensor3,

    pub surjective_map: Matrix,
    pub surjective_pinv: Matrix,
    pub surjective_a: Tensor3,
    pub surjective_roots: [Tensor3; 2],

    pub no_root_map: Matrix,
    pub no_root_a: Tensor3,
    pub no_root_a_hat: Tensor3,
    pub no_root_b: Tensor3,
    pub no_root_x: Tensor3,
    pub no_root_b_form: Vec<f64>,

    pub rotation_map: Matrix,
    pub rotation_c: Tensor3,
    pub rotation_c_form: Vec<f64>,

    pub inequality_a: Tensor3,
    pub inequality_x: Tensor3,
    pub inequality_form: Vec<f64>,

    pub mean_a: Tensor3,
    pub mean_b: Tensor3,
    pub resultant_mean: f64,
    pub hyperdet_mean: f64,

    pub scalar_a: f64,
    pub scalar_b: f64,
}

fn slices(s: &[[[f64; 2]; 2]]) -> Tensor3 {
    let mats: Vec<Matrix> = s.iter().map(|m| Matrix::from_rows(m)).collect();
    Tensor3::from_slices(&mats).expect("equal slice shapes")
}

fn diag2(a: f64) -> [[f64; 2]; 2] {
    [[a, 0.0], [0.0, a]]
}

impl Default for Fixtures {
    fn default() -> Self {
        let lateral = |top: [f64; 2], bottom: [f64; 2]| {
            Tensor3::from_vec(2, 1, 2, vec![top[0], bottom[0], top[1], bottom[1]]).expect("2x1x2")
        };
        Self {
            assoc_map: Matrix::from_rows(&[
                [1.0, 1.0, 1.0],
                [1.0, -2.0, 1.0],
                [1.0, 1.0, 0.0],
                [0.0, 1.0, 2.0],
            ]),
            assoc_pinv_95: Matrix::from_rows(&[
                [29.0, 23.0, 43.0, -26.0],
                [13.0, -29.0, 16.0, 8.0],
                [4.0, 13.0, -17.0, 39.0],
            ]),
            u: vec![1.0, 1.0, 1.0],
            v: vec![1.0, 2.0, 3.0],
            w: vec![-1.0, 1.0, 5.0],
            assoc_left_9025: vec![-437016.0, 307308.0, 1033434.0],
            assoc_right_9025: vec![-386472.0, 312276.0, 1008918.0],

            zero_map: Matrix::from_rows(&[[1.0], [-1.0]]),
            zero_pairs: 100,
            zero_seed: 2024,

            no_identity_map: Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0], [1.0, 0.0]]),

            ppd_injective_map: Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
            ppd_injective_a: slices(&[diag2(1.0), diag2(1.0)]),

            surjective_map: Matrix::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
            surjective_pinv: Matrix::from_rows(&[[0.5, 0.0], [0.0, 1.0], [0.5, 0.0]]),
            surjective_a: slices(&[diag2(2.0), diag2(4.0), diag2(2.0)]),
            surjective_roots: [
                slices(&[diag2(1.0), diag2(2.0), diag2(1.0)]),
                slices(&[diag2(3.0), diag2(2.0), diag2(-1.0)]),
            ],

            no_root_map: Matrix::from_rows(&[[0.0, 1.0], [-1.0, 1.0]]),
            no_root_a: slices(&[diag2(2.0), diag2(1.0)]),
            no_root_a_hat: slices(&[diag2(1.0), diag2(-1.0)]),
            no_root_b: slices(&[diag2(0.0), diag2(1.0)]),
            no_root_x: lateral([1.0, 0.0], [0.0, 0.0]),
            no_root_b_form: vec![-1.0, 0.0],

            rotation_map: Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]),
            rotation_c: slices(&[diag2(-1.0), diag2(1.0)]),
            rotation_c_form: vec![-1.0, 0.0],

            inequality_a: slices(&[[[2.0, -1.0], [-1.0, 2.0]], diag2(2.0)]),
            inequality_x: lateral([1.0, 0.0], [1.0, 0.0]),
            inequality_form: vec![2.0, 0.0],

            mean_a: slices(&[[[2.0, 1.0], [1.0, 2.0]], [[4.0, 1.0], [1.0, 4.0]]]),
            mean_b: slices(&[[[2.0, -1.0], [-1.0, 2.0]], [[2.0, -1.0], [-1.0, 2.0]]]),
            resultant_mean: 3.3287,
            hyperdet_mean: 0.8753,

            scalar_a: 2.0,
            scalar_b: 8.0,
        }
    }
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub achieved: String,
    pub required: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} achieved {:<24} required {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.achieved,
            self.required
        )
    }
}

fn at_most(name: &'static str, achieved: f64, bound: f64) -> Check {
    Check {
        name,
        achieved: format!("{achieved:.3e}"),
        required: format!("<= {bound:.1e}"),
        passed: achieved <= bound,
    }
}

fn near(name: &'static str, achieved: f64, target: f64, tol: f64) -> Check {
    Check {
        name,
        achieved: format!("{achieved:.6}"),
        required: format!("{target} +/- {tol:.1e}"),
        passed: (achieved - target).abs() <= tol,
    }
}

fn outcome(name: &'static str, achieved: String, required: &str, passed: bool) -> Check {
    Check {
        name,
        achieved,
        required: required.to_string(),
        passed,
    }
}

fn failed(name: &'static str, required: &str, err: impl fmt::Display) -> Check {
    outcome(name, format!("error: {err}"), required, false)
}

fn tube(v: &[f64]) -> Tensor3 {
    Tensor3::from_vec(1, 1, v.len(), v.to_vec()).expect("non-empty tube")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest entry difference relative to the largest expected entry.
fn rel_diff(got: &[f64], expected: &[f64]) -> f64 {
    let scale = expected.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    max_abs_diff(got, expected) / scale
}

fn context(m: &Matrix) -> mprod_core::Result<MprodContext> {
    Ok(MprodContext::new(FullRankMap::new(m.clone())?))
}

type Attempt = std::result::Result<Check, Error>;

fn run(name: &'static str, required: &str, f: impl FnOnce() -> Attempt) -> Check {
    f().unwrap_or_else(|e| failed(name, required, e))
}

fn associativity(fx: &Fixtures) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run("assoc-map-pinv", "<= 1.0e-12", || {
        let ctx = context(&fx.assoc_map)?;
        let got = ctx.map.pinv().scale(95.0);
        Ok(at_most(
            "assoc-map-pinv",
            rel_diff(got.as_slice(), fx.assoc_pinv_95.as_slice()),
            1e-12,
        ))
    }));
    let products = || -> mprod_core::Result<(Tensor3, Tensor3)> {
        let ctx = context(&fx.assoc_map)?;
        let (u, v, w) = (tube(&fx.u), tube(&fx.v), tube(&fx.w));
        let left = ctx.mprod(&ctx.mprod(&u, &v)?, &w)?.scale(9025.0);
        let right = ctx.mprod(&u, &ctx.mprod(&v, &w)?)?.scale(9025.0);
        Ok((left, right))
    };
    match products() {
        Ok((left, right)) => {
            out.push(at_most(
                "assoc-left-order",
                rel_diff(left.as_slice(), &fx.assoc_left_9025),
                1e-9,
            ));
            out.push(at_most(
                "assoc-right-order",
                rel_diff(right.as_slice(), &fx.assoc_right_9025),
                1e-9,
            ));
        }
        Err(e) => {
            out.push(failed("assoc-left-order", "<= 1.0e-9", &e));
            out.push(failed("assoc-right-order", "<= 1.0e-9", &e));
        }
    }
    out
}

fn zero_map(fx: &Fixtures) -> Check {
    run("zero-map-product", "<= 1.0e-12", || {
        let ctx = context(&fx.zero_map)?;
        let mut rng = SeededRng::new(fx.zero_seed);
        let mut worst = 0.0f64;
        for _ in 0..fx.zero_pairs {
            let p = ctx.map.p();
            let a = Tensor3::from_fn(2, 2, p, |_, _, _| rng.normal());
            let b = Tensor3::from_fn(2, 2, p, |_, _, _| rng.normal());
            let ratio = ctx.mprod(&a, &b)?.frobenius_norm() / (a.frobenius_norm() * b.frobenius_norm());
            worst = worst.max(ratio);
        }
        Ok(at_most("zero-map-product", worst, 1e-12))
    })
}

fn identity_missing(fx: &Fixtures) -> Check {
    const REQ: &str = "NoIdentityTensor";
    run("identity-nonexistence", REQ, || {
        let ctx = context(&fx.no_identity_map)?;
        Ok(match ctx.identity(2) {
            Err(Error::NoIdentityTensor { residual }) => {
                outcome("identity-nonexistence", format!("residual {residual:.3e}"), REQ, true)
            }
            Err(e) => outcome("identity-nonexistence", format!("error: {e}"), REQ, false),
            Ok(_) => outcome("identity-nonexistence", "identity found".into(), REQ, false),
        })
    })
}

fn ppd_not_invertible(fx: &Fixtures) -> Check {
    const REQ: &str = "PPD and NotMInvertible";
    run("ppd-not-invertible", REQ, || {
        let ctx = context(&fx.ppd_injective_map)?;
        let ppd = ctx.is_ppd(&fx.ppd_injective_a, 1e-12)?;
        let inv = ctx.m_inverse(&fx.ppd_injective_a);
        let achieved = match &inv {
            Err(Error::NotMInvertible { residual }) => format!("ppd={ppd} residual {residual:.3e}"),
            Err(e) => format!("ppd={ppd} error: {e}"),
            Ok(_) => format!("ppd={ppd} inverse found"),
        };
        let passed = ppd && matches!(inv, Err(Error::NotMInvertible { .. }));
        Ok(outcome("ppd-not-invertible", achieved, REQ, passed))
    })
}

fn surjective_roots(fx: &Fixtures) -> Vec<Check> {
    let mut out = vec![run("surjective-pinv", "<= 1.0e-14", || {
        let ctx = context(&fx.surjective_map)?;
        Ok(at_most(
            "surjective-pinv",
            max_abs_diff(ctx.map.pinv().as_slice(), fx.surjective_pinv.as_slice()),
            1e-14,
        ))
    })];
    out.push(run("surjective-roots", "both square to A, distinct", || {
        let ctx = context(&fx.surjective_map)?;
        let a = &fx.surjective_a;
        let mut worst = 0.0f64;
        for b in &fx.surjective_roots {
            // Compare in the hat domain: the surjective round trip only sees A x_3 M.
            let sq = ctx.hat(&ctx.mprod(b, b)?)?;
            worst = worst.max(sq.sub(&ctx.hat(a)?)?.frobenius_norm() / ctx.hat(a)?.frobenius_norm());
        }
        let ppd = ctx.is_ppd(a, 1e-12)?;
        let distinct = fx.surjective_roots[0].sub(&fx.surjective_roots[1])?.frobenius_norm() > 0.5;
        Ok(outcome(
            "surjective-roots",
            format!("residual {worst:.3e} ppd={ppd} distinct={distinct}"),
            "residual <= 1.0e-12, ppd, distinct",
            worst <= 1e-12 && ppd && distinct,
        ))
    }));
    out
}

fn positive_definiteness(fx: &Fixtures) -> Vec<Check> {
    let mut out = vec![run("no-real-root-hat", "<= 1.0e-14, not PPD", || {
        let ctx = context(&fx.no_root_map)?;
        let hat = ctx.hat(&fx.no_root_a)?;
        let diff = max_abs_diff(hat.as_slice(), fx.no_root_a_hat.as_slice());
        let ppd = ctx.is_ppd(&fx.no_root_a, 1e-12)?;
        Ok(outcome(
            "no-real-root-hat",
            format!("{diff:.3e} ppd={ppd}"),
            "<= 1.0e-14, not PPD",
            diff <= 1e-14 && !ppd,
        ))
    })];
    let forms: [(&'static str, &Matrix, &Tensor3, &Tensor3, &Vec<f64>, bool); 3] = [
        ("ppd-not-pd-form", &fx.no_root_map, &fx.no_root_b, &fx.no_root_x, &fx.no_root_b_form, true),
        ("orthogonal-not-pd-form", &fx.rotation_map, &fx.rotation_c, &fx.no_root_x, &fx.rotation_c_form, true),
        ("strict-inequality-form", &Matrix::identity(2), &fx.inequality_a, &fx.inequality_x, &fx.inequality_form, false),
    ];
    for (name, map, a, x, expected, expect_ppd) in forms {
        out.push(run(name, "<= 1.0e-14", || {
            let ctx = context(map)?;
            let y = ctx.inner_product(x, &ctx.mprod(a, x)?)?;
            let diff = max_abs_diff(&y.values, expected);
            let ppd = ctx.is_ppd(a, 1e-12)?;
            let mut check = at_most(name, diff, 1e-14);
            if expect_ppd {
                check.achieved = format!("{} ppd={ppd}", check.achieved);
                check.required = format!("{}, PPD", check.required);
                check.passed &= ppd;
            }
            Ok(check)
        }));
    }
    out
}

fn means(fx: &Fixtures, reference_tol: f64) -> Vec<Check> {
    let ctx = MprodContext::new(FullRankMap::identity(fx.mean_a.p()));
    let g = match geometric_mean(&ctx, &fx.mean_a, &fx.mean_b, 0.5) {
        Ok(g) => g,
        Err(e) => {
            return ["riccati-residual", "resultant-mean", "resultant-product", "hyperdet-mean", "hyperdet-product"]
                .into_iter()
                .map(|n| failed(n, "geometric mean", &e))
                .collect()
        }
    };
    let mut out = vec![run("riccati-residual", "<= 1.0e-9", || {
        Ok(at_most(
            "riccati-residual",
            riccati_residual(&ctx, &g, &fx.mean_a, &fx.mean_b)?,
            1e-9,
        ))
    })];
    out.push(run("resultant-mean", "reference value", || {
        Ok(near("resultant-mean", resultant_2x2x2(&g)?, fx.resultant_mean, reference_tol))
    }));
    out.push(run("resultant-product", "<= 1.0e-9", || {
        let prod = resultant_2x2x2(&fx.mean_a)? * resultant_2x2x2(&fx.mean_b)?;
        Ok(at_most("resultant-product", prod.abs().sqrt(), 1e-9))
    }));
    out.push(run("hyperdet-mean", "reference value", || {
        Ok(near("hyperdet-mean", hyperdet_2x2x2(&g)?, fx.hyperdet_mean, reference_tol))
    }));
    out.push(run("hyperdet-product", "<= 1.0e-9", || {
        let prod = hyperdet_2x2x2(&fx.mean_a)? * hyperdet_2x2x2(&fx.mean_b)?;
        Ok(at_most("hyperdet-product", prod.abs().sqrt(), 1e-9))
    }));
    out.push(run("scalar-geometric-mean", "<= 1.0e-12", || {
        let id = ctx.identity(2)?;
        let (a, b) = (fx.scalar_a, fx.scalar_b);
        let g = geometric_mean(&ctx, &id.scale(a), &id.scale(b), 0.5)?;
        let err = g.sub(&id.scale((a * b).sqrt()))?.frobenius_norm();
        Ok(at_most("scalar-geometric-mean", err, 1e-12))
    }));
    out.push(run("scalar-wasserstein-mean", "<= 1.0e-12", || {
        let id = ctx.identity(2)?;
        let (a, b) = (fx.scalar_a, fx.scalar_b);
        let w = wasserstein_mean(&ctx, &id.scale(a), &id.scale(b), 0.5)?;
        let expect = ((a.sqrt() + b.sqrt()) / 2.0).powi(2);
        let err = w.sub(&id.scale(expect))?.frobenius_norm();
        Ok(at_most("scalar-wasserstein-mean", err, 1e-12))
    }));
    out
}

/// Runs every check. `reference_tol` applies to values quoted to four decimals.
pub fn run_checks(fx: &Fixtures, reference_tol: f64) -> Vec<Check> {
    let mut out = associativity(fx);
    out.push(zero_map(fx));
    out.push(identity_missing(fx));
    out.push(ppd_not_invertible(fx));
    out.extend(surjective_roots(fx));
    out.extend(positive_definiteness(fx));
    out.extend(means(fx, reference_tol));
    out
}
