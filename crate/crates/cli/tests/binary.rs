use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mprod_cli::cube::save_cube;
use mprod_cli::ppm::{encode_ppm, DEFAULT_CHANNELS};
use mprod_core::rng::SeededRng;
use mprod_core::{Matrix, Tensor3};

fn mprod(args: &[&str]) -> Output {
    mprod_env(args, None)
}

fn mprod_env(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mprod"));
    cmd.args(args).env_remove("MPROD_SEED");
    if let Some(s) = seed_env {
        cmd.env("MPROD_SEED", s);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_cube(dir: &Path, name: &str, m: usize, n: usize, p: usize, seed: u64) -> (PathBuf, Tensor3) {
    let mut r = SeededRng::new(seed);
    let t = Tensor3::from_fn(m, n, p, |_, _, _| r.normal());
    let path = dir.join(name);
    save_cube(&path, &t).unwrap();
    (path, t)
}

struct Row {
    k: usize,
    s: usize,
    re: f64,
    cr: f64,
    seconds: f64,
    map: String,
    seed: String,
}

fn rows(csv_text: &str) -> Vec<Row> {
    let mut lines = csv_text.lines();
    assert_eq!(lines.next(), Some("k,s,re,cr,seconds,map,seed"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            Row {
                k: f[0].parse().unwrap(),
                s: f[1].parse().unwrap(),
                re: f[2].parse().unwrap(),
                cr: f[3].parse().unwrap(),
                seconds: f[4].parse().unwrap(),
                map: f[5].to_string(),
                seed: f[6].to_string(),
            }
        })
        .collect()
}

#[test]
fn verify_exits_zero() {
    let o = mprod(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().ends_with(" 0 failed"));
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 13);
}

#[test]
fn verify_rejects_bad_tolerance() {
    let o = mprod(&["verify", "--tolerance", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn compress_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 10, 8, 6, 1);
    let out = dir.path().join("r.csv");
    let args = [
        "compress", "--input", cube.to_str().unwrap(), "--normalize", "--map", "jl", "--seed", "9",
        "--k", "1,2,4,8", "--s", "3,6", "--out", out.to_str().unwrap(),
    ];
    let o = mprod(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("map jl: 16 x 6 (injective)"), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let r = rows(&text);
    assert_eq!(r.len(), 8);
    for s in [3, 6] {
        let res: Vec<f64> = r.iter().filter(|x| x.s == s).map(|x| x.re).collect();
        assert_eq!(res.len(), 4);
        assert!(res.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{res:?}");
        assert!(*res.last().unwrap() <= 1e-12);
    }
    for x in &r {
        assert_eq!(x.map, "jl");
        assert_eq!(x.seed, "9");
        assert!(x.seconds >= 0.0);
        let expect = (10 * 8 * 6) as f64 / (16 * x.k * (10 + 8 + 1) + 16 * 6) as f64;
        assert!((x.cr - expect).abs() <= 1e-12 * expect);
    }

    // same seed, same numbers (timings aside)
    let again = mprod(&args);
    assert_eq!(again.status.code(), Some(0));
    let r2 = rows(&std::fs::read_to_string(&out).unwrap());
    for (a, b) in r.iter().zip(&r2) {
        assert_eq!((a.k, a.s, a.re.to_bits(), a.cr.to_bits()), (b.k, b.s, b.re.to_bits(), b.cr.to_bits()));
    }
}

#[test]
fn identity_map_full_rank_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 7, 5, 4, 2);
    let o = mprod(&["compress", "--input", cube.to_str().unwrap(), "--map", "identity", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert_eq!((r[0].k, r[0].s), (5, 4));
    assert!(r[0].re <= 1e-12);
    assert_eq!(r[0].map, "identity");
    assert_eq!(r[0].seed, "");
}

#[test]
fn jl_dimension_for_220_channels() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 3, 3, 220, 3);
    let o = mprod(&["compress", "--input", cube.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("map jl: 512 x 220 (injective)"), "{}", stderr(&o));
}

#[test]
fn u3_and_file_maps() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 6, 5, 4, 4);
    let o = mprod(&["compress", "--input", cube.to_str().unwrap(), "--map", "u3", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("map u3: 4 x 4 (invertible)"));
    assert!(rows(&stdout(&o))[0].re <= 1e-12);

    // upper bidiagonal map, stored as a p = 1 cube
    let m = Matrix::from_fn(4, 4, |i, j| if i == j { 2.0 } else if j == i + 1 { 1.0 } else { 0.0 });
    let map_path = dir.path().join("m.tc");
    save_cube(&map_path, &Tensor3::from_slices(&[m]).unwrap()).unwrap();
    let spec = format!("file:{}", map_path.display());
    let o = mprod(&["compress", "--input", cube.to_str().unwrap(), "--map", &spec, "--k", "1,5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert!(r[1].re <= 1e-12 && r[0].re > r[1].re);

    // channel count mismatch
    let wrong = Matrix::identity(3);
    save_cube(&map_path, &Tensor3::from_slices(&[wrong]).unwrap()).unwrap();
    let o = mprod(&["compress", "--input", cube.to_str().unwrap(), "--map", &spec, "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 6, 6, 5, 5);
    let c = cube.to_str().unwrap();
    let re = |o: Output| {
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let r = rows(&stdout(&o));
        (r[0].re.to_bits(), r[0].seed.clone())
    };
    let env7 = re(mprod_env(&["compress", "--input", c, "--k", "2"], Some("7")));
    let flag7 = re(mprod_env(&["compress", "--input", c, "--k", "2", "--seed", "7"], Some("9")));
    // Sign flips do not change slice SVDs, so many seeds tie; 7 and 9 do not.
    let env9 = re(mprod_env(&["compress", "--input", c, "--k", "2"], Some("9")));
    let none = re(mprod(&["compress", "--input", c, "--k", "2"]));
    assert_eq!(env7, flag7);
    assert_eq!(env7.1, "7");
    assert_ne!(env7.0, env9.0);
    assert_eq!(none.1, "0");

    let o = mprod_env(&["compress", "--input", c, "--k", "2"], Some("seven"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn snapshot_writes_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, t) = write_cube(dir.path(), "a.tc", 9, 7, 30, 6);
    let out = dir.path().join("s.ppm");
    let o = mprod(&[
        "snapshot", "--input", cube.to_str().unwrap(), "--k", "7", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read(&out).unwrap(), encode_ppm(&t, DEFAULT_CHANNELS).unwrap());

    let o = mprod(&[
        "snapshot", "--input", cube.to_str().unwrap(), "--k", "2", "--channels", "1,2,31",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = mprod(&[
        "snapshot", "--input", cube.to_str().unwrap(), "--k", "2", "--channels", "1,2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, _) = write_cube(dir.path(), "a.tc", 4, 4, 3, 7);
    let c = cube.to_str().unwrap();
    let zero = dir.path().join("z.tc");
    save_cube(&zero, &Tensor3::zeros(2, 2, 2)).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["compress", "--input", c],
        vec!["compress", "--input", c, "--k", "0"],
        vec!["compress", "--input", c, "--k", "5"],
        vec!["compress", "--input", c, "--k", "1", "--s", "4"],
        vec!["compress", "--input", c, "--k", "1", "--map", "bogus"],
        vec!["compress", "--input", "/nonexistent/x.tc", "--k", "1"],
        vec!["compress", "--input", zero.to_str().unwrap(), "--normalize", "--k", "1"],
        vec!["bench", "--sizes", "100"],
        vec!["bench", "--sizes", "4,8", "--repeats", "2"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = mprod(&args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn small_bench_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = mprod(&[
        "bench", "--sizes", "8,16,32", "--depth", "2", "--crossover", "4", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algo,size,depth,median_seconds,repeats"));
    assert_eq!(lines.count(), 6);
    let err = stderr(&o);
    assert!(err.contains("naive: log-log slope") && err.contains("strassen: log-log slope"), "{err}");
}

#[test]
fn info_reports_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let (cube, t) = write_cube(dir.path(), "a.tc", 3, 4, 220, 8);
    let o = mprod_env(&["info", "--input", cube.to_str().unwrap()], Some("11"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("dimensions 3 x 4 x 220"));
    assert!(text.contains("entries 2640"));
    assert!(text.contains(&format!("frobenius norm {}", t.frobenius_norm())));
    assert!(text.contains("jl map rows 512"));
    assert!(text.contains("MPROD_SEED=11"));
}
