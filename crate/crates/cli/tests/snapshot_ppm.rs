use mprod_cli::ppm::{encode_ppm, DEFAULT_CHANNELS};
use mprod_cli::CliError;
use mprod_core::psvd::pseudo_svd_truncated;
use mprod_core::rng::SeededRng;
use mprod_core::{build_jl_map, FullRankMap, Tensor3};

fn split(ppm: &[u8]) -> (String, &[u8]) {
    // four header lines: magic, comment, size, maxval
    let mut newlines = 0;
    let end = ppm
        .iter()
        .position(|&b| {
            newlines += usize::from(b == b'\n');
            newlines == 4
        })
        .unwrap();
    (String::from_utf8(ppm[..=end].to_vec()).unwrap(), &ppm[end + 1..])
}

#[test]
fn header_and_scaling() {
    // 2 x 3 cube, channel 1 ramps 0..5, channel 2 constant, channel 3 reversed
    let t = Tensor3::from_fn(2, 3, 3, |i, j, k| match k {
        0 => (3 * i + j) as f64,
        1 => 7.0,
        _ => -((3 * i + j) as f64),
    });
    let ppm = encode_ppm(&t, [1, 2, 3]).unwrap();
    let (header, pixels) = split(&ppm);
    assert!(header.starts_with("P6\n# channels 1,2,3"));
    assert!(header.ends_with("\n3 2\n255\n"));
    assert_eq!(pixels.len(), 2 * 3 * 3);
    let red: Vec<u8> = pixels.iter().step_by(3).copied().collect();
    let green: Vec<u8> = pixels.iter().skip(1).step_by(3).copied().collect();
    let blue: Vec<u8> = pixels.iter().skip(2).step_by(3).copied().collect();
    assert_eq!(red, vec![0, 51, 102, 153, 204, 255]);
    assert_eq!(green, vec![128; 6]);
    assert_eq!(blue, vec![255, 204, 153, 102, 51, 0]);
}

#[test]
fn default_channels_and_bad_channel() {
    assert_eq!(DEFAULT_CHANNELS, [26, 16, 8]);
    let t = Tensor3::zeros(2, 2, 10);
    assert!(matches!(
        encode_ppm(&t, DEFAULT_CHANNELS),
        Err(CliError::BadChannel { channel: 26, p: 10 })
    ));
    assert!(matches!(encode_ppm(&t, [0, 1, 2]), Err(CliError::BadChannel { channel: 0, .. })));
}

#[test]
fn full_rank_snapshot_matches_original() {
    let mut r = SeededRng::new(3);
    let t = Tensor3::from_fn(12, 9, 30, |_, _, _| r.normal());
    let original = encode_ppm(&t, DEFAULT_CHANNELS).unwrap();
    for map in [FullRankMap::identity(30), build_jl_map(30, 5)] {
        let rec = pseudo_svd_truncated(&t, &map, 9).unwrap();
        assert_eq!(encode_ppm(&rec, DEFAULT_CHANNELS).unwrap(), original);
    }
    // deterministic bytes
    assert_eq!(encode_ppm(&t, DEFAULT_CHANNELS).unwrap(), original);
}
