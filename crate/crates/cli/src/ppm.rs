//! Binary PPM (P6) false-colour snapshots of three cube channels.

use std::path::Path;

use mprod_core::Tensor3;

use crate::error::{CliError, Result};

pub const DEFAULT_CHANNELS: [usize; 3] = [26, 16, 8];

/// Channel `c` (1-based) scaled to `0..=255` by its own min and max.
/// A constant channel maps to mid-gray.
fn scaled_channel(t: &Tensor3, c: usize) -> Result<Vec<u8>> {
    if c == 0 || c > t.p() {
        return Err(CliError::BadChannel { channel: c, p: t.p() });
    }
    let vals = t.slice_values(c - 1);
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi <= lo {
        return Ok(vec![128; vals.len()]);
    }
    let span = hi - lo;
    Ok(vals
        .iter()
        .map(|&x| (255.0 * (x - lo) / span).round().clamp(0.0, 255.0) as u8)
        .collect())
}

/// Encodes rows as image rows and columns as image columns.
pub fn encode_ppm(t: &Tensor3, channels: [usize; 3]) -> Result<Vec<u8>> {
    let planes = channels
        .iter()
        .map(|&c| scaled_channel(t, c))
        .collect::<Result<Vec<_>>>()?;
    let (m, n) = (t.m(), t.n());
    let header = format!(
        "P6\n# channels {},{},{} scaled independently by min-max\n{n} {m}\n255\n",
        channels[0], channels[1], channels[2]
    );
    let mut out = header.into_bytes();
    out.reserve(3 * m * n);
    for px in 0..m * n {
        out.extend(planes.iter().map(|plane| plane[px]));
    }
    Ok(out)
}

pub fn write_ppm(path: &Path, t: &Tensor3, channels: [usize; 3]) -> Result<()> {
    std::fs::write(path, encode_ppm(t, channels)?)?;
    Ok(())
}
