//! `TCUBE1` binary cube files.
//!
//! Layout: the line `TCUBE1`, the ASCII line `m n p`, then `m*n*p`
//! little-endian `f64` values in frontal-slice-major, row-major order
//! (slice 1 row 1 first). A map matrix is stored as a cube with `p = 1`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use mprod_core::Tensor3;

use crate::error::{CliError, Result};

pub const MAGIC: &str = "TCUBE1";

pub fn write_cube<W: Write>(mut w: W, t: &Tensor3) -> Result<()> {
    let (m, n, p) = t.dims();
    write!(w, "{MAGIC}\n{m} {n} {p}\n")?;
    for &x in t.as_slice() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn header_line<R: BufRead>(r: &mut R, what: &str) -> Result<String> {
    let mut raw = Vec::new();
    // The header is short; cap the read so a binary file fails fast.
    r.by_ref().take(256).read_until(b'\n', &mut raw)?;
    if raw.last() != Some(&b'\n') {
        return Err(CliError::Format(format!("missing or overlong {what} line")));
    }
    let line = String::from_utf8(raw)
        .map_err(|_| CliError::Format(format!("{what} line is not text")))?;
    Ok(line.trim_end().to_string())
}

pub fn read_cube<R: BufRead>(mut r: R) -> Result<Tensor3> {
    let magic = header_line(&mut r, "magic")?;
    if magic != MAGIC {
        return Err(CliError::Format(format!("expected magic {MAGIC}, found {magic:?}")));
    }
    let dims = header_line(&mut r, "dimension")?;
    let parsed: Vec<usize> = dims
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Format(format!("bad dimension line {dims:?}: {e}")))?;
    let [m, n, p] = parsed[..] else {
        return Err(CliError::Format(format!("expected three dimensions, found {dims:?}")));
    };
    if m == 0 || n == 0 || p == 0 {
        return Err(CliError::Format(format!("dimensions must be positive, found {dims:?}")));
    }
    let len = m
        .checked_mul(n)
        .and_then(|x| x.checked_mul(p))
        .filter(|x| x.checked_mul(8).is_some())
        .ok_or_else(|| CliError::Format(format!("dimensions overflow: {dims:?}")))?;
    // Grow with the input rather than trusting the header for the allocation.
    let mut bytes = Vec::new();
    r.by_ref().take(len as u64 * 8).read_to_end(&mut bytes)?;
    if bytes.len() < len * 8 {
        return Err(CliError::Format(format!("payload shorter than {len} values")));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(CliError::Format(format!("payload longer than {len} values")));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(Tensor3::from_vec(m, n, p, data)?)
}

pub fn save_cube(path: &Path, t: &Tensor3) -> Result<()> {
    write_cube(BufWriter::new(File::create(path)?), t)
}

/// Loads a cube, optionally scaled to unit Frobenius norm.
pub fn load_cube(path: &Path, normalize: bool) -> Result<Tensor3> {
    let t = read_cube(BufReader::new(File::open(path)?))?;
    if normalize {
        normalize_cube(&t)
    } else {
        Ok(t)
    }
}

pub fn normalize_cube(t: &Tensor3) -> Result<Tensor3> {
    let norm = t.frobenius_norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(CliError::ZeroNormCube);
    }
    Ok(t.scale(1.0 / norm))
}
