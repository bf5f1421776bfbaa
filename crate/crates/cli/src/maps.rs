//! Choice of the map `M` for compression commands.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use mprod_core::{build_jl_map, build_u3_map, FullRankMap, Matrix, Tensor3};

use crate::cube::load_cube;
use crate::error::{CliError, Result};

/// Environment variable consulted when no `--seed` flag is given.
pub const SEED_ENV: &str = "MPROD_SEED";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapChoice {
    Jl,
    Identity,
    U3,
    File(PathBuf),
}

impl FromStr for MapChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jl" => Ok(MapChoice::Jl),
            "identity" => Ok(MapChoice::Identity),
            "u3" => Ok(MapChoice::U3),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(MapChoice::File(PathBuf::from(path))),
                _ => Err(CliError::BadFlag(format!(
                    "unknown map {s:?}; expected jl, identity, u3 or file:PATH"
                ))),
            },
        }
    }
}

impl fmt::Display for MapChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapChoice::Jl => f.write_str("jl"),
            MapChoice::Identity => f.write_str("identity"),
            MapChoice::U3 => f.write_str("u3"),
            MapChoice::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl MapChoice {
    pub fn build(&self, cube: &Tensor3, seed: u64) -> Result<FullRankMap> {
        let p = cube.p();
        match self {
            MapChoice::Jl => Ok(build_jl_map(p, seed)),
            MapChoice::Identity => Ok(FullRankMap::identity(p)),
            MapChoice::U3 => Ok(build_u3_map(cube)?),
            MapChoice::File(path) => {
                let t = load_cube(path, false)?;
                if t.p() != 1 {
                    return Err(CliError::BadFlag(format!(
                        "map file {} must have p = 1, found {}",
                        path.display(),
                        t.p()
                    )));
                }
                if t.n() != p {
                    return Err(CliError::BadFlag(format!(
                        "map file {} has {} columns but the cube has {p} channels",
                        path.display(),
                        t.n()
                    )));
                }
                let m = Matrix::from_vec(t.m(), t.n(), t.into_vec())?;
                Ok(FullRankMap::new(m)?)
            }
        }
    }
}

/// `--seed` if given, else the environment variable, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::BadFlag(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}
