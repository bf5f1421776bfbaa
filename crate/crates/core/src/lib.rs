//! Tensor-tensor multiplication with full-rank linear maps.
//!
//! Third-order tensors are multiplied through the transformed ("hat")
//! domain: `A *_M B = ((A x_3 M) face-wise (B x_3 M)) x_3 M^+` for a
//! full-rank `M` that may be invertible, surjective or injective. On top of
//! the product this crate provides identities, inverses and transposes,
//! means of pseudo-positive-definite tensors, resultant and hyperdeterminant
//! evaluation for `2 x 2 x 2` tensors, and the full and truncated
//! pseudo-SVD used for cube compression.

pub mod error;
pub mod linmap;
pub mod matkernels;
pub mod means;
pub mod mprod;
pub mod polydet;
pub mod psvd;
pub mod rng;
pub mod tensor;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use linmap::{build_jl_map, build_u3_map, hadamard, mode3_product, FullRankMap, MapKind};
pub use matkernels::Matrix;
pub use mprod::{facewise, MprodContext, MulAlgo};
pub use psvd::{CompressionReport, CompressionRow, PsvdFactors};
pub use tensor::{Tensor3, Tube};
