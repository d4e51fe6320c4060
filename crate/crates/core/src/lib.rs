//! Ultragraph edge shifts over countably infinite alphabets.
//!
//! The crate works with finite presentations of (possibly infinite)
//! ultragraphs and answers exact questions about them:
//!
//! - [`vertexset`]: finite/cofinite index sets, the carrier for ranges and
//!   source preimages.
//! - [`ultragraph`]: presentations, structural queries and hypothesis checks.
//! - [`shiftspace`]: words of the full shift, the shift map, cylinders,
//!   membership in `X_F` and in edge shifts, and the conversions between
//!   one-step shifts and ultragraph edge shifts.
//! - [`partialaction`]: the free-group partial action on the edge shift.
//! - [`ktheory`]: the boundary map, Smith normal form and `K₀`/`K₁`.
//! - [`invariants`]: full-shift detection and conjugacy-obstruction reports.
//! - [`presentation`] and [`cli`]: the text formats and the command line.
//!
//! Infinite words are handled in eventually periodic form, which keeps every
//! predicate decidable.
//!
//! One question stays open here, as it is in the literature: if `X` is a shift
//! of finite type and `φ: X → Y` is a conjugacy, is `Y` a shift of finite
//! type? Nothing in this crate depends on the answer.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod ktheory;
pub mod partialaction;
pub mod presentation;
pub mod shiftspace;
pub mod ultragraph;
pub mod vertexset;

use num_bigint::BigInt;

pub use error::{Error, Result};

/// Vertex, edge and letter indices.
pub type Index = u32;

pub type IntMatrix = ktheory::Matrix<BigInt>;
pub type ZgFunction = ktheory::ZgFunction<BigInt>;
pub type FpAbelianGroup = ktheory::FpAbelianGroup<BigInt>;
pub type SmithForm = ktheory::SmithForm<BigInt>;
pub type BoundaryMatrix = ktheory::BoundaryMatrix<BigInt>;
