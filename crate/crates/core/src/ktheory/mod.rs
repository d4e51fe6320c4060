//! The boundary map `∂: Z^{G⁰_rg} → Z_G`, `δ_v ↦ δ_v − Σ_{s(e)=v} χ_{r(e)}`,
//! and `K₀ = coker ∂`, `K₁ = ker ∂`.
//!
//! `Z_G` is infinitely generated, so it is modelled by the functions that are
//! constant outside a finite tracked set `T`: one coordinate per tracked
//! vertex plus a coordinate `τ` for the indicator of the untracked remainder.
//! Relations of untracked vertices are dropped and the answer is accepted
//! only when three consecutive truncations agree.
//!
//! Everything here is generic over the integer type; the crate root fixes
//! `BigInt` for the public aliases.

mod boundary;
mod group;
mod matrix;
mod snf;
mod zg;

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

pub use boundary::{boundary_matrix, delta_relation, k0, k1, k_groups, tracked_set, BoundaryMatrix, KGroups, KOptions};
pub use group::FpAbelianGroup;
pub use matrix::Matrix;
pub use snf::{smith_normal_form, solve_row_combination, RowSolution, SmithForm};
pub use zg::{chi, Tracked, ZgFunction};

/// Exact integers usable as matrix entries.
pub trait Scalar: Integer + Signed + Clone + Debug + Display + FromPrimitive {}

impl<T: Integer + Signed + Clone + Debug + Display + FromPrimitive> Scalar for T {}
