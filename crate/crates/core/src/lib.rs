//! Closedness of sums of subspaces of `C^d`.
//!
//! The crate works on exact finite-dimensional inputs: orthonormal bases,
//! orthogonal projectors and small dense operators. Every decision is
//! returned as a [`MarginReport`] whose entries carry a numerical margin and
//! a verdict derived from [`Tolerances::margin_tol`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blockmodel;
pub mod error;
pub mod images;
pub mod numerics;
pub mod paircalc;
pub mod pairs;
pub mod reduction;
pub mod report;
pub mod sample;
pub mod subspace;
pub mod systems;

pub use error::{Error, Result};
pub use numerics::{CMatrix, Tolerances, C64};
pub use report::{Margin, MarginKind, MarginReport, Verdict};
pub use subspace::{Subspace, SubspaceSystem};
