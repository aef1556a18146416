//! Structured inversion and off-diagonal decay bounds for lower-banded,
//! column diagonally dominant matrices.
//!
//! All matrix indices in the public API are 1-based (`A(1,1)` is the top-left
//! entry) unless a function says otherwise. [`DenseMatrix`] indexing with
//! `m[(i, j)]` is the exception: it is 0-based.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < t)` also rejects NaN

pub mod banded;
pub mod bounds;
pub mod dense;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod green;
pub mod lu;
pub mod mtx;
pub mod oracle;
pub mod verify;

pub use banded::{dominance_mu, gershgorin_interval, make_banded, BandedMatrix, DominanceReport};
pub use bounds::{eval_bound, lu_bound, varah_bound, BoundKind, DecayBound, Region};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use green::{reconstruct_lower, GreenGenerators};
pub use lu::{inverse_green_generators, structured_lu, StructuredLU};
