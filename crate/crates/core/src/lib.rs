//! Exact counting and classification of fuzzy matrices.
//!
//! Two fuzzy matrices of the same order are equivalent when their entries
//! share the same strict-order pattern and the same cells equal exactly 0
//! and exactly 1. Each class corresponds to a strictly increasing chain of
//! crisp (0/1) matrices, so counting classes reduces to counting chains in
//! the Boolean lattice on `n²` cells.
//!
//! The crate is organised as:
//!
//! * [`matrix`]: crisp and fuzzy matrices, exact membership values and the
//!   elementary fuzzy operations.
//! * [`cut`]: alpha-cuts, cut chains, canonical signatures and the two
//!   equivalence decision procedures.
//! * [`count`]: exact evaluation of the chain-counting sums and an
//!   inclusion–exclusion evaluation used as an independent check.
//! * [`enumerate`]: brute-force chain enumeration and lattice export.

pub mod count;
pub mod cut;
pub mod enumerate;
mod error;
pub mod matrix;

pub use count::{Count, Root};
pub use cut::{ChainSignature, CutChain};
pub use error::{Error, Result};
pub use matrix::{CrispMatrix, FuzzyMatrix, Membership};
