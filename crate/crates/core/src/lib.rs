//! Annealing algorithms for permutation-symmetric Hamming-weight problems.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod anneal;
pub mod cli;
pub mod error;
pub mod math;
pub mod metrics;
pub mod ode;
pub mod problems;
pub mod sa;
pub mod schrodinger;
pub mod semiclassical;
pub mod sqa;
pub mod svd;
pub mod symspace;
pub mod tridiag;

pub use error::{Error, Result};
