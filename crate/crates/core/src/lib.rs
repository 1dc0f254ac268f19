// `!(x >= y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod format;
pub mod precision;
pub mod sieve;
pub mod special;

pub use error::{Error, Result};
pub use precision::{CValue, PrecisionContext, RValue};
pub mod cli;
pub mod contours;
pub mod dirichlet;
pub mod experiments;
pub mod powers;
pub mod quadrature;
pub mod roots;
pub mod zetafn;
