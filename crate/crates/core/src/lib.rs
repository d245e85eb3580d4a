//! Optimal one-sided confidence bounds on the average success probability of
//! independent Bernoulli trials that need not be identically distributed.
//!
//! ```
//! use bernoulli_bounds::intervals::{qhat_f, CiQuery};
//!
//! let q = CiQuery::new(20, 1, 0.05).unwrap();
//! assert!((qhat_f(q).unwrap().value - 1.0 / 400.0).abs() < 1e-12);
//! ```

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod intervals;
pub mod inverse;
pub mod poibin;
pub mod special;
pub mod verify;

pub use error::{BoundsError, Result};
