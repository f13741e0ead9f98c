//! Outage probability and average bit-error rate of a dual-hop
//! decode-and-forward free-space-optical link over K-distributed turbulence
//! with pointing error.

// Reference constants keep all their digits, and `!(x > 0.0)` also
// rejects NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod channel;
pub mod cli;
pub mod dualhop;
pub mod error;
pub mod montecarlo;
pub mod quad;
pub mod specialfn;

pub use error::{Error, Result};
