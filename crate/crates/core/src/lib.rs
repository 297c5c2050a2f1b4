#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod dataset;
pub mod error;
pub mod forward;
pub mod greens;
pub mod imaging;
pub mod medium;
pub mod specfun;
pub mod surface;
pub mod synthkit;
pub mod validation;

pub use error::{Error, Result};
