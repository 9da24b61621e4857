// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod quadrature;
pub mod scatter;
pub mod specfun;
pub mod zeromode;

pub use error::{Error, Result};
