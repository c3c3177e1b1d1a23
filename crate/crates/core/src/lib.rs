// NaN-rejecting guards are written as negated comparisons on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dd;
pub mod error;
pub mod fourier;
pub mod gram;
pub mod haar;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod special_unitary;
pub mod table;
pub mod unitary;
pub mod zeros;

pub use error::{Error, Result};
