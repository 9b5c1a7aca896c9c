// `!(x > t)` comparisons treat NaN as failing the bound.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod crooked;
pub mod error;
pub mod holonomy;
pub mod lorentz;
pub mod margulis;
pub mod mesh;
pub mod minkowski;

pub use error::{Error, Result};
