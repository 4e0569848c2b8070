//! Entropy, relative entropy and index computations for inclusions of
//! finite-dimensional von Neumann algebras.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod harness;
pub mod inclusion;
pub mod matrix;
pub mod relent;
pub mod states;

pub use error::{Error, Result};
