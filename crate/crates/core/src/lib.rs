#![no_std]
// `!(x > 0.0)` is how NaN inputs get rejected alongside non-positive ones
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod cartan;
pub mod error;
pub mod futaki;
pub mod hamiltonian;
pub mod kahler_cp1;
pub mod kempf_ness;
pub mod lie;
pub mod linalg;
pub mod lp;
pub mod quadrature;
pub mod sample;
pub mod stencil;
pub mod tolerances;
pub mod wasserstein;

pub use error::{Error, Result};
