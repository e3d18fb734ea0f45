//! Dyadic Whitney geometry, Sobolev and Besov norms, extension and trace
//! operators, and a Q1 solver for mixed boundary-value problems.
//!
//! Points are `[f64; N]` with the dimension fixed at compile time. The
//! geometry kernels are written for `N = 2` and `N = 3`; norm evaluation on
//! boxes works for any `N`.

pub mod bvp;
pub mod error;
pub mod extension;
pub mod funcspace;
pub mod geometry;
pub mod io;
pub mod trace;

pub use error::{Error, Result};

/// A point in `R^N`.
pub type Point<const N: usize> = [f64; N];
