//! Exponential sums, sphere lattice points and the circle-method machinery
//! for counting points of `x1^2 + x2^2 + x3^2 + x4^2 = N` in small caps.

pub mod error;
pub mod expsums;
pub mod cli;
pub mod linnik;
pub mod counting;
pub mod densities;
pub mod modarith;
pub mod oscillatory;
pub mod sphere;
pub mod summation;

pub use error::{Error, Result};
