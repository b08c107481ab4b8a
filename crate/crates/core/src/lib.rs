#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod g2star;
pub mod generic;
pub mod liealg;
pub mod linalg;
pub mod metric;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use scalar::{Arith, Ring, Scalar, Q};
