//! Exact enumeration of tournament score sequences and Erdős–Ginzburg–Ziv
//! numbers, the Lévy–Khintchine transform linking them, and the cyclic-shift
//! bijection between score bridges and bridges of area divisible by `n`.

#![allow(clippy::needless_range_loop)]

pub mod bijection;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod lktransform;
pub mod sequences;

pub use error::{Error, Result};
pub use exactnum::{BigInt, BigRat};
