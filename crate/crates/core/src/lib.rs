//! Symmetric-square L-values of modular eigenforms.
//!
//! The crate is `no_std` and only needs `alloc`. It carries the exact
//! arithmetic (rationals, cyclotomic and quadratic fields), ball arithmetic
//! with tracked error radii, fixed-precision p-adic numbers, level-one
//! q-expansions, Dirichlet characters and Bernoulli numbers, the
//! symmetric-square L-function machinery, and the Galois-side bookkeeping.

#![no_std]

extern crate alloc;

pub mod dirichlet;
pub mod error;
pub mod exact;
pub mod galois;
pub mod modforms;
pub mod padic;
pub mod real;
pub mod symsq;

pub use error::{Error, Result};
