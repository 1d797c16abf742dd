#![cfg_attr(not(feature = "std"), no_std)]
//! Invariant sums of squares for the reflection groups `S_n`, `B_n` and `D_n`.

extern crate alloc;

pub mod dualcone;
pub mod error;
pub mod groups;
pub mod harmonics;
pub mod isotypic;
pub mod linalg;
pub mod octics;
pub mod poly;
pub mod sos;
pub mod specht;
pub mod tableaux;

pub use error::{Error, Result};
pub use poly::{Monomial, Point, Poly, Value, Q};
