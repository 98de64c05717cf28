//! Exact machinery for the hypermetric cone `HYP_{n+1}` and the combinatorial
//! types of lattice Delaunay polytopes it parametrizes.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and the parallel level driver live in `hypercone-cli`.
#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod bits;
pub mod delaunay;
pub mod equiv;
mod error;
pub mod exact;
pub mod facelat;
pub mod hypercone;
pub mod schlafli;

pub use error::{Error, Result};
