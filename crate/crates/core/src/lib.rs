//! Exact arithmetic for Serre-type motivic spectral sequences.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod abgroup;
pub mod couple;
pub mod error;
pub mod gradedalg;
pub mod serre;
pub mod steenrod;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use error::{Error, Result};
