//! Joint encryption, channel coding and modulation over QC-LDPC lattices.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece of the scheme:
//!
//! - [`bitmat`]: GF(2) matrices, circulants, companion matrices and exact
//!   integer solves.
//! - [`rdfcode`]: random-difference-family QC-LDPC codes and their systematic
//!   generators.
//! - [`lattice`]: the Construction-A lattice, hypercube shaping and modular
//!   recovery.
//! - [`decoder`]: sum-product decoding of noisy lattice points.
//! - [`nlf`]: the multiplexed companion-power map and its inverse.
//! - [`keystream`]: reseeded LFSR error vectors and LFSR-driven permutations.
//! - [`cipher`]: key generation, sessions and the encrypt/decrypt pipelines.
//! - [`analysis`]: key-size, expansion, rate and attack-cost calculators.
//!
//! File formats, the channel simulator and the command line live in the
//! companion `latcrypt` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod bitmat;
pub mod cipher;
pub mod decoder;
mod error;
pub mod keystream;
pub mod lattice;
pub mod nlf;
pub mod polytable;
pub mod rdfcode;

pub use error::{Error, Result};
