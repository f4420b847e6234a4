//! Cartan matrices, polarized lattices and Coxeter eigenvectors.
//!
//! Exact integer arithmetic backs every lattice identity ([`lattice`],
//! [`gabrielov`]); floating point is confined to [`spectral`], [`qdeform`]
//! and [`ising`].

pub mod error;
pub mod gabrielov;
pub mod ising;
pub mod lattice;
pub mod matrix;
pub mod qdeform;
pub mod rootsys;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, RationalMatrix};
pub use rootsys::{Color, Coloring, Family, RootSystemId};
