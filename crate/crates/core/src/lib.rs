//! Local models for Lagrangian antisurgery and Lagrangian 0-surgery in
//! `T*R^n`, together with the numerical instruments used to check them.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. Everything is
//! a pure function of its inputs:
//!
//! - [`symplectic`]: phase-space points, the standard symplectic form,
//!   parametrized Lagrangian patches, Lagrangian frames and the Maslov index
//!   of frame loops, planar curves and their enclosed areas, double-point
//!   search.
//! - [`handle`]: the immersed Lagrangian handle `Γ` with its ends `Λ`, `Λ'`.
//! - [`zero_surgery`]: the classical 0-surgery model `h_γ`, the two
//!   resolutions of the double point of `Λ'`, their Maslov indices, and the
//!   curve-level desingularization model.
//! - [`calculus`]: Euler characteristic, orientability and homology-rank
//!   bookkeeping for connected sums of the standard atoms.
//! - [`atlas`]: rotation Lagrangians in `C^2`, the Whitney/Clifford/Chekanov
//!   profile curves and the `CP^n` family.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod atlas;
pub mod calculus;
mod error;
pub mod handle;
pub mod linalg;
pub mod profile;
pub mod rational;
pub mod symplectic;
pub mod zero_surgery;

pub use error::{Error, Result};
