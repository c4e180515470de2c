//! Exact-arithmetic toolkit for even lattices of the kind that arise as
//! Picard and second-cohomology lattices of hyper-Kähler manifolds.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in this crate. Decision procedures
//! return witnesses or machine-checkable certificates rather than bare
//! booleans, so every verdict can be re-verified offline.
//!
//! The crate is organised around six concerns:
//!
//! - [`lattice`]: Gram lattices, pairings, divisibility, discriminant
//!   groups, orthogonal complements and saturation.
//! - [`transvections`]: Eichler transvections and the constructive
//!   extraction of a hyperbolic plane orthogonal to a pair of vectors.
//! - [`forms`]: integral binary quadratic forms — isotropy, reduction
//!   cycles of indefinite forms, and a complete representability decision
//!   procedure with proof-of-absence certificates.
//! - [`enumerate`]: exact short-vector enumeration in definite lattices
//!   and complete enumeration of wall classes separating two positive
//!   classes in a hyperbolic lattice.
//! - [`cones`]: positive-cone membership, movable-interior location,
//!   rank-2 chamber decompositions and the rank-2 finiteness oracle for
//!   birational automorphism groups.
//! - [`avoidance`]: construction of rank-2 sublattices that provably
//!   contain no isotropic vectors and no vectors of small negative
//!   square, together with the certificates justifying the claim.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so values can be shared freely across threads.

#![cfg_attr(not(test), no_std)]
// Indexed loops mirror the matrix algebra they implement.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod arith;
pub mod avoidance;
pub mod catalog;
pub mod cones;
pub mod enumerate;
mod error;
pub mod forms;
pub mod lattice;
pub mod matrix;
pub mod transvections;
pub mod walls;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
