use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

/// Errors reported by the lattice toolkit.
///
/// Domain errors signal violated preconditions, capacity errors signal a
/// configured bound that the caller may raise, and `Internal` flags a
/// constructive step that is guaranteed to succeed by theory — hitting it
/// means a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector's length does not match the rank of the lattice it is used with.
    DimensionMismatch { expected: usize, found: usize },
    /// The zero vector was passed where a nonzero vector is required.
    ZeroVector,
    /// A Gram matrix is not symmetric.
    NotSymmetric,
    /// A Gram matrix is singular where a non-degenerate form is required.
    Degenerate,
    /// Rescaling by zero.
    ZeroRescale,
    /// The operation requires an even lattice.
    NotEven,
    /// The operation requires a lattice of a specific rank.
    WrongRank { expected: usize, found: usize },
    /// The operation requires a specific signature.
    WrongSignature { expected: (usize, usize), found: (usize, usize) },
    /// A vector that must be isotropic is not.
    NotIsotropic,
    /// Two vectors that must pair to zero do not.
    NotOrthogonal,
    /// A vector that must be primitive is not.
    NotPrimitive,
    /// The lattice does not start with three orthogonal hyperbolic blocks.
    MissingU3Prefix,
    /// A reference class that must lie strictly inside the positive cone does not.
    NotInPositiveCone,
    /// A wall passes through the reference class, so it lies in no chamber interior.
    WallThroughReference,
    /// A configured bound was exceeded; `attempted` reports how far the
    /// computation would have had to go.
    Capacity { what: &'static str, attempted: BigInt, cap: BigInt },
    /// A certificate failed to validate; `index` names the offending square
    /// bound `i` when one is implicated.
    CertificateInvalid { index: Option<BigInt>, reason: String },
    /// A block expression or other structured input failed to parse.
    Parse(String),
    /// General precondition violation.
    Domain(&'static str),
    /// A constructive step that cannot fail on valid input failed.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroVector => write!(f, "the zero vector is not allowed here"),
            Error::NotSymmetric => write!(f, "Gram matrix is not symmetric"),
            Error::Degenerate => write!(f, "bilinear form is degenerate"),
            Error::ZeroRescale => write!(f, "cannot rescale a lattice by zero"),
            Error::NotEven => write!(f, "operation requires an even lattice"),
            Error::WrongRank { expected, found } => {
                write!(f, "wrong rank: expected {expected}, found {found}")
            }
            Error::WrongSignature { expected, found } => write!(
                f,
                "wrong signature: expected ({}, {}), found ({}, {})",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotIsotropic => write!(f, "vector must have square zero"),
            Error::NotOrthogonal => write!(f, "vectors must pair to zero"),
            Error::NotPrimitive => write!(f, "vector must be primitive"),
            Error::MissingU3Prefix => {
                write!(f, "lattice must begin with three orthogonal hyperbolic blocks")
            }
            Error::NotInPositiveCone => {
                write!(f, "reference class must lie strictly inside the positive cone")
            }
            Error::WallThroughReference => {
                write!(f, "a wall passes through the reference class")
            }
            Error::Capacity { what, attempted, cap } => {
                write!(f, "capacity exceeded for {what}: needed {attempted}, cap is {cap}")
            }
            Error::CertificateInvalid { index, reason } => match index {
                Some(i) => write!(f, "certificate invalid at i = {i}: {reason}"),
                None => write!(f, "certificate invalid: {reason}"),
            },
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Domain(msg) => write!(f, "{msg}"),
            Error::Internal(msg) => write!(f, "internal error (please report): {msg}"),
        }
    }
}

impl core::error::Error for Error {}
