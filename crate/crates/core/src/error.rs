//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share an ambient dimension do not.
    DimensionMismatch { expected: usize, got: usize },
    /// A polynomial exceeds the degree a moment sequence can pair with.
    DegreeMismatch { degree: u32, max: u32 },
    /// A moment matrix was requested for an odd-degree sequence.
    OddDegree { degree: u32 },
    NotSymmetric,
    SingularMatrix,
    DuplicatePoints,
    /// Every sampled Vandermonde system was singular.
    SingularAfterRetries { attempts: u32 },
    /// Too many consecutive samples landed inside the variety.
    SamplingExhausted { attempts: u32 },
    /// Deflation was requested at a point outside the variety.
    NotInVariety,
    /// The deflation gauge vanished at the chosen point.
    ZeroGauge,
    /// No column relation of total degree one exists.
    NoLinearRelation,
    /// A Hankel block needs more moments than the sequence provides.
    InsufficientDegree { needed: u32, got: u32 },
    SingularLeadingHankel,
    /// The node polynomial has fewer real roots than its degree.
    ComplexRoots { expected: usize, real: usize },
    /// The node polynomial has a repeated root, so nodes are not distinct.
    RepeatedNodes,
    /// An oracle re-check of a solver result failed.
    VerificationFailed,
    /// A numeric literal could not be parsed as an exact rational.
    InvalidNumber(String),
    /// A constructor invariant was violated.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DegreeMismatch { degree, max } => {
                write!(f, "polynomial degree {degree} exceeds sequence degree {max}")
            }
            Error::OddDegree { degree } => {
                write!(f, "moment matrix needs an even degree, got {degree}")
            }
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::DuplicatePoints => write!(f, "support points are not pairwise distinct"),
            Error::SingularAfterRetries { attempts } => {
                write!(f, "all {attempts} sampled node sets gave a singular system")
            }
            Error::SamplingExhausted { attempts } => {
                write!(f, "{attempts} consecutive samples fell inside the variety")
            }
            Error::NotInVariety => write!(f, "point is not in the variety of the matrix"),
            Error::ZeroGauge => write!(f, "deflation gauge is zero at this point"),
            Error::NoLinearRelation => write!(f, "no column relation of total degree 1"),
            Error::InsufficientDegree { needed, got } => {
                write!(f, "need moments up to degree {needed}, have {got}")
            }
            Error::SingularLeadingHankel => write!(f, "leading Hankel block is singular"),
            Error::ComplexRoots { expected, real } => {
                write!(f, "node polynomial has {real} real roots, expected {expected}")
            }
            Error::RepeatedNodes => write!(f, "node polynomial has a repeated root"),
            Error::VerificationFailed => write!(f, "oracle verification failed"),
            Error::InvalidNumber(s) => write!(f, "invalid rational literal: {s:?}"),
            Error::InvalidInput(s) => write!(f, "{s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
