//! Error types shared across the crate.

use thiserror::Error;

use crate::lattice_paths::Point;

/// Failures of the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    /// The convolution order `K` must be a positive integer.
    #[error("convolution order K must be positive, got {0}")]
    NonPositiveOrder(i64),
    /// A quotient that is integral by theory left a remainder.
    #[error("inexact division in closed form for K={k}, p={p}")]
    InexactDivision { k: i64, p: i64 },
}

/// Failures of exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    /// The requested enumeration exceeds the configured budget.
    #[error("instance too large for enumeration: {what} needs {needed}, budget is {budget}")]
    TooLarge { what: &'static str, needed: String, budget: u64 },
    /// The input tuple is not a nonintersecting family of the instance.
    #[error("not a survivor: {0}")]
    NotSurvivor(String),
}

/// Failures when manipulating 01-codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    /// A character other than `0` or `1` was found.
    #[error("invalid 01-code character {0:?}")]
    InvalidChar(char),
    /// A swap was requested between two equal bits.
    #[error("bits {i} and {j} are equal; swap changes nothing")]
    EqualBits { i: usize, j: usize },
    /// An index is outside `1..=len`.
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    /// The lhs code violates the terminal colour pattern of folded survivors.
    #[error("code {0} has two consecutive zeros after its first one, or ends in zero after a one")]
    ColourPattern(String),
}

/// Structural failures on folded overlays.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OverlayError {
    /// The tuple does not belong to the lhs instance being folded.
    #[error("fold expects a survivor of the lhs instance: {0}")]
    BadInput(String),
    /// A connection walk revisited an (edge, colour, direction) triple.
    #[error("bicoloured connection from {start:?} entered a cycle")]
    Cycle { start: Point },
    /// Edges could not be reassembled into paths from the known initial points.
    #[error("edge set does not decompose into paths: {0}")]
    Rebuild(String),
    /// Enumeration underneath the overlay failed.
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Failures of the planar strip analysis and of the bijection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XiError {
    /// A finite face is not a vertical strip.
    #[error("finite face is not a vertical strip: {0}")]
    NonStripFace(String),
    /// A structural rule on strips or columns is violated.
    #[error("strip structure violated: {0}")]
    Structure(String),
    /// Code classes on the two sides have different sizes.
    #[error("code class {code} has {lhs} folded survivors but {rhs} rhs survivors")]
    ClassSizeMismatch { code: String, lhs: usize, rhs: usize },
    /// The argument is not in the domain of the bijection.
    #[error("not in the domain of the bijection: {0}")]
    NotInDomain(String),
    /// Errors from the code layer.
    #[error(transparent)]
    Code(#[from] CodeError),
    /// Errors from the overlay layer.
    #[error(transparent)]
    Overlay(#[from] OverlayError),
    /// Errors from enumeration.
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Failures of the SVG renderer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    /// The drawing exceeds the configured size limit.
    #[error("drawing spans {span} lattice units, limit is {limit}")]
    TooLarge { span: i64, limit: i64 },
}
