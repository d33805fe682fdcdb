//! Hankel determinants of convoluted Catalan numbers and their
//! nonintersecting lattice-path model.
//!
//! The crate evaluates `D_{K,M}(N) = det(C_{K,i+j+M})` exactly and verifies
//! the identities relating the two families of determinants by three
//! independent routes: exact linear algebra, exhaustive enumeration of path
//! tuples under the LGV involution, and a sign-reversing involution on folded
//! overlays followed by a bijection to the smaller instance.
//!
//! Arithmetic routines are generic over [`exact_arith::ExactInteger`]; the
//! aliases below fix the arbitrary-precision instantiation used everywhere
//! else.

pub mod codes_signs;
pub mod error;
pub mod exact_arith;
pub mod folded_overlays;
pub mod harness;
pub mod lattice_paths;
pub mod xi_bijection;

pub use codes_signs::Code01;
pub use error::{ArithError, CodeError, EnumError, OverlayError, RenderError, XiError};
pub use exact_arith::{HankelDims, HankelInstance, IdentityParams, Parity, Side};
pub use lattice_paths::{Budget, LatticePath, PathTuple, Point, Step};

/// Arbitrary-precision integer used for all determinant and count values.
pub type Int = num_bigint::BigInt;

/// Hankel matrix over [`Int`].
pub type Matrix = exact_arith::ExactMatrix<Int>;

/// `D_{K,M}(N)` over [`Int`].
pub fn hankel_det(dims: HankelDims) -> Result<Int, ArithError> {
    exact_arith::hankel_det::<Int>(dims)
}
