//! Exact-arithmetic toolkit for Cayley-Bacharach configurations on projective
//! space.
//!
//! Everything here computes with exact field elements (arbitrary-precision
//! rationals or a prime field) so that every theorem check reduces to an
//! integer rank statement with zero tolerance.  The layers, bottom up:
//!
//! * [`scalar`], [`matrix`] - field elements and exact Gaussian elimination
//!   (rank, canonical kernel bases, canonical solutions).
//! * [`poly`] - sparse homogeneous forms, monomial bases in graded order,
//!   differentiation, composition with rational parametrizations.
//! * [`vanishing`] - linear conditions on forms (point vanishing, jets at a
//!   point, jets along a parametrized subvariety) compiled to matrices, and
//!   the dimension counts `h0` / `basis_h0` they induce.
//! * [`cb`] - complete-intersection scenarios, Cayley-Bacharach propagation,
//!   multiplier exponents for excess vanishing, the Tan-Viehweg cokernel
//!   inequality.
//! * [`detloci`] - matrices of forms, the rank-drop locus, the induced map to
//!   a smaller projective space, and the determinantal Cayley-Bacharach count.
//! * [`koszul`] - graded Koszul complexes of a section vector, the Skoda
//!   subcomplex cut out by multiplier jets, and their homology dimensions.
//! * [`scenario`] - seeded constructions of the standard configurations
//!   (line grids, a plane curve meeting a twisted cubic, the eleven-point
//!   determinantal arrangement).
//!
//! All types are immutable values and `Send + Sync`; callers may farm sweeps
//! out across threads freely.

pub mod cb;
pub mod detloci;
pub mod error;
pub mod koszul;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod scenario;
pub mod vanishing;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use poly::{Form, Monomial, Parametrization};
pub use scalar::{Field, Scalar};
