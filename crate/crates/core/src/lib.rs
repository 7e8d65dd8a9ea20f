//! Numerical L_p affine surface area of convex bodies.
//!
//! The crate evaluates the L_p affine surface area `Ω_p(K)` through four
//! equal representations (a boundary integral, a sphere integral, and two
//! variational infima) and checks the identities, inequalities and
//! invariances relating them:
//!
//! * [`body`], [`polytope`]: support functions, Gauss and inverse Gauss maps,
//!   affine images.
//! * [`quadrature`]: deterministic sphere and boundary quadrature.
//! * [`curvature`]: curvature function `F_K` and Gauss curvature `H_K`.
//! * [`measures`]: `C_0`, `C_{n-1}`, `S_K`, volume and polar volume.
//! * [`asa`]: the four representations, `L_1`/`L_2` and minimising sequences.
//! * [`coarea`]: rolling-ball and enclosing-ball sets and the sphere ↔
//!   boundary changes of variable.
//! * [`verify`]: homogeneity, covariance, inequalities and the
//!   semicontinuity demonstration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asa;
pub mod body;
pub mod coarea;
pub mod curvature;
pub mod descent;
pub mod error;
pub mod measures;
pub mod numeric;
pub mod polytope;
pub mod quadrature;
pub mod report;
pub mod spec;
pub mod verify;

pub use body::{ConvexBody, Direction};
pub use error::{AsaError, Result};
pub use quadrature::Quadrature;
