//! Planar motion polynomials over the algebra 𝕂 = ℂ[η]/(η², iη + ηi), their
//! factorization into linear revolute factors, and the synthesis of linkages
//! that draw rational plane curves.
//!
//! Everything numeric is generic over [`Scalar`]: [`Q`] (big rationals) gives
//! bit-exact results on Gaussian-rational input, `f64` handles arbitrary
//! curves with one global tolerance (see [`eps`]).

pub mod algebra;
pub mod collision;
mod error;
pub mod factor;
pub mod flip;
pub mod io;
pub mod linkage;
pub mod roots;

pub use algebra::{eps, Backend, CPoly, KElement, MotionPolynomial, Param, Point, Scalar, C, Q};
pub use error::{Error, Result};
