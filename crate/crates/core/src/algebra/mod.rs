mod cpoly;
mod kelement;
mod motion;
mod scalar;

pub use cpoly::CPoly;
pub use kelement::{KElement, Point};
pub use motion::{MotionPolynomial, Param};
pub use scalar::{c, ceq, cf, ci, cis_real, cis_zero, eps, Backend, Scalar, C, Q};
