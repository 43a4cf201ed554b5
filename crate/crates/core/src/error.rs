use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element has zero primal part")]
    ZeroPrimal,
    #[error("primal part is real, the rotation has no finite center")]
    RealPrimal,
    #[error("polynomial does not split over the Gaussian rationals")]
    NotExactlySplit,
    #[error("root finder did not converge")]
    NonConvergence,
    #[error("right-hand side is not in the span of the Q polynomials")]
    Inconsistent,
    #[error("motion polynomial is not bounded: {0}")]
    NotBounded(String),
    #[error("primal and secondary part share a nonconstant real factor")]
    RealCommonFactor,
    #[error("polynomial has a real root")]
    RealRoot,
    #[error("degenerate flip: pp(k1) is the conjugate of pp(k2)")]
    DegenerateFlip,
    #[error("linkage is not a ladder")]
    NotLadder,
    #[error("auxiliary factor violates iterated flip mobility at square {0}")]
    IfmViolation(usize),
    #[error("document backend is {found}, expected {expected}")]
    BackendMismatch { expected: String, found: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
