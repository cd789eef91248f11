//! Stability polynomials for explicit ODE integrators.
//!
//! Constructs the optimal stability polynomials for the three classical
//! spectral shapes (complex disc, negative real axis, imaginary axis),
//! measures stability regions of arbitrary explicit Runge-Kutta methods,
//! numerically verifies the Bernstein and Markov Brothers inequalities
//! those optima saturate, and runs the induced stabilized integrators on
//! linear method-of-lines test systems.

mod dd;

pub mod integrate;
pub mod optimal;
pub mod poly;
pub mod stability;
pub mod verify;

pub use poly::RealPolynomial;
pub use stability::{Axis, ButcherTableau, RegionGrid, StabilityReport};

/// Library error type. Every fallible operation reports one of these.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("m must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("root divisor must be positive, got {0}")]
    NonpositiveRoot(f64),
    #[error("substep divisors are inconsistent: sum of 1/xi is {0}, expected 1")]
    InconsistentSchedule(f64),
    #[error("tableau is not explicit: A must be strictly lower triangular")]
    NotExplicit,
    #[error("invalid tableau: {0}")]
    BadTableau(String),
    #[error("degenerate region box")]
    DegenerateBox,
    #[error("region grid too large: {0} cells")]
    GridTooLarge(usize),
    #[error("ratio undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not consistent: P(0)=P'(0)=1 required")]
    NotConsistent,
    #[error("oracle grid is empty")]
    EmptyGrid,
    #[error("oracle degree must be 2 or 3, got {0}")]
    UnsupportedOracleDegree(usize),
    #[error("initial state has zero norm")]
    ZeroInitialState,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid polynomial data: {0}")]
    BadPolynomial(String),
    #[error("invalid permutation")]
    BadPermutation,
}

pub type Result<T> = std::result::Result<T, Error>;
