//! Exact arithmetic over Q and the cyclotomic fields Q(zeta_N), plus dense
//! linear algebra (products, powers, traces, kernels) over these fields.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads. Floating
//! point appears only in [`Cyclotomic::to_complex`], which exists for display
//! and sanity checks; no decision anywhere in the crate depends on a float.

mod cyclotomic;
mod matrix;
mod rational;

pub use cyclotomic::{euler_phi, phi_poly, Cyclotomic};
pub use matrix::CycMatrix;
pub use rational::{
    format_rational, parse_rational, rat, rat_int, rational_ceil, rational_floor, rational_frac,
    rational_to_i64, Rational,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid rational literal `{0}`: expected `p/q` or `p`")]
    BadRational(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
    #[error("cyclotomic order {have} does not divide target order {want}")]
    OrderMismatch { have: u32, want: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    Shape(String),
}
