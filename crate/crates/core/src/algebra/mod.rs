//! Exact arithmetic: rationals, elements of quadratic fields, Kronecker
//! symbols, and truncated q-series over both.

pub mod kronecker;
pub mod quad;
pub mod rational;
pub mod series;

pub use kronecker::kronecker;
pub use quad::{quad_arith, QuadNum, QuadOp};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use series::QSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible quadratic fields Q(sqrt({left})) and Q(sqrt({right}))")]
    IncompatibleField { left: i64, right: i64 },
    #[error("series has no nonzero coefficient")]
    ZeroLeadingCoefficient,
    #[error("{0}")]
    Precondition(String),
}
