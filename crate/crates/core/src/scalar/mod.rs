//! Exact scalars: rationals, polynomials and reduced rational functions in
//! named parameters.

pub mod expr;
pub mod gcd;
pub mod poly;
pub mod ratfunc;

use std::collections::BTreeMap;

pub use gcd::gcd;
pub use poly::Polynomial;
pub use ratfunc::Scalar;

pub type Rational = num_rational::BigRational;

/// Parameter values keyed by name.
pub type Assignment = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at this assignment")]
    SingularAssignment,
    #[error("variable {0} has no value")]
    UnassignedVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parses `p`, `-p`, `p/q` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let e = expr::eval_scalar(&expr::parse_expr(s)?)?;
    e.as_rational()
        .ok_or_else(|| ScalarError::Parse(format!("\"{s}\" is not a rational number")))
}

pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarError> {
    expr::eval_scalar(&expr::parse_expr(s)?)
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
