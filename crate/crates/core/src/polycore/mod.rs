//! Exact coefficients, monomials, monomial orders and sparse polynomials.

mod coeff;
mod monomial;
mod parse;
mod poly;

pub use coeff::{Coefficient, Field, DEFAULT_PRIME};
pub use monomial::{compare_monomials, Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use poly::{poly_arith, ArithOp, Polynomial, Ring};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("coefficient not in field: {0}")]
    NotInField(String),
    #[error("invalid field: {0}")]
    BadField(String),
    #[error("invalid variable name: {0}")]
    BadVariable(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}
