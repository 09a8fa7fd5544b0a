//! Exact arithmetic over small finite fields and dense matrices on top of it.

mod field;
mod matrix;
pub mod text;

pub use field::{field_arith, prime_power, FieldElem, FieldOp, FieldSpec, MAX_ORDER};
pub use matrix::{ColumnSpan, Matrix};
pub use text::{parse_matrix, render_matrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {0} exceeds the supported maximum of 256")]
    FieldTooLarge(usize),
    #[error("no built-in reduction polynomial for q = {0}")]
    NoDefaultPolynomial(usize),
    #[error("invalid reduction polynomial: {0}")]
    BadPolynomial(String),
    #[error("value {value} is not an element of a field of order {order}")]
    NotInField { value: u32, order: usize },
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("binary operation is missing its second operand")]
    MissingOperand,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
