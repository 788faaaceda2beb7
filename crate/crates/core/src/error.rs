use thiserror::Error;

use crate::algebra::Element;
use crate::ideal::EnvelopeFailure;
use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different algebras")]
    MixedBackend,
    #[error("mask {mask:#x} is out of range for an algebra with {atoms} atoms")]
    MaskOutOfRange { mask: u32, atoms: u8 },
    #[error("operation requires the {0} backend")]
    Unsupported(&'static str),
    #[error("step budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("submeasure is not strictly positive: m({0}) = 0")]
    NotStrictlyPositive(Element),
    #[error("elements at indices {first} and {second} of the stream are not disjoint")]
    NotDisjoint { first: usize, second: usize },
    #[error("term {} has value {} above its envelope bound {}", .0.index, .0.value, .0.bound)]
    EnvelopeViolation(Box<EnvelopeFailure>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn envelope(index: usize, value: Rational, bound: Rational) -> Self {
        Error::EnvelopeViolation(Box::new(EnvelopeFailure {
            index,
            value,
            bound,
        }))
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
