use std::fmt;

use crate::numeric::Rational;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("no inverse: {0} is zero modulo {1}")]
    NoInverse(u64, u64),

    #[error("invalid scheme: {0}")]
    InvalidSpec(String),

    #[error("degenerate generator: coordinate {index} is zero modulo {modulus}")]
    DegenerateGenerator { index: usize, modulus: u64 },

    #[error("enumeration too large: {required} elementary terms exceed the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(Box<Witness>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A pair of cells whose torus distance is too small for a fixed-distance argument.
#[derive(Debug, Clone)]
pub struct Witness {
    pub coordinate: usize,
    pub cells: (u64, u64),
    pub distance: Rational,
    pub epsilon: Rational,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coordinate {} cells ({}, {}) at torus distance {} <= epsilon {}",
            self.coordinate, self.cells.0, self.cells.1, self.distance, self.epsilon
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
