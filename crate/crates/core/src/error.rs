use thiserror::Error;

use crate::interval::Interval;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval endpoints [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("division by an interval containing zero: {divisor}")]
    DivisionByZero { divisor: Interval },

    #[error("{op} is undefined on {arg}")]
    Domain { op: &'static str, arg: Interval },

    /// Two enclosures of the same quantity are disjoint. Always a soundness bug.
    #[error("soundness alarm: empty intersection of {a} and {b}")]
    EmptyIntersection { a: Interval, b: Interval },

    #[error("series centers are incompatible: {left} vs {right}")]
    CenterMismatch { left: Interval, right: Interval },

    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series order {0} exceeds the supported maximum")]
    UnsupportedOrder(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("derivative enclosure {derivative} contains zero on subinterval {subinterval}")]
    VanishingDerivative {
        subinterval: Interval,
        derivative: Interval,
    },

    #[error("round-trip identity violated on subinterval {subinterval} at order {order}")]
    RoundTrip { subinterval: Interval, order: usize },

    #[error("gap bound is not positive at n = {n_tail}; increase the tail start or tighten R")]
    NoCrossover { n_tail: u32 },

    #[error("exact volume is not positive at n = {0}")]
    NonPositiveVolume(u32),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
