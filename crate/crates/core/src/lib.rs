//! Computer-assisted proof that the volume of the central section of the
//! unit cube orthogonal to its main diagonal increases with the dimension
//! for every `n >= 3`.
//!
//! The argument has three independent parts:
//!
//! * [`pipeline`] encloses the Taylor coefficients of the change of variables
//!   `x(t) = sqrt(-6 log(sin t / t))` and of its inverse `t(x)` on `[0, 1.1]`,
//!   producing a rigorous bound `R` on `|t⁽⁷⁾|`.
//! * [`certifier`] turns `R` into a Laplace-method lower bound on
//!   `I(n+1) - I(n)` and certifies positivity for all `n >= n₀`.
//! * [`exact_volume`] checks `3 <= n <= n₀` with exact rational arithmetic
//!   on the closed-form alternating sum.
//!
//! [`quadrature`] is an independent interval quadrature used to cross-check
//! the exact volumes.

pub mod certifier;
pub mod cli;
pub mod error;
pub mod exact_volume;
pub mod interval;
pub mod pipeline;
pub mod quadrature;
pub mod series_bounds;
pub mod taylor;

pub use error::{Error, Result};
pub use interval::Interval;
pub use taylor::TaylorSeries;
