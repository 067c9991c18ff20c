//! Interval quadrature of `I(n) = (2√n/π) ∫₀^∞ (sin t / t)ⁿ dt`.
//!
//! Each panel contributes `width × (range of the integrand on the panel)`,
//! which is sound because the interval evaluation of the integrand over the
//! panel contains its range. The piece beyond `a` is bounded by
//! `e₁(n) = 2a^{-n}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certifier::GapBoundParams;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::series_bounds::{sinc_coeff, TruncationParams, DEFAULT_TRUNCATION};

/// Panels starting below this use the series enclosure of `sin t / t`.
const SERIES_CUTOFF: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub a: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panels: 10_000,
            a: 1.1,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.panels == 0 {
            return Err(Error::InvalidParameter("at least one panel is required".into()));
        }
        if !(self.a > 1.0 && self.a < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!("a = {} must lie in (1, π/2)", self.a)));
        }
        Ok(())
    }
}

fn sinc_enclosure(t: Interval) -> Result<Interval> {
    if t.lo() < SERIES_CUTOFF {
        sinc_coeff(t, TruncationParams::new(DEFAULT_TRUNCATION, 0))
    } else {
        t.sin()?.div(t)
    }
}

/// Enclosure of the range of `(sin t / t)ⁿ` over `t`, for `t >= 0`.
///
/// On `[0, π/2]` the integrand is positive and decreasing, so the range is
/// spanned by the values at the two endpoints.
pub fn integrand_enclosure(t: Interval, n: u32) -> Result<Interval> {
    if t.lo() >= 0.0 && t.hi() <= 1.5 {
        let at_hi = sinc_enclosure(Interval::point(t.hi()))?.pow_int(n as i32)?;
        let at_lo = sinc_enclosure(Interval::point(t.lo()))?.pow_int(n as i32)?;
        return Ok(at_hi.hull(&at_lo));
    }
    sinc_enclosure(t)?.pow_int(n as i32)
}

/// `(2√n/π) ∫₀^a (sin t / t)ⁿ dt`.
pub fn enclose_ia(n: u32, cfg: &QuadratureConfig) -> Result<Interval> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    cfg.validate()?;
    let domain = Interval::new(0.0, cfg.a)?;
    let pieces = domain
        .subdivide(cfg.panels)
        .par_iter()
        .map(|&p| {
            let width = Interval::point(p.hi()) - Interval::point(p.lo());
            Ok(integrand_enclosure(p, n)? * width)
        })
        .collect::<Result<Vec<_>>>()?;
    // sequential sum keeps the result independent of the thread count
    let integral: Interval = pieces.into_iter().sum();
    let prefactor = (Interval::from_integer(n as i64).sqrt()? * 2.0).div(Interval::pi())?;
    Ok(prefactor * integral)
}

/// `I(n)`: the quadrature over `[0, a]` widened by `±e₁(n)`.
pub fn enclose_i(n: u32, cfg: &QuadratureConfig) -> Result<Interval> {
    let head = enclose_ia(n, cfg)?;
    let params = GapBoundParams::new(0.0)?;
    let tail = Interval::symmetric(params.e1(n).hi());
    Ok(head + tail)
}
