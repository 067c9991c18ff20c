//! Taylor coefficients of `x(t) = sqrt(-6 log(sin t / t))` on `[0, a]` and
//! of its inverse `t(x)`.
//!
//! Near `t = 0` neither the logarithm nor the square root can be expanded
//! directly, so `x` is assembled as
//!
//! ```text
//! x(t)  = t · sqrt(h(t))
//! h(t)  = g(F₂(t)) · (-6 F(t))
//! F₂(t) = t² F(t)
//! ```
//!
//! with `F` and `g` from [`crate::series_bounds`]. Away from zero the direct
//! formula is also evaluated and the two enclosures are intersected.
//!
//! Each subinterval is used as a thick expansion center, so every
//! coefficient enclosure holds for all centers in it and the hull over the
//! subdivision bounds the coefficient over the whole domain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::series_bounds::{log1p_over_t_coeff, sinc_tail_coeff, TruncationParams};
use crate::taylor::{TaylorSeries, MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Right end of the `t` domain.
    pub a: f64,
    /// Target subinterval width.
    pub subdiv_width: f64,
    /// Truncation index of the building-block series.
    pub truncation: u32,
    /// Highest Taylor order carried.
    pub order: usize,
    /// Direct evaluation is attempted only for subintervals starting at or beyond this.
    pub direct_threshold: f64,
    pub cross_check_direct: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            a: 1.1,
            subdiv_width: 0.001,
            truncation: 20,
            order: 7,
            direct_threshold: 0.1,
            cross_check_direct: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 1.0 && self.a < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "a = {} must lie in (1, π/2)",
                self.a
            )));
        }
        if !(self.subdiv_width > 0.0 && self.subdiv_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "subdivision width {} must be positive",
                self.subdiv_width
            )));
        }
        if self.order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(self.order));
        }
        if (self.truncation as usize) < self.order {
            return Err(Error::InvalidParameter(format!(
                "truncation {} must be at least the order {}",
                self.truncation, self.order
            )));
        }
        Ok(())
    }

    /// `[0, a]`, with `a` widened so the decimal value is covered.
    pub fn domain(&self) -> Interval {
        Interval::raw(0.0, Interval::around(self.a).hi())
    }

    pub fn subinterval_count(&self) -> usize {
        // 1.1 / 0.001 lands a hair above 1100 in binary
        let ratio = self.a / self.subdiv_width;
        ((ratio - 1e-9).ceil() as usize).max(1)
    }
}

/// Per-order hulls of coefficient enclosures, plus the per-subinterval rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub hulls: Vec<Interval>,
    pub rows: Vec<CoeffRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub center: Interval,
    pub coeffs: Vec<Interval>,
}

impl CoeffTable {
    fn from_rows(rows: Vec<CoeffRow>) -> Self {
        let hulls = rows
            .iter()
            .skip(1)
            .fold(rows[0].coeffs.clone(), |acc, r| {
                acc.iter().zip(&r.coeffs).map(|(a, b)| a.hull(b)).collect()
            });
        CoeffTable { hulls, rows }
    }

    pub fn order(&self) -> usize {
        self.hulls.len() - 1
    }
}

fn series_from(center: Interval, cfg: &PipelineConfig, coeff: impl Fn(Interval, TruncationParams) -> Result<Interval>) -> Result<TaylorSeries> {
    let coeffs = (0..=cfg.order as u32)
        .map(|m| coeff(center, TruncationParams::new(cfg.truncation, m)))
        .collect::<Result<Vec<_>>>()?;
    TaylorSeries::new(center, coeffs)
}

/// The subdivision-safe assembly `x = t · sqrt(g(t²F) · (-6F))`.
pub fn x_series_scheme(t0: Interval, cfg: &PipelineConfig) -> Result<TaylorSeries> {
    let f = series_from(t0, cfg, sinc_tail_coeff)?;
    let t = TaylorSeries::variable(t0, cfg.order)?;
    let t2 = t.mul(&t)?;
    let f2 = t2.mul(&f)?;
    // g is expanded about the whole enclosure of F₂(t0)
    let g = series_from(f2.coeff(0), cfg, log1p_over_t_coeff)?;
    let g_f2 = TaylorSeries::compose(&g, &f2)?;
    let h = g_f2.mul(&f.scale(Interval::point(-6.0)))?;
    t.mul(&h.sqrt()?)
}

/// `x = sqrt(-6 log(sin t / t))` composed from plain series kernels.
///
/// Fails (by design) close to `t = 0`, where `sin t / t` touches 1 and the
/// square root has no expansion.
pub fn x_series_direct(t0: Interval, cfg: &PipelineConfig) -> Result<TaylorSeries> {
    if t0.lo() < cfg.direct_threshold || t0.lo() <= 0.0 {
        return Err(Error::Domain {
            op: "direct x(t) expansion near zero",
            arg: t0,
        });
    }
    let sin = TaylorSeries::sin_of_variable(t0, cfg.order)?;
    let t = TaylorSeries::variable(t0, cfg.order)?;
    let sinc = sin.div(&t)?;
    sinc.ln()?.scale(Interval::point(-6.0)).sqrt()
}

/// Enclosure of `x(t)` itself.
pub fn x_at(t: Interval, cfg: &PipelineConfig) -> Result<Interval> {
    let dom = cfg.domain();
    if !t.is_subset(&dom) {
        return Err(Error::Domain {
            op: "x(t) outside [0, a]",
            arg: t,
        });
    }
    let value_only = PipelineConfig {
        order: 0,
        ..cfg.clone()
    };
    Ok(x_series_scheme(t, &value_only)?.coeff(0))
}

/// Everything computed for one subinterval.
#[derive(Debug, Clone)]
pub struct SubintervalResult {
    pub t0: Interval,
    pub x: TaylorSeries,
    pub t: TaylorSeries,
    pub direct_used: bool,
}

/// Processes one subinterval: scheme, optional direct cross-check, positivity
/// of `x'`, inversion, and the round-trip identity `t ∘ x = id`.
pub fn process_subinterval(t0: Interval, cfg: &PipelineConfig) -> Result<SubintervalResult> {
    let mut x = x_series_scheme(t0, cfg)?;
    let mut direct_used = false;
    if cfg.cross_check_direct && t0.lo() >= cfg.direct_threshold {
        if let Ok(direct) = x_series_direct(t0, cfg) {
            x = x.intersect(&direct)?;
            direct_used = true;
        }
    }
    if cfg.order >= 1 && !x.coeff(1).is_positive() {
        return Err(Error::VanishingDerivative {
            subinterval: t0,
            derivative: x.coeff(1),
        });
    }
    let t = x.invert(t0)?;
    check_round_trip(&x, &t, t0)?;
    Ok(SubintervalResult {
        t0,
        x,
        t,
        direct_used,
    })
}

/// `compose(t, x)` must enclose `(t0, 1, 0, …, 0)`.
pub fn check_round_trip(x: &TaylorSeries, t: &TaylorSeries, t0: Interval) -> Result<()> {
    let id = TaylorSeries::compose(t, x)?;
    for (k, c) in id.coeffs().iter().enumerate() {
        let ok = match k {
            0 => t0.is_subset(c),
            1 => c.contains(1.0),
            _ => c.contains(0.0),
        };
        if !ok {
            return Err(Error::RoundTrip {
                subinterval: t0,
                order: k,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: PipelineConfig,
    pub x_table: CoeffTable,
    pub t_table: CoeffTable,
    /// Enclosure of `K! · ⟨t⟩_K` over the whole domain.
    pub top_derivative: Interval,
    /// `R`: an upper bound on `|t⁽ᴷ⁾(x)|` for `x ∈ [0, x(a)]`.
    pub derivative_bound: f64,
    pub subintervals: usize,
    pub direct_cross_checks: usize,
    pub round_trips_checked: usize,
}

/// Runs the whole subdivision in parallel and reduces to hull tables.
pub fn sweep(cfg: &PipelineConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let pieces = cfg.domain().subdivide(cfg.subinterval_count());
    let results = pieces
        .par_iter()
        .map(|&t0| process_subinterval(t0, cfg))
        .collect::<Result<Vec<_>>>()?;

    let direct_cross_checks = results.iter().filter(|r| r.direct_used).count();
    let (x_rows, t_rows): (Vec<_>, Vec<_>) = results
        .into_iter()
        .map(|r| {
            (
                CoeffRow {
                    center: r.x.center(),
                    coeffs: r.x.coeffs().to_vec(),
                },
                CoeffRow {
                    center: r.t.center(),
                    coeffs: r.t.coeffs().to_vec(),
                },
            )
        })
        .unzip();
    let x_table = CoeffTable::from_rows(x_rows);
    let t_table = CoeffTable::from_rows(t_rows);

    let k = cfg.order;
    let fact = (1..=k as i64).fold(Interval::ONE, |acc, j| acc * Interval::from_integer(j));
    let top_derivative = t_table.hulls[k] * fact;
    let derivative_bound = top_derivative.mag();
    let n = pieces.len();
    Ok(SweepResult {
        config: cfg.clone(),
        x_table,
        t_table,
        top_derivative,
        derivative_bound,
        subintervals: n,
        direct_cross_checks,
        round_trips_checked: n,
    })
}
