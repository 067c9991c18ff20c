//! Rigorous Taylor coefficients of the three building blocks of `x(t)`:
//!
//! * `f(t) = sin t / t` (value 1 at 0),
//! * `F(t) = (f(t) - 1) / t²`, so that `f = 1 + t² F`,
//! * `g(u) = log(1 + u) / u` (value 1 at 0).
//!
//! Each coefficient `h⁽ᵐ⁾(t)/m!` is enclosed as a finite alternating sum
//! `S(t; N, m)` evaluated in interval arithmetic plus a symmetric remainder
//! enclosure `E(t; N, m)`. Rational constants (factorials up to `(2N+3)!`,
//! binomials) are formed as exact big integers and rounded outward once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_TRUNCATION: u32 = 20;

/// Truncation index `N` and coefficient order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationParams {
    pub n: u32,
    pub m: u32,
}

impl TruncationParams {
    pub fn new(n: u32, m: u32) -> Self {
        TruncationParams { n, m }
    }

    // f and F: the sum starts at k = ceil(m/2) and needs N >= m/2.
    fn check_sinc(&self) -> Result<()> {
        if 2 * self.n < self.m {
            return Err(Error::InvalidParameter(format!(
                "truncation N = {} must satisfy 2N >= m = {}",
                self.n, self.m
            )));
        }
        Ok(())
    }

    fn check_log(&self) -> Result<()> {
        if self.n < self.m {
            return Err(Error::InvalidParameter(format!(
                "truncation N = {} must satisfy N >= m = {}",
                self.n, self.m
            )));
        }
        Ok(())
    }
}

const FACTORIAL_TABLE: usize = 128;

fn factorial(n: u32) -> &'static BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(FACTORIAL_TABLE);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for k in 1..FACTORIAL_TABLE as u32 {
            acc *= k;
            v.push(acc.clone());
        }
        v
    });
    &table[n as usize]
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn signed_reciprocal(negative: bool, den: &BigInt) -> Interval {
    let r = Interval::ONE
        .div(Interval::from_bigint(den))
        .expect("positive denominator");
    if negative {
        -r
    } else {
        r
    }
}

fn check_nonnegative(t: Interval) -> Result<()> {
    if t.lo() < 0.0 {
        return Err(Error::Domain {
            op: "sinc coefficient (needs t >= 0)",
            arg: t,
        });
    }
    Ok(())
}

/// `E_f(t; N, m) = (1/m!) · e^t · t^{2N+2-m} / (2N+2-m)! · [-1, 1]`, at `t.hi`.
pub fn sinc_remainder(t: Interval, p: TruncationParams) -> Result<Interval> {
    p.check_sinc()?;
    check_nonnegative(t)?;
    let power = 2 * p.n + 2 - p.m;
    let top = Interval::point(t.hi());
    let num = top.exp()? * top.pow_int(power as i32)?;
    let den = Interval::from_bigint(&(factorial(p.m) * factorial(power)));
    Ok(Interval::symmetric(num.div(den)?.hi()))
}

/// Encloses `f⁽ᵐ⁾(t)/m!` for `f(t) = sin t / t` and `t >= 0`.
pub fn sinc_coeff(t: Interval, p: TruncationParams) -> Result<Interval> {
    p.check_sinc()?;
    check_nonnegative(t)?;
    let m = p.m;
    let mut sum = Interval::ZERO;
    for k in m.div_ceil(2)..=p.n {
        let e = 2 * k - m;
        let den = factorial(m) * factorial(e) * BigInt::from(2 * k + 1);
        let c = signed_reciprocal(k % 2 == 1, &den);
        sum = sum + c * t.pow_int(e as i32)?;
    }
    Ok(sum + sinc_remainder(t, p)?)
}

/// Encloses `F⁽ᵐ⁾(t)/m!` for `F(t) = (sin t / t - 1) / t²` and `t >= 0`.
///
/// The remainder is the same `E_f`: the extra factor `1/((2k+2)(2k+3))` only shrinks the tail.
pub fn sinc_tail_coeff(t: Interval, p: TruncationParams) -> Result<Interval> {
    p.check_sinc()?;
    check_nonnegative(t)?;
    let m = p.m;
    let mut sum = Interval::ZERO;
    for k in m.div_ceil(2)..=p.n {
        let e = 2 * k - m;
        let den = factorial(m)
            * factorial(e)
            * BigInt::from((2 * k + 1) * (2 * k + 2) * (2 * k + 3));
        // sign (-1)^{k+1}
        let c = signed_reciprocal(k % 2 == 0, &den);
        sum = sum + c * t.pow_int(e as i32)?;
    }
    Ok(sum + sinc_remainder(t, p)?)
}

/// Bound on `|E_g(t; N, m)|` for `|t| <= tm < 1`.
fn log_remainder_mag(tm: Interval, p: TruncationParams) -> Result<f64> {
    let n = p.n as i32;
    let m = p.m as i32;
    let one_minus = Interval::ONE - tm;
    let v = if p.m == 0 {
        tm.pow_int(n + 1)?.div(one_minus.pow_int(n + 2)?)?
    } else {
        let two_e_over_m = (Interval::e() * 2.0).div(Interval::from_integer(m as i64))?;
        two_e_over_m.pow_int(m)?
            * Interval::from_bigint(factorial(p.m))
            * Interval::from_bigint(&binomial(p.m + p.n + 1, p.m))
            * tm.pow_int(n + 1)?.div(one_minus.pow_int(m + n + 2)?)?
    };
    Ok(v.hi())
}

/// `E_g(t; N, m)` as a symmetric interval.
pub fn log1p_over_t_remainder(t: Interval, p: TruncationParams) -> Result<Interval> {
    p.check_log()?;
    if t.mag() >= 1.0 {
        return Err(Error::Domain {
            op: "log(1+u)/u coefficient (needs |u| < 1)",
            arg: t,
        });
    }
    let tm = Interval::point(t.mag());
    Ok(Interval::symmetric(log_remainder_mag(tm, p)?))
}

/// Encloses `g⁽ᵐ⁾(t)/m!` for `g(u) = log(1 + u) / u` and `|t| < 1`.
///
/// `S_g = (-1)^m Σ_{k=0}^{N} (-1)^k C(k+m, m) t^k / (k+m+1)`.
pub fn log1p_over_t_coeff(t: Interval, p: TruncationParams) -> Result<Interval> {
    let rem = log1p_over_t_remainder(t, p)?;
    let m = p.m;
    let mut sum = Interval::ZERO;
    for k in 0..=p.n {
        let num = binomial(k + m, m);
        let c = Interval::from_ratio(&num, &BigInt::from(k + m + 1))?;
        let c = if (k + m) % 2 == 1 { -c } else { c };
        sum = sum + c * t.pow_int(k as i32)?;
    }
    Ok(sum + rem)
}

/// Upper bounds of `|E_f|` and `|E_g|` at `t_max`; `E_g` is infinite for `|t_max| >= 1`.
pub fn remainder_widths(p: TruncationParams, t_max: f64) -> Result<(f64, f64)> {
    let t = Interval::point(t_max.abs());
    let ef = sinc_remainder(t, p)?.hi();
    let eg = if t_max.abs() >= 1.0 {
        f64::INFINITY
    } else {
        log1p_over_t_remainder(t, p)?.hi()
    };
    Ok((ef, eg))
}

/// One sample of the remainder-bound curves.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderSample {
    pub n: u32,
    pub m: u32,
    pub t: f64,
    pub e_f: f64,
    pub e_g: f64,
}

/// Remainder bounds on a uniform grid of `steps + 1` points in `[0, t_max]`.
pub fn remainder_curves(
    truncations: &[u32],
    orders: &[u32],
    t_max: f64,
    steps: usize,
) -> Result<Vec<RemainderSample>> {
    let mut out = Vec::new();
    for &n in truncations {
        for &m in orders {
            let p = TruncationParams::new(n, m);
            if p.check_sinc().is_err() || p.check_log().is_err() {
                continue;
            }
            for i in 0..=steps {
                let t = t_max * i as f64 / steps as f64;
                let (e_f, e_g) = remainder_widths(p, t)?;
                out.push(RemainderSample { n, m, t, e_f, e_g });
            }
        }
    }
    Ok(out)
}
