//! Elementary functions on intervals.
//!
//! Library `exp`/`ln`/`sin` carry no accuracy guarantee, so each point
//! kernel reduces its argument and sums a Taylor series in interval
//! arithmetic, adding an explicit Lagrange remainder. Interval versions
//! then use monotonicity (exp, ln, sqrt) or extremum bookkeeping (sin, cos).

use std::f64::consts;

use super::{round_down, round_up, Interval};
use crate::error::{Error, Result};

const EXP_TERMS: u32 = 22;
const LOG_TERMS: u32 = 22;
const TRIG_TERMS: u32 = 14;

/// Largest argument whose exponential stays finite with room to spare.
const EXP_MAX_ARG: f64 = 700.0;
/// Beyond this, trigonometric reduction by an interval π is too coarse to be useful.
const TRIG_MAX_ARG: f64 = 1.0e6;

impl Interval {
    /// Enclosure of π.
    pub fn pi() -> Interval {
        Interval::around(consts::PI)
    }

    /// Enclosure of Euler's number.
    pub fn e() -> Interval {
        Interval::around(consts::E)
    }

    pub fn ln2() -> Interval {
        Interval::around(consts::LN_2)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain {
                op: "sqrt",
                arg: *self,
            });
        }
        let lo = round_down(self.lo.sqrt()).max(0.0);
        let hi = round_up(self.hi.sqrt());
        Ok(Interval::raw(lo, hi))
    }

    pub fn exp(&self) -> Result<Interval> {
        if self.hi > EXP_MAX_ARG {
            return Err(Error::Domain {
                op: "exp",
                arg: *self,
            });
        }
        let lo = exp_point(self.lo).lo.max(0.0);
        let hi = exp_point(self.hi).hi;
        Ok(Interval::raw(lo, hi))
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(Error::Domain {
                op: "ln",
                arg: *self,
            });
        }
        Ok(Interval::raw(ln_point(self.lo).lo, ln_point(self.hi).hi))
    }

    pub fn sin(&self) -> Result<Interval> {
        self.periodic(0)
    }

    pub fn cos(&self) -> Result<Interval> {
        self.periodic(1)
    }

    /// `sin(x + quarter_turns·π/2)`. Extrema sit at `π/2 + jπ` shifted accordingly.
    fn periodic(&self, quarter_turns: i64) -> Result<Interval> {
        if self.mag() > TRIG_MAX_ARG {
            return Err(Error::Domain {
                op: "sin/cos",
                arg: *self,
            });
        }
        if self.width() >= 2.0 * consts::PI {
            return Ok(Interval::raw(-1.0, 1.0));
        }
        let mut r = sin_point(self.lo, quarter_turns).hull(&sin_point(self.hi, quarter_turns));

        // sin(y) peaks at y = π/2 + jπ, i.e. x = (1 - q)π/2 + jπ with q the shift.
        let pi = Interval::pi();
        let half_pi = pi * 0.5;
        let offset = half_pi * (1 - quarter_turns) as f64;
        let j_lo = ((self.lo - offset.hi) / consts::PI).floor() as i64 - 1;
        let j_hi = ((self.hi - offset.lo) / consts::PI).ceil() as i64 + 1;
        for j in j_lo..=j_hi {
            let crit = offset + pi * j as f64;
            if crit.overlaps(self) {
                let peak = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                r = r.hull(&Interval::point(peak));
            }
        }
        Ok(Interval::raw(r.lo.max(-1.0), r.hi.min(1.0)))
    }
}

/// exp(x) = e^k · exp(r), k = round(x), |r| <= 1/2.
fn exp_point(x: f64) -> Interval {
    if x < -745.0 {
        return Interval::raw(0.0, f64::MIN_POSITIVE);
    }
    let k = x.round();
    let r = Interval::point(x) - Interval::point(k);
    // Horner for Σ_{j<=n} r^j / j!
    let mut acc = Interval::ONE;
    for j in (1..=EXP_TERMS).rev() {
        acc = Interval::ONE + (r * acc).div(Interval::point(j as f64)).expect("j > 0");
    }
    // |tail| <= |r|^{n+1} / (n+1)! · e^{|r|}, and e^{|r|} < 2 for |r| <= 0.5+
    let rm = r.mag();
    let tail = Interval::point(rm).pow_int(EXP_TERMS as i32 + 1).expect("positive power").hi
        * 2.0
        / factorial_f64(EXP_TERMS + 1);
    let tail = round_up(round_up(tail));
    let reduced = acc + Interval::symmetric(tail);
    let scale = Interval::e().pow_int(k as i32).expect("e is nonzero");
    scale * reduced
}

/// ln(x) = e·ln2 + 2·atanh(z), z = (m-1)/(m+1), m ∈ [1/√2, √2).
fn ln_point(x: f64) -> Interval {
    debug_assert!(x > 0.0);
    let (m, e) = frexp_balanced(x);
    let m = Interval::point(m);
    let z = (m - Interval::ONE)
        .div(m + Interval::ONE)
        .expect("m + 1 > 0");
    let z2 = z.square();
    // Σ_{j<=n} z^{2j}/(2j+1), by Horner in z².
    let mut acc = Interval::ONE.div(Interval::point((2 * LOG_TERMS + 1) as f64)).expect("nonzero");
    for j in (0..LOG_TERMS).rev() {
        let c = Interval::ONE.div(Interval::point((2 * j + 1) as f64)).expect("nonzero");
        acc = c + z2 * acc;
    }
    // tail Σ_{j>n} z^{2j}/(2j+1) <= z^{2n+2} / (1 - z²), |z| <= 0.1716
    let zm = z.mag();
    let tail = round_up(
        Interval::point(zm).pow_int(2 * LOG_TERMS as i32 + 2).expect("positive power").hi / 0.97,
    );
    let series = (acc + Interval::raw(0.0, tail)) * z * 2.0;
    Interval::ln2() * e as f64 + series
}

/// Splits `x > 0` into `m · 2^e` with `m ∈ [1/√2, √2)`; exact.
fn frexp_balanced(x: f64) -> (f64, i32) {
    let (x, bias) = if x < f64::MIN_POSITIVE {
        (x * 2f64.powi(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1023;
    let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52));
    if m > consts::SQRT_2 {
        (m * 0.5, exp + 1 + bias)
    } else {
        (m, exp + bias)
    }
}

/// sin(x + q·π/2) for a point x.
fn sin_point(x: f64, q: i64) -> Interval {
    let half_pi = Interval::pi() * 0.5;
    let k = (x / consts::FRAC_PI_2).round() as i64;
    let r = Interval::point(x) - half_pi * k as f64;
    match (k + q).rem_euclid(4) {
        0 => sin_kernel(r),
        1 => cos_kernel(r),
        2 => -sin_kernel(r),
        _ => -cos_kernel(r),
    }
}

// Both kernels expect |r| <= π/4 + a few ulps.
fn sin_kernel(r: Interval) -> Interval {
    let r2 = r.square();
    // sin r = r Σ (-1)^j r^{2j} / (2j+1)!
    let mut acc = Interval::ONE;
    for j in (1..=TRIG_TERMS).rev() {
        let d = Interval::point(((2 * j) * (2 * j + 1)) as f64);
        acc = Interval::ONE - (r2 * acc).div(d).expect("nonzero");
    }
    let n = 2 * TRIG_TERMS + 3;
    let tail = round_up(Interval::point(r.mag()).pow_int(n as i32).expect("power").hi / factorial_f64(n));
    r * acc + Interval::symmetric(round_up(tail))
}

fn cos_kernel(r: Interval) -> Interval {
    let r2 = r.square();
    let mut acc = Interval::ONE;
    for j in (1..=TRIG_TERMS).rev() {
        let d = Interval::point(((2 * j - 1) * (2 * j)) as f64);
        acc = Interval::ONE - (r2 * acc).div(d).expect("nonzero");
    }
    let n = 2 * TRIG_TERMS + 2;
    let tail = round_up(Interval::point(r.mag()).pow_int(n as i32).expect("power").hi / factorial_f64(n));
    acc + Interval::symmetric(round_up(tail))
}

/// A lower bound on n! (used only as a divisor of upper bounds).
fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| round_down(acc * k as f64))
}
