//! Closed floating-point intervals with outward rounding.
//!
//! Every arithmetic result is computed in round-to-nearest and then widened
//! by one ulp in each direction with `next_down`/`next_up`. IEEE 754 makes
//! `+ - * /` and `sqrt` correctly rounded, so the nudged result always
//! contains the exact real image. This is the only rounding policy in the
//! crate.

mod elementary;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn round_down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub(crate) fn round_up(x: f64) -> f64 {
    x.next_up()
}

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Caller guarantees `lo <= hi`; used internally where it holds by construction.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "raw interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval from non-finite value");
        Interval { lo: x, hi: x }
    }

    /// One-ulp neighbourhood of `x`.
    ///
    /// Contains any real whose round-to-nearest image is `x`, so this is the
    /// right constructor for decimal literals like `1.1` and for the
    /// correctly rounded constants in `std::f64::consts`.
    pub fn around(x: f64) -> Self {
        Interval::raw(round_down(x), round_up(x))
    }

    /// Exact conversion when `|n| <= 2^53`, otherwise a two-float enclosure.
    pub fn from_integer(n: i64) -> Self {
        if n.unsigned_abs() <= (1u64 << 53) {
            Interval::point(n as f64)
        } else {
            Interval::from_bigint(&BigInt::from(n))
        }
    }

    pub fn from_u128(n: u128) -> Self {
        if n <= (1u128 << 53) {
            Interval::point(n as f64)
        } else {
            Interval::from_bigint(&BigInt::from(n))
        }
    }

    /// Encloses an arbitrary-precision integer.
    ///
    /// Keeps the top 53 bits `q` of `|n|` so that `|n| ∈ [q·2^s, (q+1)·2^s]`,
    /// both endpoints exactly representable.
    pub fn from_bigint(n: &BigInt) -> Self {
        let bits = n.bits();
        let mag = n.abs();
        let (lo, hi) = if bits <= 53 {
            let v = mag.to_u64().expect("fits in 53 bits") as f64;
            (v, v)
        } else {
            let shift = bits - 53;
            let q: BigInt = &mag >> shift;
            let exact = (&q << shift) == mag;
            let q = q.to_u64().expect("53-bit quotient") as f64;
            let scale = 2f64.powi(shift as i32);
            let lo = q * scale;
            let hi = if exact { lo } else { (q + 1.0) * scale };
            assert!(hi.is_finite(), "integer too large for a finite interval");
            (lo, hi)
        };
        match n.sign() {
            Sign::Minus => Interval::raw(-hi, -lo),
            _ => Interval::raw(lo, hi),
        }
    }

    /// Encloses `num / den`; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero {
                divisor: Interval::ZERO,
            });
        }
        if num.bits() <= 1000 && den.bits() <= 1000 {
            return Interval::from_bigint(num).div(Interval::from_bigint(den));
        }
        // |num/den| ∈ [q, q+1]·2^{-k} with q holding about 64 bits
        let k = 64 + den.bits() as i64 - num.bits() as i64;
        let (n, d) = (num.abs(), den.abs());
        let (q, r) = if k >= 0 {
            let shifted = &n << (k as u64);
            (&shifted / &d, &shifted % &d)
        } else {
            let shifted = &d << ((-k) as u64);
            (&n / &shifted, &n % &shifted)
        };
        let scale = 2f64.powi(-k as i32);
        if !(scale.is_finite() && scale > 0.0 && k.abs() < 1000) {
            return Err(Error::InvalidParameter("ratio outside the f64 range".into()));
        }
        let q_lo = Interval::from_bigint(&q);
        let q_iv = if r.is_zero() {
            q_lo
        } else {
            q_lo.hull(&Interval::from_bigint(&(&q + 1)))
        };
        let mag = q_iv * Interval::point(scale);
        let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        Ok(if negative { -mag } else { mag })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        round_up(self.hi - self.lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Interval {
        Interval::raw(self.mig(), self.mag())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    /// Certainly less than: every element of `self` is below every element of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection of two enclosures of the same quantity.
    ///
    /// Disjoint operands mean one of them is wrong; that is reported, never repaired.
    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            return Err(Error::EmptyIntersection {
                a: *self,
                b: *other,
            });
        }
        Ok(Interval::raw(lo, hi))
    }

    /// Splits into `n` consecutive pieces that share endpoints and cover `self`.
    pub fn subdivide(&self, n: usize) -> Vec<Interval> {
        assert!(n > 0, "subdivide into zero pieces");
        let span = self.hi - self.lo;
        let breaks: Vec<f64> = (0..=n)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i == n {
                    self.hi
                } else {
                    (self.lo + span * (i as f64 / n as f64)).min(self.hi)
                }
            })
            .collect();
        breaks
            .windows(2)
            .map(|w| Interval::raw(w[0], w[1].max(w[0])))
            .collect()
    }

    /// `[-r, r]`
    pub fn symmetric(radius: f64) -> Interval {
        let r = radius.abs();
        Interval::raw(-r, r)
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.div(*self)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero { divisor: rhs });
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Ok(Interval::from_candidates(&q))
    }

    pub fn square(&self) -> Interval {
        self.pow_int(2).expect("nonnegative power is total")
    }

    /// Integer power with exact handling of even powers of sign-straddling intervals.
    pub fn pow_int(&self, k: i32) -> Result<Interval> {
        if k < 0 {
            return self.recip()?.pow_int(-k);
        }
        let k = k as u32;
        if k == 0 {
            return Ok(Interval::ONE);
        }
        if k == 1 {
            return Ok(*self);
        }
        let odd = k % 2 == 1;
        let res = if self.lo >= 0.0 {
            Interval::raw(pow_mag_down(self.lo, k), pow_mag_up(self.hi, k))
        } else if self.hi <= 0.0 {
            let (a, b) = (pow_mag_down(-self.hi, k), pow_mag_up(-self.lo, k));
            if odd {
                Interval::raw(-b, -a)
            } else {
                Interval::raw(a, b)
            }
        } else if odd {
            Interval::raw(-pow_mag_up(-self.lo, k), pow_mag_up(self.hi, k))
        } else {
            Interval::raw(0.0, pow_mag_up(self.mag(), k))
        };
        Ok(res)
    }

    fn from_candidates(c: &[f64]) -> Interval {
        let (lo, hi) = c
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Interval::raw(round_down(lo), round_up(hi))
    }
}

// |x|^k rounded down/up, x >= 0. Square-and-multiply keeps every partial
// product nonnegative so directed rounding composes monotonically.
fn pow_mag_down(x: f64, k: u32) -> f64 {
    pow_directed(x, k, round_down).max(0.0)
}

fn pow_mag_up(x: f64, k: u32) -> f64 {
    pow_directed(x, k, round_up)
}

fn pow_directed(x: f64, mut k: u32, round: fn(f64) -> f64) -> f64 {
    debug_assert!(x >= 0.0);
    let mut base = x;
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc = round(acc * base);
        }
        k >>= 1;
        if k > 0 {
            base = round(base * base);
        }
    }
    acc
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(round_down(self.lo + rhs.lo), round_up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(round_down(self.lo - rhs.hi), round_up(self.hi - rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval::from_candidates(&p)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}
