//! Independent high-precision oracles shared by the integration tests.
//!
//! Nothing here reuses crate internals except the `Interval` accessors used
//! to compare against.

#![allow(dead_code)]

pub mod suites;

use std::sync::OnceLock;

use cubeslice::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point oracle.
pub const BITS: u32 = 320;

/// A real number `v / 2^BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(pub BigInt);

fn one_raw() -> BigInt {
    BigInt::one() << BITS
}

impl Fx {
    pub fn one() -> Fx {
        Fx(one_raw())
    }

    pub fn from_int(n: i64) -> Fx {
        Fx(BigInt::from(n) << BITS)
    }

    /// Exact for every `f64` whose exponent is above `-BITS`.
    pub fn from_f64(x: f64) -> Fx {
        let r = BigRational::from_float(x).expect("finite");
        Fx::from_ratio(&r)
    }

    pub fn from_ratio(r: &BigRational) -> Fx {
        Fx((r.numer() << BITS) / r.denom())
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fx {
        Fx(-&self.0)
    }

    // truncating, so that series terms of either sign shrink to zero
    pub fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) / one_raw())
    }

    pub fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << BITS) / &o.0)
    }

    pub fn div_int(&self, n: i64) -> Fx {
        Fx(&self.0 / BigInt::from(n))
    }

    pub fn mul_int(&self, n: i64) -> Fx {
        Fx(&self.0 * n)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.0.clone(), one_raw())
            .to_f64()
            .expect("representable")
    }

    pub fn sqrt(&self) -> Fx {
        assert!(!self.is_negative());
        Fx((&self.0 << BITS).sqrt())
    }

    pub fn powi(&self, k: u32) -> Fx {
        (0..k).fold(Fx::one(), |acc, _| acc.mul(self))
    }
}

/// Error allowance of the oracle: `2^-(BITS-64)` times `max(1, |v|)`.
pub fn slack(v: &Fx) -> Fx {
    let base = Fx(BigInt::one() << 64);
    if v.abs() > Fx::one() {
        Fx((&v.0.abs() >> (BITS - 64)) + &base.0)
    } else {
        base
    }
}

/// Whether `iv` contains the oracle value `v`, up to the oracle's own slack.
pub fn encloses(iv: Interval, v: &Fx) -> bool {
    let s = slack(v);
    floor_fx(iv.lo()) <= v.add(&s) && v.sub(&s) <= ceil_fx(iv.hi())
}

fn ceil_fx(x: f64) -> Fx {
    let r = BigRational::from_float(x).expect("finite");
    let scaled = r * BigRational::from_integer(one_raw());
    Fx(scaled.ceil().to_integer())
}

fn floor_fx(x: f64) -> Fx {
    let r = BigRational::from_float(x).expect("finite");
    let scaled = r * BigRational::from_integer(one_raw());
    Fx(scaled.floor().to_integer())
}

/// `atanh(z)` for `|z| <= 1/2`.
fn atanh(z: &Fx) -> Fx {
    let z2 = z.mul(z);
    let mut term = z.clone();
    let mut sum = Fx(BigInt::zero());
    let mut k = 0i64;
    while term.0.bits() > 0 {
        sum = sum.add(&term.div_int(2 * k + 1));
        term = term.mul(&z2);
        k += 1;
    }
    sum
}

/// `atan(1/n)` for integer `n >= 2`.
fn atan_inv(n: i64) -> Fx {
    let x = Fx::one().div_int(n);
    let x2 = x.mul(&x);
    let mut term = x;
    let mut sum = Fx(BigInt::zero());
    let mut k = 0i64;
    while term.0.bits() > 0 {
        let t = term.div_int(2 * k + 1);
        sum = if k % 2 == 0 { sum.add(&t) } else { sum.sub(&t) };
        term = term.mul(&x2);
        k += 1;
    }
    sum
}

pub fn pi() -> Fx {
    static PI: OnceLock<Fx> = OnceLock::new();
    PI.get_or_init(|| atan_inv(5).mul_int(16).sub(&atan_inv(239).mul_int(4)))
        .clone()
}

pub fn ln2() -> Fx {
    static LN2: OnceLock<Fx> = OnceLock::new();
    LN2.get_or_init(|| atanh(&Fx::one().div_int(3)).mul_int(2)).clone()
}

fn euler() -> Fx {
    static E: OnceLock<Fx> = OnceLock::new();
    E.get_or_init(|| exp_small(&Fx::one())).clone()
}

/// `e^r` for `|r| <= 1` by plain Taylor summation.
fn exp_small(r: &Fx) -> Fx {
    let mut term = Fx::one();
    let mut sum = Fx::one();
    let mut k = 1i64;
    while term.0.bits() > 0 {
        term = term.mul(r).div_int(k);
        sum = sum.add(&term);
        k += 1;
    }
    sum
}

pub fn exp(x: f64) -> Fx {
    let k = x.round() as i64;
    let r = Fx::from_f64(x).sub(&Fx::from_int(k));
    let mut v = exp_small(&r);
    let e = euler();
    let step = if k >= 0 { e } else { Fx::one().div(&e) };
    for _ in 0..k.abs() {
        v = v.mul(&step);
    }
    v
}

pub fn ln(x: f64) -> Fx {
    assert!(x > 0.0);
    // x = m · 2^e with m in [1/√2, √2)
    let e = x.log2().round() as i32;
    let scale = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
    let r = BigRational::from_float(x).expect("finite");
    let m = Fx::from_ratio(&if e >= 0 { r / scale } else { r * scale });
    let z = m.sub(&Fx::one()).div(&m.add(&Fx::one()));
    atanh(&z).mul_int(2).add(&ln2().mul_int(e as i64))
}

/// `sin` and `cos` of `x` after reduction into `[-π, π]`.
pub fn sin_cos(x: f64) -> (Fx, Fx) {
    let p = pi();
    let two_pi = p.mul_int(2);
    let mut r = Fx::from_f64(x);
    let turns = (x / std::f64::consts::TAU).round() as i64;
    r = r.sub(&two_pi.mul_int(turns));
    let r2 = r.mul(&r);
    let mut s_term = r.clone();
    let mut c_term = Fx::one();
    let mut s = Fx(BigInt::zero());
    let mut c = Fx(BigInt::zero());
    let mut k = 0i64;
    while s_term.0.bits() > 0 || c_term.0.bits() > 0 {
        if k % 2 == 0 {
            s = s.add(&s_term);
            c = c.add(&c_term);
        } else {
            s = s.sub(&s_term);
            c = c.sub(&c_term);
        }
        s_term = s_term.mul(&r2).div_int((2 * k + 2) * (2 * k + 3));
        c_term = c_term.mul(&r2).div_int((2 * k + 1) * (2 * k + 2));
        k += 1;
    }
    (s, c)
}

/// `d^m/dt^m (sin t / t) / m!` at `t`, from the Maclaurin series.
pub fn sinc_coeff(t: f64, m: u32) -> Fx {
    series_coeff(t, m, |k| {
        // sin t / t = Σ (-1)^k t^{2k} / (2k+1)!
        (2 * k, sign(k), fact_ratio(1, 2 * k + 1))
    })
}

/// `d^m/dt^m F(t) / m!` for `F(t) = (sin t / t - 1) / t²`.
pub fn sinc_tail_coeff(t: f64, m: u32) -> Fx {
    series_coeff(t, m, |k| (2 * k, sign(k + 1), fact_ratio(1, 2 * k + 3)))
}

/// `d^m/du^m g(u) / m!` for `g(u) = log(1+u)/u`.
pub fn log_ratio_coeff(u: f64, m: u32) -> Fx {
    series_coeff(u, m, |k| (k, sign(k), BigRational::new(BigInt::one(), BigInt::from(k + 1))))
}

fn sign(k: u32) -> bool {
    k % 2 == 1
}

fn fact_ratio(num: u32, den_fact: u32) -> BigRational {
    let f: BigInt = (1..=den_fact).map(BigInt::from).product();
    BigRational::new(BigInt::from(num), f)
}

/// Coefficient of `(s - t)^m` in `Σ_k (±) c_k s^{e_k}`, summed until terms vanish.
fn series_coeff(t: f64, m: u32, term: impl Fn(u32) -> (u32, bool, BigRational)) -> Fx {
    let tx = Fx::from_f64(t);
    let mut sum = Fx(BigInt::zero());
    let mut quiet = 0;
    for k in 0..2000u32 {
        let (e, negative, c) = term(k);
        if e < m {
            continue;
        }
        // d^m/ds^m s^e / m! = C(e, m) s^{e-m}
        let binom: BigInt = binomial(e, m);
        let coeff = Fx::from_ratio(&(c * BigRational::from_integer(binom)));
        let v = coeff.mul(&tx.powi(e - m));
        if v.0.bits() == 0 {
            quiet += 1;
            if quiet > 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        sum = if negative { sum.sub(&v) } else { sum.add(&v) };
    }
    sum
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated polynomial with exact rational coefficients.
pub type Poly = Vec<BigRational>;

pub fn poly_mul(a: &Poly, b: &Poly, order: usize) -> Poly {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= order {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Coefficients of `g(f(c + s))` in `s`, where `outer` is `g` expanded about `f(c) = inner[0]`.
pub fn poly_compose(outer: &Poly, inner: &Poly) -> Poly {
    let order = inner.len() - 1;
    let mut dev = inner.clone();
    dev[0] = BigRational::zero();
    let mut power = vec![BigRational::zero(); order + 1];
    power[0] = BigRational::one();
    let mut out = vec![BigRational::zero(); order + 1];
    for g in outer {
        for (k, p) in power.iter().enumerate() {
            out[k] += g * p;
        }
        power = poly_mul(&power, &dev, order);
    }
    out
}

/// Coefficients of the inverse series about `x(c) = x[0]`, with constant term `c`.
pub fn poly_invert(x: &Poly, c: &BigRational) -> Poly {
    let order = x.len() - 1;
    let x1 = x[1].clone();
    // t(y) = c + d(y); require x(c + d) - x0 = y, i.e. Σ_{k>=1} x_k d^k = y
    let mut d = vec![BigRational::zero(); order + 1];
    let mut y = vec![BigRational::zero(); order + 1];
    y[1] = BigRational::one();
    for _ in 0..=order {
        let mut lhs = vec![BigRational::zero(); order + 1];
        let mut power = d.clone();
        for xk in x.iter().skip(1) {
            for (k, p) in power.iter().enumerate() {
                lhs[k] += xk * p;
            }
            power = poly_mul(&power, &d, order);
        }
        for k in 0..=order {
            d[k] = &d[k] + (&y[k] - &lhs[k]) / &x1;
        }
    }
    d[0] = c.clone();
    d
}

/// Irwin–Hall density of a sum of `n` uniforms at `n/2`; equals `Vol/√n` of the diagonal section.
pub fn irwin_hall_center(n: u32) -> BigRational {
    let x = BigRational::new(BigInt::from(n), BigInt::from(2));
    let mut sum = BigRational::zero();
    let fact: BigInt = (1..n).map(BigInt::from).product();
    for k in 0..=(n / 2) {
        let kk = BigRational::from_integer(BigInt::from(k));
        if kk >= x {
            break;
        }
        let base = &x - &kk;
        let mut p = BigRational::one();
        for _ in 0..n - 1 {
            p *= &base;
        }
        let term = BigRational::from_integer(binomial(n, k)) * p;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / BigRational::from_integer(fact)
}

pub fn rational_to_interval(r: &BigRational) -> Interval {
    Interval::from_ratio(r.numer(), r.denom()).expect("nonzero denominator")
}

pub fn interval_contains_ratio(iv: Interval, r: &BigRational) -> bool {
    let lo = BigRational::from_float(iv.lo()).expect("finite");
    let hi = BigRational::from_float(iv.hi()).expect("finite");
    &lo <= r && r <= &hi
}
