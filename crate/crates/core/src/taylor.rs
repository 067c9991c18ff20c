//! Truncated Taylor series with interval coefficients.
//!
//! Convention: `coeffs[k]` encloses `f^(k)(c) / k!` for every point `c` of
//! the (possibly thick) `center`. A series is *not* a Taylor model: there
//! is no remainder term, it just carries enclosures of the first `K + 1`
//! coefficients. Every operation here computes coefficient `k` from input
//! coefficients of index `<= k` only (Cauchy products, the square-root and
//! logarithm recurrences, Faà di Bruno sums), so truncating at order `K`
//! loses nothing and each output coefficient is an enclosure of the exact
//! one.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_ORDER: usize = 7;

/// Highest order with a precomputed partition table.
pub const MAX_ORDER: usize = 12;

/// One integer partition of `k`, stored by multiplicity.
///
/// `multiplicities[i - 1] = b_i`, the number of parts equal to `i`, so that
/// `Σ i·b_i = k`. `parts = Σ b_i` and `multinomial = parts! / Π b_i!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub multiplicities: Vec<u32>,
    pub parts: usize,
    pub multinomial: u64,
}

impl Partition {
    pub fn weight(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, &b)| (i + 1) * b as usize)
            .sum()
    }
}

/// All partitions of `k` (`1 <= k <= MAX_ORDER`), in a fixed order.
pub fn partitions(k: usize) -> &'static [Partition] {
    static TABLE: OnceLock<Vec<Vec<Partition>>> = OnceLock::new();
    assert!(
        (1..=MAX_ORDER).contains(&k),
        "partition table covers 1..={MAX_ORDER}, asked for {k}"
    );
    let table = TABLE.get_or_init(|| (0..=MAX_ORDER).map(build_partitions).collect());
    &table[k]
}

fn build_partitions(k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut mult = vec![0u32; k];
    fill(k, k, &mut mult, &mut out);
    out
}

// Distribute `rest` over part sizes `1..=largest`.
fn fill(rest: usize, largest: usize, mult: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        let parts = mult.iter().map(|&b| b as usize).sum();
        let denom: u64 = mult.iter().map(|&b| factorial_u64(b as usize)).product();
        out.push(Partition {
            multiplicities: mult.clone(),
            parts,
            multinomial: factorial_u64(parts) / denom,
        });
        return;
    }
    if largest == 0 {
        return;
    }
    let max_count = rest / largest;
    for count in (0..=max_count).rev() {
        mult[largest - 1] = count as u32;
        fill(rest - count * largest, largest - 1, mult, out);
    }
    mult[largest - 1] = 0;
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Truncated Taylor expansion about an interval center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    center: Interval,
    coeffs: Vec<Interval>,
}

impl TaylorSeries {
    pub fn new(center: Interval, coeffs: Vec<Interval>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("series needs at least one coefficient".into()));
        }
        if coeffs.len() - 1 > MAX_ORDER {
            return Err(Error::UnsupportedOrder(coeffs.len() - 1));
        }
        Ok(TaylorSeries { center, coeffs })
    }

    pub fn constant(center: Interval, value: Interval, order: usize) -> Result<Self> {
        let mut coeffs = vec![Interval::ZERO; order + 1];
        coeffs[0] = value;
        TaylorSeries::new(center, coeffs)
    }

    /// The independent variable itself: `(c, 1, 0, …)`.
    pub fn variable(center: Interval, order: usize) -> Result<Self> {
        let mut coeffs = vec![Interval::ZERO; order + 1];
        coeffs[0] = center;
        if order >= 1 {
            coeffs[1] = Interval::ONE;
        }
        TaylorSeries::new(center, coeffs)
    }

    pub fn center(&self) -> Interval {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Interval {
        self.coeffs[k]
    }

    /// Enclosure of the `m`-th derivative at the center, `m! · coeffs[m]`.
    pub fn derivative(&self, m: usize) -> Interval {
        let fact = (1..=m as u64).fold(Interval::ONE, |acc, j| acc * Interval::from_integer(j as i64));
        self.coeffs[m] * fact
    }

    fn check_compatible(&self, other: &TaylorSeries) -> Result<Interval> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        self.center
            .intersect(&other.center)
            .map_err(|_| Error::CenterMismatch {
                left: self.center,
                right: other.center,
            })
    }

    fn zip_with(&self, other: &TaylorSeries, op: impl Fn(Interval, Interval) -> Interval) -> Result<Self> {
        let center = self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(TaylorSeries { center, coeffs })
    }

    pub fn add(&self, other: &TaylorSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TaylorSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Interval) -> Self {
        TaylorSeries {
            center: self.center,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &TaylorSeries) -> Result<Self> {
        let center = self.check_compatible(other)?;
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Ok(TaylorSeries { center, coeffs })
    }

    /// Quotient `self / other`; needs `0 ∉ other.coeffs[0]`.
    pub fn div(&self, other: &TaylorSeries) -> Result<Self> {
        let center = self.check_compatible(other)?;
        let b0 = other.coeffs[0];
        let mut q: Vec<Interval> = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let s: Interval = (0..k).map(|j| q[j] * other.coeffs[k - j]).sum();
            q.push((self.coeffs[k] - s).div(b0)?);
        }
        Ok(TaylorSeries { center, coeffs: q })
    }

    /// Square root, `r_k = (s_k - Σ_{j=1}^{k-1} r_j r_{k-j}) / (2 r_0)`.
    ///
    /// The constant term must be bounded away from zero; a series whose value
    /// touches zero has no Taylor expansion of `sqrt` there.
    pub fn sqrt(&self) -> Result<Self> {
        let s0 = self.coeffs[0];
        if !s0.is_positive() {
            return Err(Error::Domain {
                op: "series sqrt",
                arg: s0,
            });
        }
        let r0 = s0.sqrt()?;
        let two_r0 = r0 * 2.0;
        let mut r = vec![r0];
        for k in 1..self.coeffs.len() {
            let s: Interval = (1..k).map(|j| r[j] * r[k - j]).sum();
            r.push((self.coeffs[k] - s).div(two_r0)?);
        }
        Ok(TaylorSeries {
            center: self.center,
            coeffs: r,
        })
    }

    /// Natural logarithm, `l_k = (s_k - (1/k) Σ_{j=1}^{k-1} j l_j s_{k-j}) / s_0`.
    pub fn ln(&self) -> Result<Self> {
        let s0 = self.coeffs[0];
        let mut l = vec![s0.ln()?];
        for k in 1..self.coeffs.len() {
            let acc: Interval = (1..k)
                .map(|j| l[j] * self.coeffs[k - j] * j as f64)
                .sum();
            let inner = self.coeffs[k] - acc.div(Interval::from_integer(k as i64))?;
            l.push(inner.div(s0)?);
        }
        Ok(TaylorSeries {
            center: self.center,
            coeffs: l,
        })
    }

    /// Expansion of `sin` about `center`: `sin^(k)(c)/k!` cycles through
    /// `sin, cos, -sin, -cos` divided by `k!`.
    pub fn sin_of_variable(center: Interval, order: usize) -> Result<Self> {
        let s = center.sin()?;
        let c = center.cos()?;
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut fact = Interval::ONE;
        for k in 0..=order {
            if k > 0 {
                fact = fact * Interval::from_integer(k as i64);
            }
            let d = match k % 4 {
                0 => s,
                1 => c,
                2 => -s,
                _ => -c,
            };
            coeffs.push(d.div(fact)?);
        }
        TaylorSeries::new(center, coeffs)
    }

    /// Faà di Bruno composition `g ∘ f`.
    ///
    /// `outer` must be expanded about an interval containing `inner`'s value
    /// enclosure `inner.coeffs[0]`, so that its coefficients enclose those of
    /// `g` at `f(c)` for every point `c` of the inner center.
    pub fn compose(outer: &TaylorSeries, inner: &TaylorSeries) -> Result<Self> {
        if outer.order() != inner.order() {
            return Err(Error::OrderMismatch {
                left: outer.order(),
                right: inner.order(),
            });
        }
        if !inner.coeffs[0].is_subset(&outer.center) {
            return Err(Error::CenterMismatch {
                left: outer.center,
                right: inner.coeffs[0],
            });
        }
        let order = inner.order();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(outer.coeffs[0]);
        for k in 1..=order {
            let mut acc = Interval::ZERO;
            for p in partitions(k) {
                let mut term = outer.coeffs[p.parts] * Interval::from_u128(p.multinomial as u128);
                for (i, &b) in p.multiplicities.iter().enumerate() {
                    if b > 0 {
                        term = term * inner.coeffs[i + 1].pow_int(b as i32)?;
                    }
                }
                acc = acc + term;
            }
            coeffs.push(acc);
        }
        Ok(TaylorSeries {
            center: inner.center,
            coeffs,
        })
    }

    /// Expansion of the inverse function about `x_0 = self.coeffs[0]`.
    ///
    /// `t_0 = center`, `t_1 = 1 / x_1`, and for `k >= 2`
    /// `t_k = -Σ_{m != k} m!/(Π b_i!) · t_m · x_1^{b_1 - k} · Π_{i>=2} x_i^{b_i}`
    /// over the partitions of `k`, obtained by demanding that `t ∘ x` be the identity.
    pub fn invert(&self, center: Interval) -> Result<Self> {
        let x1 = self.coeffs.get(1).copied().ok_or_else(|| {
            Error::InvalidParameter("inversion needs an order >= 1 series".into())
        })?;
        if x1.contains_zero() {
            return Err(Error::VanishingDerivative {
                subinterval: self.center,
                derivative: x1,
            });
        }
        let x1_inv = x1.recip()?;
        let order = self.order();
        let mut t = Vec::with_capacity(order + 1);
        t.push(center);
        t.push(x1_inv);
        for k in 2..=order {
            let mut acc = Interval::ZERO;
            for p in partitions(k).iter().filter(|p| p.parts != k) {
                let b1 = p.multiplicities[0] as i32;
                let mut term = t[p.parts]
                    * Interval::from_u128(p.multinomial as u128)
                    * x1_inv.pow_int(k as i32 - b1)?;
                for (i, &b) in p.multiplicities.iter().enumerate().skip(1) {
                    if b > 0 {
                        term = term * self.coeffs[i + 1].pow_int(b as i32)?;
                    }
                }
                acc = acc + term;
            }
            t.push(-acc);
        }
        Ok(TaylorSeries {
            center: self.coeffs[0],
            coeffs: t,
        })
    }

    /// Horner evaluation of the truncated polynomial at offset `dx`.
    ///
    /// No remainder is added, so this encloses the polynomial, not the function.
    pub fn evaluate(&self, dx: Interval) -> Interval {
        self.coeffs
            .iter()
            .rev()
            .fold(Interval::ZERO, |acc, &c| acc * dx + c)
    }

    /// Coefficientwise intersection of two enclosures of the same expansion.
    pub fn intersect(&self, other: &TaylorSeries) -> Result<Self> {
        let center = self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TaylorSeries { center, coeffs })
    }
}
