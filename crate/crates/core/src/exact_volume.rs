//! Exact evaluation of the closed-form section volume.
//!
//! `Vol_{n-1}(Cⁿ ∩ u₀^⊥) = √n · Q(n)` with the rational
//!
//! ```text
//! Q(n) = 1 / (2ⁿ (n-1)!) · Σ_{i=0}^{n} (-1)^i C(n,i) (n-2i)^{n-1} sign(n-2i)
//! ```
//!
//! No floating point enters any decision here: monotonicity of `√n·Q(n)`
//! is decided by comparing `(n+1)·Q(n+1)²` with `n·Q(n)²` as rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        ExactRational(BigRational::new(num, den))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_interval(&self) -> Interval {
        Interval::from_ratio(self.numer(), self.denom()).expect("denominator is positive")
    }

    /// Exact value of an f64, for comparisons against interval endpoints.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(ExactRational)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Q(n)`, the volume divided by `√n`.
///
/// The `i = n/2` term of an even `n` carries `sign(0) = 0` and is dropped;
/// `0^{n-1}` is never formed.
pub fn q_volume(n: u32) -> Result<ExactRational> {
    if n < 1 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let n_big = BigInt::from(n);
    let mut binom = BigInt::one();
    let mut sum = BigInt::zero();
    for i in 0..=n {
        if i > 0 {
            binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
        }
        let d = &n_big - BigInt::from(2 * i);
        if !d.is_zero() {
            let mut term = &binom * num_traits::pow(d.abs(), (n - 1) as usize);
            let d_negative = d.is_negative();
            // sign(d)·d^{n-1} = |d|^{n-1}·sign(d)^n
            let flip = (d_negative && n % 2 == 1) ^ (i % 2 == 1);
            if flip {
                term = -term;
            }
            sum += term;
        }
    }
    let den = num_traits::pow(BigInt::from(2), n as usize) * factorial(n - 1);
    Ok(ExactRational::new(sum, den))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n · Q(n)²`, the squared volume.
pub fn squared_volume(n: u32) -> Result<ExactRational> {
    let q = q_volume(n)?;
    if !q.is_positive() {
        return Err(Error::NonPositiveVolume(n));
    }
    Ok(ExactRational(q.0.clone() * q.0 * BigInt::from(n)))
}

/// Whether `I(n+1) > I(n)`, decided exactly.
pub fn is_increasing_step(n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("step from n = {n} is undefined")));
    }
    Ok(squared_volume(n + 1)? > squared_volume(n)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub n: u32,
    pub increasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCertificate {
    pub n_lo: u32,
    pub n_hi: u32,
    /// One entry per step `n -> n+1` for `n_lo <= n < n_hi`.
    pub steps: Vec<StepResult>,
    pub verdict: bool,
}

impl MonotonicityCertificate {
    pub fn step(&self, n: u32) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.n == n)
    }
}

/// Checks every step `n -> n+1` with `n_lo <= n < n_hi`.
pub fn verify_range(n_lo: u32, n_hi: u32) -> Result<MonotonicityCertificate> {
    if n_lo < 2 || n_lo >= n_hi {
        return Err(Error::InvalidParameter(format!(
            "range [{n_lo}, {n_hi}] must satisfy 2 <= lo < hi"
        )));
    }
    let squares = (n_lo..=n_hi)
        .into_par_iter()
        .map(squared_volume)
        .collect::<Result<Vec<_>>>()?;
    let steps: Vec<StepResult> = squares
        .windows(2)
        .zip(n_lo..n_hi)
        .map(|(w, n)| StepResult {
            n,
            increasing: w[1] > w[0],
        })
        .collect();
    let verdict = steps.iter().all(|s| s.increasing);
    Ok(MonotonicityCertificate {
        n_lo,
        n_hi,
        steps,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitStatus {
    Below,
    NotBelow,
    /// The enclosure of `6/π` is too wide to decide.
    Indeterminate,
}

/// Whether `√n·Q(n) < √(6/π)`, decided as `n·Q(n)² < 6/π` against an enclosure of π.
pub fn below_limit(n: u32, pi: Interval) -> Result<LimitStatus> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} < 2")));
    }
    let sq = squared_volume(n)?;
    let bound = Interval::point(6.0).div(pi)?;
    let lo = ExactRational::from_f64(bound.lo()).expect("finite");
    let hi = ExactRational::from_f64(bound.hi()).expect("finite");
    Ok(if sq < lo {
        LimitStatus::Below
    } else if sq >= hi {
        LimitStatus::NotBelow
    } else {
        LimitStatus::Indeterminate
    })
}

/// `floor` and `ceil` of `√n·Q(n)·10^digits`, both exact.
pub fn volume_scaled_bounds(n: u32, digits: u32) -> Result<(BigInt, BigInt)> {
    let sq = squared_volume(n)?;
    let scale = num_traits::pow(BigInt::from(10), 2 * digits as usize);
    // floor(sqrt(floor(sq · 10^{2d})))
    let target = sq.numer() * scale;
    let lo = (&target / sq.denom()).sqrt();
    let exact = &lo * &lo * sq.denom() == target;
    let hi = if exact { lo.clone() } else { &lo + 1 };
    Ok((lo, hi))
}

/// Interval enclosure of the volume `√n·Q(n)`.
pub fn volume_interval(n: u32) -> Result<Interval> {
    squared_volume(n)?.to_interval().sqrt()
}

/// Renders `v / 10^digits` as a decimal string.
pub fn format_scaled(v: &BigInt, digits: u32) -> String {
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let d = digits as usize;
    let padded = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub n: u32,
    pub increasing: bool,
    /// Outward decimal bounds on `I(n+1) - I(n)`.
    pub gap_lo: String,
    pub gap_hi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub n: u32,
    pub volume_lo: String,
    pub volume_hi: String,
}

/// Volume rows for `n_lo..=n_hi`, rendered to `digits` places.
pub fn volume_rows(n_lo: u32, n_hi: u32, digits: u32) -> Result<Vec<VolumeRow>> {
    (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let (lo, hi) = volume_scaled_bounds(n, digits)?;
            Ok(VolumeRow {
                n,
                volume_lo: format_scaled(&lo, digits),
                volume_hi: format_scaled(&hi, digits),
            })
        })
        .collect()
}

/// Gap rows for steps `n_lo <= n < n_hi`.
pub fn gap_rows(n_lo: u32, n_hi: u32, digits: u32) -> Result<Vec<GapRow>> {
    let cert = verify_range(n_lo, n_hi)?;
    let bounds = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| volume_scaled_bounds(n, digits))
        .collect::<Result<Vec<_>>>()?;
    Ok(cert
        .steps
        .iter()
        .zip(bounds.windows(2))
        .map(|(s, w)| {
            let gap_lo = &w[1].0 - &w[0].1;
            let gap_hi = &w[1].1 - &w[0].0;
            GapRow {
                n: s.n,
                increasing: s.increasing,
                gap_lo: format_scaled(&gap_lo, digits),
                gap_hi: format_scaled(&gap_hi, digits),
            }
        })
        .collect())
}

/// Exact lower bound on `I(n+1) - I(n)` at `digits` places, as a rational.
pub fn gap_lower_exact(n: u32, digits: u32) -> Result<ExactRational> {
    let (_, hi_n) = volume_scaled_bounds(n, digits)?;
    let (lo_next, _) = volume_scaled_bounds(n + 1, digits)?;
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    Ok(ExactRational::new(lo_next - hi_n, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(q_volume(1).unwrap(), r(1, 1));
        // the diagonal of the unit square has length √2
        assert_eq!(q_volume(2).unwrap(), r(1, 1));
        // regular hexagon of side 1/√2: area 3√3/4
        assert_eq!(q_volume(3).unwrap(), r(3, 4));
        assert!(q_volume(0).is_err());
    }

    #[test]
    fn steps_at_the_boundary() {
        assert!(!is_increasing_step(2).unwrap());
        assert!(is_increasing_step(3).unwrap());
        assert!(is_increasing_step(144).unwrap());
        assert!(is_increasing_step(1).is_err());
    }

    #[test]
    fn range_certificates() {
        let c = verify_range(2, 4).unwrap();
        assert_eq!(c.steps.len(), 2);
        assert!(!c.step(2).unwrap().increasing);
        assert!(c.step(3).unwrap().increasing);
        assert!(!c.verdict);
        let single = verify_range(3, 4).unwrap();
        assert_eq!(single.steps, vec![StepResult { n: 3, increasing: true }]);
        assert!(single.verdict);
        assert!(verify_range(5, 5).is_err());
    }

    #[test]
    fn limit_comparison() {
        let pi = Interval::pi();
        assert_eq!(below_limit(2, pi).unwrap(), LimitStatus::NotBelow);
        for n in [3, 10, 100] {
            assert_eq!(below_limit(n, pi).unwrap(), LimitStatus::Below);
        }
        let wide = Interval::new(3.0, 3.3).unwrap();
        assert_eq!(below_limit(100, wide).unwrap(), LimitStatus::Indeterminate);
    }

    #[test]
    fn decimal_rendering() {
        // √3 · 3/4 = 1.29903810567665797…
        let (lo, hi) = volume_scaled_bounds(3, 12).unwrap();
        assert_eq!(format_scaled(&lo, 12), "1.299038105676");
        assert_eq!(format_scaled(&hi, 12), "1.299038105677");
        // √2 is irrational, √1 is not
        let (lo, hi) = volume_scaled_bounds(1, 5).unwrap();
        assert_eq!((lo.clone(), hi), (BigInt::from(100000), BigInt::from(100000)));
        assert_eq!(format_scaled(&BigInt::from(-5), 3), "-0.005");
        assert_eq!(format_scaled(&BigInt::from(42), 0), "42");
    }

    #[test]
    fn term_symmetry() {
        // the i and n-i terms coincide, so Q(n) is twice the lower half (plus nothing in the middle)
        for n in [7u32, 12, 31] {
            let full = q_volume(n).unwrap();
            let mut half = BigInt::zero();
            let mut binom = BigInt::one();
            for i in 0..=n {
                if i > 0 {
                    binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
                }
                if 2 * i < n {
                    let d = BigInt::from(n - 2 * i);
                    let t = &binom * num_traits::pow(d, (n - 1) as usize);
                    half += if i % 2 == 1 { -t } else { t };
                }
            }
            let den = num_traits::pow(BigInt::from(2), n as usize) * factorial(n - 1);
            assert_eq!(full, ExactRational::new(half * 2, den), "n = {n}");
        }
    }

    #[test]
    fn repeated_evaluation_is_identical() {
        assert_eq!(q_volume(57).unwrap(), q_volume(57).unwrap());
    }
}
