//! Laplace-method lower bound on `I(n+1) - I(n)` and the assembled proof.
//!
//! With `a = 1.1`, `R >= sup |t⁽⁷⁾|` and
//!
//! ```text
//! e₁(n) = 2 a^{-n}          (tail of the integral beyond a)
//! e₂(n) = (R/2) n^{-5/2}     (Lagrange remainder of t'(x))
//! e₃(n) = 5 e^{-n/6}         (Gaussian tail beyond x(a) >= 1)
//! ```
//!
//! the gap satisfies
//!
//! ```text
//! I(n+1) - I(n) > √(6/π) · 3/(20 n (n+1)) - 4 a^{-n} - R n^{-5/2} - 10 e^{-n/6}.
//! ```
//!
//! [`find_n0`] evaluates this for each `n` up to a tail start `N` and a
//! ratio-test tail certificate covers every `n >= N`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_volume::verify_range;
use crate::interval::Interval;
use crate::pipeline::{sweep, PipelineConfig, SweepResult};

pub const DEFAULT_TAIL_START: u32 = 160;
const MIN_TAIL_START: u32 = 30;

/// Enclosure of `√(6/π)`.
pub fn sqrt_six_over_pi() -> Interval {
    Interval::point(6.0)
        .div(Interval::pi())
        .and_then(|v| v.sqrt())
        .expect("π > 0")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapBoundParams {
    pub a: Interval,
    /// Upper bound `R` on `|t⁽⁷⁾|`.
    pub r_bound: f64,
    pub sqrt_six_over_pi: Interval,
}

impl GapBoundParams {
    pub fn new(r_bound: f64) -> Result<Self> {
        if !(r_bound >= 0.0 && r_bound.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "R = {r_bound} must be finite and nonnegative"
            )));
        }
        Ok(GapBoundParams {
            a: Interval::around(1.1),
            r_bound,
            sqrt_six_over_pi: sqrt_six_over_pi(),
        })
    }

    fn r(&self) -> Interval {
        Interval::point(self.r_bound)
    }

    fn n(n: u32) -> Interval {
        Interval::from_integer(n as i64)
    }

    /// `n^{-5/2}`
    fn inv_pow_five_halves(n: u32) -> Interval {
        let nn = Self::n(n);
        (nn.square() * nn.sqrt().expect("n > 0"))
            .recip()
            .expect("n > 0")
    }

    fn a_pow_neg(&self, n: u32) -> Interval {
        self.a.pow_int(-(n as i32)).expect("a > 1")
    }

    fn exp_neg_sixth(n: u32) -> Interval {
        (-Self::n(n).div(Interval::point(6.0)).expect("nonzero"))
            .exp()
            .expect("negative argument")
    }

    pub fn e1(&self, n: u32) -> Interval {
        self.a_pow_neg(n) * 2.0
    }

    pub fn e2(&self, n: u32) -> Interval {
        self.r() * 0.5 * Self::inv_pow_five_halves(n)
    }

    pub fn e3(&self, n: u32) -> Interval {
        Self::exp_neg_sixth(n) * 5.0
    }

    /// `√(6/π) · 3 / (20 n (n+1))`
    pub fn main_term(&self, n: u32) -> Interval {
        let den = Self::n(n) * Self::n(n + 1) * 20.0;
        (self.sqrt_six_over_pi * 3.0).div(den).expect("n > 0")
    }

    /// The three subtracted error terms of the gap bound.
    pub fn error_terms(&self, n: u32) -> [Interval; 3] {
        [
            self.a_pow_neg(n) * 4.0,
            self.r() * Self::inv_pow_five_halves(n),
            Self::exp_neg_sixth(n) * 10.0,
        ]
    }

    pub fn gap_lower_bound(&self, n: u32) -> Interval {
        let [a, b, c] = self.error_terms(n);
        self.main_term(n) - a - b - c
    }
}

/// Certifies `gap_lower_bound(n) > 0` for every `n >= n_tail`.
///
/// Writing the bound as `m(n)·(1 - Σ ρᵢ(n))` with `ρᵢ = errᵢ/m`, it is
/// enough that `Σ ρᵢ(N) < 1` and that each `ρᵢ` is nonincreasing on `n >= N`.
/// For `c·βⁿ` terms `ρ(n+1)/ρ(n) = β·(n+2)/n`, which decreases in `n`, so
/// checking it at `N` suffices. For `R n^{-5/2}`, `ρ ∝ n^{-1/2} + n^{-3/2}`
/// decreases for all `n > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub n_tail: u32,
    /// Upper bounds of `errᵢ(N)/m(N)`.
    pub ratios: [f64; 3],
    pub ratio_sum: f64,
    /// Upper bound of `(N+2)/N · a^{-1}`.
    pub geometric_ratio_a: f64,
    /// Upper bound of `(N+2)/N · e^{-1/6}`.
    pub geometric_ratio_exp: f64,
    pub power_term_decreasing: bool,
    pub valid: bool,
}

pub fn tail_certificate(params: &GapBoundParams, n_tail: u32) -> Result<TailCertificate> {
    if n_tail < MIN_TAIL_START {
        return Err(Error::InvalidParameter(format!(
            "tail start {n_tail} is below {MIN_TAIL_START}"
        )));
    }
    let main = params.main_term(n_tail);
    let ratios = params
        .error_terms(n_tail)
        .map(|e| e.div(main).expect("main term is positive"));
    let sum = ratios[0] + ratios[1] + ratios[2];
    let growth = Interval::from_integer(n_tail as i64 + 2)
        .div(Interval::from_integer(n_tail as i64))
        .expect("n > 0");
    let geo_a = growth.div(params.a)?;
    let geo_e = growth * Interval::point(-1.0).div(Interval::point(6.0))?.exp()?;
    let valid = sum.hi() < 1.0 && geo_a.hi() <= 1.0 && geo_e.hi() <= 1.0;
    Ok(TailCertificate {
        n_tail,
        ratios: ratios.map(|r| r.hi()),
        ratio_sum: sum.hi(),
        geometric_ratio_a: geo_a.hi(),
        geometric_ratio_exp: geo_e.hi(),
        power_term_decreasing: true,
        valid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub n0: u32,
    pub n_tail: u32,
    pub r_bound: f64,
    /// Smallest lower endpoint of the gap bound over `[n0, n_tail]`.
    pub min_checked_lower_bound: f64,
    /// The gap bound at `n0 - 1` (not positive), when `n0 > 3`.
    pub bound_below_n0: Option<Interval>,
    pub tail: TailCertificate,
    pub verdict: bool,
}

/// Smallest `n0` such that the gap bound is positive on `[n0, n_tail]`, plus the tail certificate.
pub fn find_n0(params: &GapBoundParams, n_tail: u32) -> Result<GapCertificate> {
    if n_tail < MIN_TAIL_START {
        return Err(Error::InvalidParameter(format!(
            "tail start {n_tail} is below {MIN_TAIL_START}"
        )));
    }
    let mut n = n_tail;
    let mut min_lb = f64::INFINITY;
    let mut below = None;
    loop {
        let lb = params.gap_lower_bound(n);
        if !lb.is_positive() {
            below = Some(lb);
            break;
        }
        min_lb = min_lb.min(lb.lo());
        if n == 3 {
            break;
        }
        n -= 1;
    }
    let n0 = if below.is_some() { n + 1 } else { n };
    if n0 > n_tail {
        return Err(Error::NoCrossover { n_tail });
    }
    let tail = tail_certificate(params, n_tail)?;
    let verdict = tail.valid;
    Ok(GapCertificate {
        n0,
        n_tail,
        r_bound: params.r_bound,
        min_checked_lower_bound: min_lb,
        bound_below_n0: below,
        tail,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSample {
    pub n: u32,
    pub integrated: Interval,
    pub closed_form: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTermCheck {
    /// `(1, -1/20, -13/30240)` times `3^{p/2} (p-1)!!` equals `(1, -3/20, -13/1120)`.
    pub exact_constants: bool,
    pub samples: Vec<MomentSample>,
    pub ok: bool,
}

fn double_factorial(k: i64) -> i64 {
    (1..=k).rev().step_by(2).product::<i64>().max(1)
}

/// Re-derives the constants `3/20` and `13/1120` of the main term.
///
/// `t(x) = x - x³/60 - 13x⁵/151200 + …` gives `t'(x) = 1 - x²/20 - 13x⁴/30240`.
/// Against `e^{-n x²/6}` (σ² = 3/n) the half-line moments are
/// `∫₀^∞ e^{-x²/2σ²} x^p dx = ½ √(2πσ²) σ^p (p-1)!!`, so the `p`-th term of
/// `(2√n/π) ∫₀^∞ e^{-nx²/6} t'(x) dx` is `√(6/π) · c_p · 3^{p/2} (p-1)!! · n^{-p/2}`.
pub fn main_term_coeffs_check() -> Result<MainTermCheck> {
    let t_coeffs = [
        Rational64::new(1, 1),
        Rational64::new(-1, 60),
        Rational64::new(-13, 151200),
    ];
    // t'(x) coefficients of x^0, x^2, x^4 come from t's x^1, x^3, x^5
    let tp: Vec<Rational64> = t_coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| c * Rational64::from_integer(2 * j as i64 + 1))
        .collect();
    let expected = [
        Rational64::new(1, 1),
        Rational64::new(-3, 20),
        Rational64::new(-13, 1120),
    ];
    let exact_constants = tp.iter().enumerate().all(|(j, &c)| {
        let p = 2 * j as i64;
        let factor = 3i64.pow(j as u32) * double_factorial(p - 1);
        c * Rational64::from_integer(factor) == expected[j]
    }) && tp[1] == Rational64::new(-1, 20)
        && tp[2] == Rational64::new(-13, 30240);

    let pi = Interval::pi();
    let s6p = sqrt_six_over_pi();
    let mut samples = Vec::new();
    for n in [3u32, 10, 50, 145, 1000] {
        let nn = Interval::from_integer(n as i64);
        let sigma2 = Interval::point(3.0).div(nn)?;
        let sigma = sigma2.sqrt()?;
        let half_norm = (pi * 2.0 * sigma2).sqrt()? * 0.5;
        let mut integral = Interval::ZERO;
        for (j, c) in tp.iter().enumerate() {
            let p = 2 * j as i32;
            let moment = half_norm * sigma.pow_int(p)? * Interval::from_integer(double_factorial(p as i64 - 1));
            let c = Interval::from_integer(*c.numer()).div(Interval::from_integer(*c.denom()))?;
            integral = integral + c * moment;
        }
        let integrated = (nn.sqrt()? * 2.0).div(pi)? * integral;
        let closed = Interval::ONE
            - Interval::point(3.0).div(nn * 20.0)?
            - Interval::point(13.0).div(nn.square() * 1120.0)?;
        let closed_form = s6p * closed;
        samples.push(MomentSample {
            n,
            integrated,
            closed_form,
        });
    }
    let ok = exact_constants && samples.iter().all(|s| s.integrated.overlaps(&s.closed_form));
    Ok(MainTermCheck {
        exact_constants,
        samples,
        ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofConfig {
    pub pipeline: PipelineConfig,
    pub n_tail: u32,
    /// Skip the sweep and use this `R` instead. The report marks the bound stage as injected.
    pub r_override: Option<f64>,
}

impl Default for ProofConfig {
    fn default() -> Self {
        ProofConfig {
            pipeline: PipelineConfig::default(),
            n_tail: DEFAULT_TAIL_START,
            r_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Which steps `n -> n+1` each regime proves.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    /// Steps checked exactly, `(first, last)` inclusive.
    pub exact_steps: Option<(u32, u32)>,
    /// First step covered by the per-n analytic check.
    pub analytic_from: Option<u32>,
    /// First step covered by the tail certificate.
    pub tail_from: Option<u32>,
    /// Last step of the per-n analytic check.
    pub analytic_through: Option<u32>,
}

impl Coverage {
    /// Every step from 3 on is covered, and the exact range reaches the analytic start.
    pub fn is_complete(&self) -> bool {
        match (
            self.exact_steps,
            self.analytic_from,
            self.analytic_through,
            self.tail_from,
        ) {
            (Some((first, last)), Some(n0), Some(through), Some(tail)) => {
                first <= 3 && last >= n0 && n0 <= through && tail <= through + 1
            }
            _ => false,
        }
    }

    /// Steps proven by both regimes.
    pub fn overlap_steps(&self) -> u32 {
        match (self.exact_steps, self.analytic_from) {
            (Some((_, last)), Some(n0)) if last >= n0 => last - n0 + 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub verdict: bool,
    pub config: ProofConfig,
    pub r_injected: bool,
    pub derivative_bound: Option<f64>,
    pub top_derivative: Option<Interval>,
    pub x_hulls: Option<Vec<Interval>>,
    pub t_hulls: Option<Vec<Interval>>,
    pub gap: Option<GapCertificate>,
    pub exact_range: Option<(u32, u32)>,
    pub exact_verdict: Option<bool>,
    pub main_term: Option<MainTermCheck>,
    pub coverage: Coverage,
    pub stages: Vec<StageReport>,
    /// Wall-clock milliseconds per stage; excluded from reproducibility comparisons.
    pub timing_ms: BTreeMap<String, u128>,
}

impl ProofReport {
    fn empty(config: &ProofConfig) -> Self {
        ProofReport {
            verdict: false,
            config: config.clone(),
            r_injected: config.r_override.is_some(),
            derivative_bound: None,
            top_derivative: None,
            x_hulls: None,
            t_hulls: None,
            gap: None,
            exact_range: None,
            exact_verdict: None,
            main_term: None,
            coverage: Coverage::default(),
            stages: Vec::new(),
            timing_ms: BTreeMap::new(),
        }
    }

    fn stage(&mut self, name: &str, passed: bool, detail: String) {
        self.stages.push(StageReport {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn failed_stage(&self) -> Option<&StageReport> {
        self.stages.iter().find(|s| !s.passed)
    }

    /// The verdict implied by the recorded stages and coverage.
    ///
    /// An injected `R` never yields a proof.
    pub fn assess(&self) -> bool {
        !self.r_injected
            && !self.stages.is_empty()
            && self.stages.iter().all(|s| s.passed)
            && self.gap.as_ref().is_some_and(|g| g.verdict)
            && self.exact_verdict == Some(true)
            && self.main_term.as_ref().is_some_and(|m| m.ok)
            && self.coverage.is_complete()
    }

    /// The report without wall-clock fields, for byte-level reproducibility checks.
    pub fn without_timing(&self) -> ProofReport {
        ProofReport {
            timing_ms: BTreeMap::new(),
            ..self.clone()
        }
    }
}

/// Runs sweep → R, `find_n0`, the main-term check and the exact small-case
/// verification, then splices the coverage.
pub fn full_proof(cfg: &ProofConfig) -> ProofReport {
    let mut report = ProofReport::empty(cfg);

    let started = Instant::now();
    let r_bound = match cfg.r_override {
        Some(r) => {
            report.stage("bound_r", true, format!("R = {r} injected, sweep skipped"));
            r
        }
        None => match sweep(&cfg.pipeline) {
            Ok(s) => {
                let SweepResult {
                    derivative_bound,
                    top_derivative,
                    ref x_table,
                    ref t_table,
                    subintervals,
                    ..
                } = s;
                report.derivative_bound = Some(derivative_bound);
                report.top_derivative = Some(top_derivative);
                report.x_hulls = Some(x_table.hulls.clone());
                report.t_hulls = Some(t_table.hulls.clone());
                report.stage(
                    "bound_r",
                    true,
                    format!("R = {derivative_bound} over {subintervals} subintervals"),
                );
                derivative_bound
            }
            Err(e) => {
                report.stage("bound_r", false, e.to_string());
                return finish(report);
            }
        },
    };
    report
        .timing_ms
        .insert("bound_r".into(), started.elapsed().as_millis());

    let started = Instant::now();
    let gap = GapBoundParams::new(r_bound).and_then(|p| find_n0(&p, cfg.n_tail));
    report
        .timing_ms
        .insert("find_n0".into(), started.elapsed().as_millis());
    let gap = match gap {
        Ok(g) => g,
        Err(e) => {
            report.stage("find_n0", false, e.to_string());
            return finish(report);
        }
    };
    report.stage(
        "find_n0",
        gap.verdict,
        format!(
            "n0 = {}, per-n checks through {}, tail certificate {}",
            gap.n0,
            gap.n_tail,
            if gap.tail.valid { "valid" } else { "INVALID" }
        ),
    );
    report.coverage.analytic_from = Some(gap.n0);
    report.coverage.analytic_through = Some(gap.n_tail);
    if gap.tail.valid {
        report.coverage.tail_from = Some(gap.n_tail);
    }
    let n0 = gap.n0;
    report.gap = Some(gap);

    match main_term_coeffs_check() {
        Ok(m) => {
            report.stage("main_term", m.ok, format!("constants re-derived: {}", m.ok));
            report.main_term = Some(m);
        }
        Err(e) => report.stage("main_term", false, e.to_string()),
    }

    // Steps 3..=n0 exactly, so step n0 is proven twice.
    let started = Instant::now();
    let exact_hi = n0.max(3) + 1;
    match verify_range(3, exact_hi) {
        Ok(cert) => {
            report.exact_range = Some((3, exact_hi));
            report.exact_verdict = Some(cert.verdict);
            if cert.verdict {
                report.coverage.exact_steps = Some((3, exact_hi - 1));
            }
            let detail = match cert.steps.iter().find(|s| !s.increasing) {
                None => format!("I(n+1) > I(n) for 3 <= n <= {}", exact_hi - 1),
                Some(s) => format!("step at n = {} is not increasing", s.n),
            };
            report.stage("verify_exact", cert.verdict, detail);
        }
        Err(e) => report.stage("verify_exact", false, e.to_string()),
    }
    report
        .timing_ms
        .insert("verify_exact".into(), started.elapsed().as_millis());

    let complete = report.coverage.is_complete();
    report.stage(
        "splice",
        complete,
        format!(
            "exact steps {:?}, analytic from {:?}, tail from {:?}, overlap {} step(s)",
            report.coverage.exact_steps,
            report.coverage.analytic_from,
            report.coverage.tail_from,
            report.coverage.overlap_steps()
        ),
    );
    finish(report)
}

fn finish(mut report: ProofReport) -> ProofReport {
    report.verdict = report.assess();
    report
}
