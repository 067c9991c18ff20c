//! Randomized suites shared by the property and acceptance targets.

use cubeslice::{Interval, TaylorSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub fn random_interval(rng: &mut ChaCha8Rng, min: f64, max: f64) -> Interval {
    let a = rng.gen_range(min..max);
    let w = if rng.gen_bool(0.2) {
        0.0
    } else {
        (max - min) * 10f64.powf(rng.gen_range(-12.0..-0.5))
    };
    let b = (a + w).min(max);
    Interval::new(a.min(b), a.max(b)).unwrap()
}

pub fn random_magnitude_interval(rng: &mut ChaCha8Rng) -> Interval {
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    random_interval(rng, -scale, scale)
}

fn sample_points(rng: &mut ChaCha8Rng, iv: Interval) -> [f64; 3] {
    let t: f64 = rng.gen();
    let inner = (iv.lo() + t * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi());
    [iv.lo(), iv.hi(), inner]
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Containment of exact images under random operations; returns the violations found.
pub fn containment_fuzz(samples: usize, seed: u64) -> Vec<(usize, u32, Interval, Interval)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for i in 0..samples {
        let op: u32 = rng.gen_range(0..11);
        let a = random_magnitude_interval(&mut rng);
        let b = random_magnitude_interval(&mut rng);
        let pa = sample_points(&mut rng, a);
        let pb = sample_points(&mut rng, b);
        let ok = match op {
            0 => pa.iter().zip(&pb).all(|(&x, &y)| interval_contains_ratio(a + b, &(q(x) + q(y)))),
            1 => pa.iter().zip(&pb).all(|(&x, &y)| interval_contains_ratio(a - b, &(q(x) - q(y)))),
            2 => pa.iter().zip(&pb).all(|(&x, &y)| interval_contains_ratio(a * b, &(q(x) * q(y)))),
            3 => match a.div(b) {
                Ok(r) => pa.iter().zip(&pb).all(|(&x, &y)| interval_contains_ratio(r, &(q(x) / q(y)))),
                Err(_) => b.contains_zero(),
            },
            4 => {
                let k = rng.gen_range(-5..=9);
                match a.pow_int(k) {
                    Ok(r) => pa.iter().all(|&x| {
                        let base = q(x);
                        let p = if k >= 0 {
                            (0..k).fold(BigRational::one(), |acc, _| acc * &base)
                        } else {
                            BigRational::one() / (0..-k).fold(BigRational::one(), |acc, _| acc * &base)
                        };
                        interval_contains_ratio(r, &p)
                    }),
                    Err(_) => k < 0 && a.contains_zero(),
                }
            }
            5 => {
                let x = random_interval(&mut rng, -50.0, 50.0);
                let r = x.exp().unwrap();
                sample_points(&mut rng, x).iter().all(|&p| encloses(r, &exp(p)))
            }
            6 => {
                let x = random_interval(&mut rng, 1e-6, 1e6);
                let r = x.ln().unwrap();
                sample_points(&mut rng, x).iter().all(|&p| encloses(r, &ln(p)))
            }
            7 => {
                let x = random_interval(&mut rng, 0.0, 1e6);
                let r = x.sqrt().unwrap();
                sample_points(&mut rng, x)
                    .iter()
                    .all(|&p| encloses(r, &Fx::from_f64(p).sqrt()))
            }
            8 | 9 => {
                let x = random_interval(&mut rng, -100.0, 100.0);
                let r = if op == 8 { x.sin() } else { x.cos() }.unwrap();
                sample_points(&mut rng, x).iter().all(|&p| {
                    let (s, c) = sin_cos(p);
                    encloses(r, if op == 8 { &s } else { &c })
                })
            }
            _ => {
                let r = a.square();
                pa.iter().all(|&x| interval_contains_ratio(r, &(q(x) * q(x))))
            }
        };
        if !ok {
            violations.push((i, op, a, b));
        }
    }
    violations
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-40i64..=40);
    let den = rng.gen_range(1i64..=24);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    (0..=degree).map(|_| random_rational(rng)).collect()
}

pub fn series_of(center: Interval, p: &Poly) -> TaylorSeries {
    TaylorSeries::new(center, p.iter().map(rational_to_interval).collect()).unwrap()
}

pub fn contains_all(s: &TaylorSeries, exact: &Poly) -> bool {
    s.coeffs()
        .iter()
        .zip(exact)
        .all(|(c, e)| interval_contains_ratio(*c, e))
}

/// Faà di Bruno composition of random degree-7 rational polynomials against exact composition.
pub fn composition_cases(cases: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let inner = random_poly(&mut rng, 7);
        let outer = random_poly(&mut rng, 7);
        let f = series_of(Interval::ZERO, &inner);
        let g = series_of(f.coeff(0), &outer);
        let composed = TaylorSeries::compose(&g, &f).unwrap();
        if !contains_all(&composed, &poly_compose(&outer, &inner)) {
            bad.push(case);
        }
    }
    bad
}

/// Series inversion of random degree-7 rational polynomials against exact reversion.
pub fn inversion_cases(cases: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut checked = 0;
    while checked < cases {
        let x = random_poly(&mut rng, 7);
        if x[1].is_zero() {
            continue;
        }
        let center = random_rational(&mut rng);
        let t = series_of(Interval::ZERO, &x)
            .invert(rational_to_interval(&center))
            .unwrap();
        if !contains_all(&t, &poly_invert(&x, &center)) {
            bad.push(checked);
        }
        checked += 1;
    }
    bad
}

