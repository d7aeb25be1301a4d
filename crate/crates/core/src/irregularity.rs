//! Counting indices with small discrepancy.
//!
//! Everything here rests on the block-count sandwich
//! `|n|/2 ≤ d_n ≤ 2|n|`, where `|n|` is the number of maximal runs of 1s in
//! the binary expansion (see [`crate::numerics::binary`]), and on the exact
//! count `C(k+1, 2ℓ−1)` of integers in `[2^k, 2^(k+1))` with `ℓ` runs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bit_len, block_count, decide, enumerate_low_block, Dyadic, Interval, Rational};
use crate::pairs;
use crate::report::{Check, Witness};
use crate::sweep;
use crate::vdc::{d_explicit_big, d_recurrence, d_stream, ScaledRule, D_SCALE};

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of integers in `[2^k, 2^(k+1))` with exactly `blocks` runs of 1s.
pub fn a_count(k: u32, blocks: u32) -> BigUint {
    binomial(k as u64 + 1, 2 * blocks as i64 - 1)
}

/// `|n|/2 ≤ d_n ≤ 2|n|` for every `1 ≤ n < limit`.
pub fn verify_block_bounds(limit: u64) -> Check {
    let exp = bit_len(limit).max(1);
    sweep::first_failure(1, limit, |a, b| {
        d_stream(a, b, exp).find_map(|(n, v)| {
            let blocks = (block_count(n) as u128) << exp;
            (blocks > 2 * v || v > 2 * blocks).then(|| {
                (
                    n,
                    format!(
                        "d_n = {} outside [{}/2, {}]",
                        Dyadic::from_scaled(v, exp),
                        block_count(n),
                        2 * block_count(n)
                    ),
                )
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// `d_n / |n|` on the two extremal families: `(01)^k` for the lower
/// constant and `(0^k 1^k)^k` for the upper one.
pub fn tightness_probe(k: u32) -> (Rational, Rational) {
    assert!(k >= 1);
    let ratio = |n: &BigUint| {
        let blocks = crate::BinaryWord::from_biguint(n).block_count();
        d_explicit_big(n).to_rational() * Rational::new(1, blocks as i64).expect("nonzero")
    };
    let alternating = ((BigUint::one() << (2 * k)) - 1u32) / 3u32;
    let run = (BigUint::one() << k) - 1u32;
    let mut wide = BigUint::zero();
    for i in 0..k {
        wide += &run << (2 * k * i);
    }
    (ratio(&alternating), ratio(&wide))
}

/// Stirling bounds `√(2π)·n^(n+1/2)·e^(−n) ≤ n! ≤ e·n^(n+1/2)·e^(−n)`.
///
/// Compared in the log domain. At `n = 1` the upper bound is attained
/// exactly, which is decided symbolically.
pub fn robbins_check(n: u64) -> bool {
    assert!(n >= 1);
    let mut fact = BigUint::one();
    for i in 2..=n {
        fact *= i;
    }
    let lower_ok = decide(|prec| {
        let log_fact = Interval::from_int(BigInt::from(fact.clone()), prec).ln()?;
        let stirling = stirling_log(n, prec);
        let two_pi = Interval::pi(prec).mul_int(2);
        let lower = two_pi.ln()?.div_int(2).add(&stirling);
        ordered_le(&lower, &log_fact)
    });
    if n == 1 {
        return lower_ok;
    }
    let upper_ok = decide(|prec| {
        let log_fact = Interval::from_int(BigInt::from(fact.clone()), prec).ln()?;
        let upper = Interval::from_int(1, prec).add(&stirling_log(n, prec));
        ordered_le(&log_fact, &upper)
    });
    lower_ok && upper_ok
}

/// `(n + 1/2)·ln n − n`.
fn stirling_log(n: u64, prec: u32) -> Interval {
    let ln_n = Interval::from_int(n, prec).ln().expect("n >= 1");
    ln_n.mul_int(2 * n as i64 + 1)
        .div_int(2)
        .sub(&Interval::from_int(n, prec))
}

/// `Some(a <= b)` when the enclosures are separated.
fn ordered_le(a: &Interval, b: &Interval) -> Option<bool> {
    match a.certain_cmp(b) {
        Some(Ordering::Greater) => Some(false),
        Some(_) => Some(true),
        None => None,
    }
}

/// The large-deviation estimate for one binomial coefficient:
/// `(1/(3√k))·(α^(−α)/(1−α)^(1−β))^k ≤ C(k,ℓ) ≤ (β^(−β)/(1−β)^(1−α))^k`.
///
/// Returns `Err(Error::Hypothesis)` when `(k, ℓ, α, β)` violates
/// `k, ℓ ≥ 1`, `0 < α ≤ β ≤ 1/e`, `αk ≤ ℓ ≤ βk`; `Ok(false)` means the
/// inequality itself failed.
pub fn binom_bounds_check(k: u64, ell: u64, alpha: &Rational, beta: &Rational) -> Result<bool> {
    let hyp = |msg: String| Err(Error::Hypothesis(msg));
    if k == 0 || ell == 0 {
        return hyp(format!("k = {k} and l = {ell} must be positive"));
    }
    if alpha.cmp_int(0) != Ordering::Greater || alpha > beta {
        return hyp(format!("need 0 < alpha <= beta, got alpha = {alpha}, beta = {beta}"));
    }
    // beta <= 1/e, i.e. ln beta <= -1; beta = 1/e is impossible for a rational
    let beta_small = decide(|prec| {
        let l = Interval::from_rational(beta, prec).ln()?;
        ordered_le(&l, &Interval::from_int(-1, prec))
    });
    if !beta_small {
        return hyp(format!("beta = {beta} exceeds 1/e"));
    }
    let kr = Rational::from_int(k);
    let lr = Rational::from_int(ell);
    if alpha * &kr > lr || lr > beta * &kr {
        return hyp(format!("need alpha*k <= l <= beta*k, got k = {k}, l = {ell}"));
    }
    let c = BigInt::from(binomial(k, ell as i64));
    let ok = decide(|prec| {
        let log_c = Interval::from_int(c.clone(), prec).ln()?;
        let one = Interval::from_int(1, prec);
        let a = Interval::from_rational(alpha, prec);
        let b = Interval::from_rational(beta, prec);
        let (ln_a, ln_b) = (a.ln()?, b.ln()?);
        let ln_1a = one.sub(&a).ln()?;
        let ln_1b = one.sub(&b).ln()?;
        let kk = k as i64;
        // k·(−α ln α − (1−β) ln(1−α)) − ln 3 − (1/2) ln k
        let lower = a
            .mul(&ln_a)
            .neg()
            .sub(&one.sub(&b).mul(&ln_1a))
            .mul_int(kk)
            .sub(&Interval::from_int(3, prec).ln()?)
            .sub(&Interval::from_int(k, prec).ln()?.div_int(2));
        // k·(−β ln β − (1−α) ln(1−β))
        let upper = b.mul(&ln_b).neg().sub(&one.sub(&a).mul(&ln_1b)).mul_int(kk);
        Some(ordered_le(&lower, &log_c)? && ordered_le(&log_c, &upper)?)
    });
    Ok(ok)
}

/// `(−β ln β − (1−β) ln(1−β)) / ln 2`, the binary entropy of `β`.
///
/// `None` unless `0 < β < 1` holds for the whole enclosure.
pub fn exponent_constant(beta: &Interval) -> Option<Interval> {
    let prec = beta.prec();
    let one = Interval::from_int(1, prec);
    let rest = one.sub(beta);
    let h = beta.mul(&beta.ln()?).add(&rest.mul(&rest.ln()?)).neg();
    h.div(&Interval::ln2(prec))
}

/// Where the logarithmic threshold is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogMode {
    /// `θ(n) = ε·ln n`, one threshold per index.
    Index,
    /// `θ = ε·ln(limit)`, one threshold for the whole window.
    Window,
}

impl FromStr for LogMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index" => Ok(LogMode::Index),
            "window" => Ok(LogMode::Window),
            _ => Err(Error::Parse {
                kind: "mode",
                input: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Absolute(Rational),
    Log { epsilon: Rational, mode: LogMode },
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Absolute(t) => write!(f, "{t}"),
            Threshold::Log {
                epsilon,
                mode: LogMode::Index,
            } => write!(f, "{epsilon}*ln(n)"),
            Threshold::Log {
                epsilon,
                mode: LogMode::Window,
            } => write!(f, "{epsilon}*ln(limit)"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Pruned,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "pruned" => Ok(Method::Pruned),
            _ => Err(Error::Parse {
                kind: "method",
                input: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Pruned => "pruned",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub limit: u64,
    pub threshold: Threshold,
    pub count: u64,
    pub method: Method,
    /// `ln count / ln limit`; `None` for an empty census.
    pub empirical_exponent: Option<f64>,
}

impl CensusReport {
    /// The exponent as printed in tables: `"undefined"` for an empty census.
    pub fn exponent_text(&self) -> String {
        match self.empirical_exponent {
            Some(e) => crate::numerics::fmt_f64(e),
            None => "undefined".to_string(),
        }
    }
}

/// Decides `d ≤ θ(n)` for one index; built once per census.
struct ThresholdTest {
    kind: TestKind,
}

enum TestKind {
    /// `v ≤ bound` on the fixed-point numerator; `None` admits nothing.
    Scaled(Option<u128>),
    /// `d ≤ ε·ln(arg)`, with `arg = n` or a fixed window argument.
    Log {
        epsilon: Rational,
        eps_f64: f64,
        window: Option<u64>,
    },
}

impl ThresholdTest {
    fn new(threshold: &Threshold, limit: u64, exp: u32) -> Self {
        let kind = match threshold {
            Threshold::Absolute(t) => {
                let scaled = (t * &Rational::from_int(BigInt::one() << exp)).floor();
                // a negative threshold admits nothing; a huge one admits everything
                TestKind::Scaled((scaled >= BigInt::zero()).then(|| scaled.to_u128().unwrap_or(u128::MAX)))
            }
            Threshold::Log { epsilon, mode } => TestKind::Log {
                epsilon: epsilon.clone(),
                eps_f64: epsilon.to_f64(),
                window: (*mode == LogMode::Window).then_some(limit),
            },
        };
        ThresholdTest { kind }
    }

    fn admits(&self, n: u64, v: u128, exp: u32) -> bool {
        match &self.kind {
            TestKind::Scaled(bound) => bound.is_some_and(|b| v <= b),
            TestKind::Log {
                epsilon,
                eps_f64,
                window,
            } => {
                let arg = window.unwrap_or(n);
                if arg <= 1 {
                    // θ = 0 and d_n ≥ 1 for n ≥ 1
                    return v == 0;
                }
                let d = v as f64 / 2f64.powi(exp as i32);
                let theta = eps_f64 * (arg as f64).ln();
                let margin = 1e-9 * theta.abs().max(1.0);
                if d < theta - margin {
                    return true;
                }
                if d > theta + margin {
                    return false;
                }
                // ε·ln(arg) is irrational for arg ≥ 2, so a tie cannot occur
                let d = Dyadic::from_scaled(v, exp).to_rational();
                decide(|prec| {
                    let theta = Interval::from_int(arg, prec)
                        .ln()?
                        .mul(&Interval::from_rational(epsilon, prec));
                    ordered_le(&Interval::from_rational(&d, prec), &theta)
                })
            }
        }
    }

    /// Largest `θ` over indices below `limit`: an upper bound, good enough
    /// for pruning.
    fn max_theta(&self, limit: u64, exp: u32) -> f64 {
        match &self.kind {
            TestKind::Scaled(bound) => bound.map_or(-1.0, |b| b as f64 / 2f64.powi(exp as i32)),
            TestKind::Log { eps_f64, .. } => eps_f64 * (limit as f64).ln(),
        }
    }
}

/// Counts `1 ≤ n < limit` with `d_n ≤ θ(n)`.
///
/// `Method::Pruned` only visits integers with at most `⌊2·max θ⌋` runs of
/// 1s; every other index has `d_n ≥ |n|/2 > θ`.
pub fn census(limit: u64, threshold: &Threshold, method: Method) -> CensusReport {
    assert!(limit >= 2);
    let exp = bit_len(limit).max(1);
    let test = ThresholdTest::new(threshold, limit, exp);
    let count = match method {
        Method::Direct => sweep::chunks(1, limit, |a, b| {
            d_stream(a, b, exp).filter(|&(n, v)| test.admits(n, v, exp)).count() as u64
        })
        .into_iter()
        .sum(),
        Method::Pruned => {
            // small safety margin: max_theta is a double-precision estimate
            let cap = 2.0 * test.max_theta(limit, exp) * (1.0 + 1e-12) + 1e-12;
            let max_blocks = if cap >= 64.0 { 64 } else { cap.floor().max(0.0) as u32 };
            if max_blocks == 0 {
                0
            } else {
                let rule = ScaledRule::new(exp);
                let candidates: Vec<u64> = enumerate_low_block(limit, max_blocks).collect();
                candidates
                    .par_chunks(4096)
                    .map(|chunk| {
                        chunk
                            .iter()
                            .filter(|&&n| test.admits(n, pairs::eval(&rule, n), exp))
                            .count() as u64
                    })
                    .sum()
            }
        }
    };
    let empirical_exponent = (count > 0).then(|| (count as f64).ln() / (limit as f64).ln());
    CensusReport {
        limit,
        threshold: threshold.clone(),
        count,
        method,
        empirical_exponent,
    }
}

/// Counts of `N` in `[2^k, 2^(k+1))` with `d_N ≤ t`, and the two block-count
/// sums that must enclose it: `ℓ ≤ t/2` below and `ℓ ≤ 2t` above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sandwich {
    pub lower: BigUint,
    pub count: u64,
    pub upper: BigUint,
}

pub fn sandwich(k: u32, t: &Rational) -> Sandwich {
    assert!(k <= 40, "exhaustive count limited to k <= 40");
    let lo = 1u64 << k;
    let hi = lo << 1;
    let exp = bit_len(hi);
    let test = ThresholdTest::new(&Threshold::Absolute(t.clone()), hi, exp);
    let count: u64 = sweep::chunks(lo, hi, |a, b| {
        d_stream(a, b, exp).filter(|&(n, v)| test.admits(n, v, exp)).count() as u64
    })
    .into_iter()
    .sum();
    let block_sum = |r: Rational| -> BigUint {
        let m = r.floor();
        let m = if m < BigInt::one() {
            0
        } else {
            m.to_u32().unwrap_or(u32::MAX).min(k + 1)
        };
        (1..=m).map(|l| a_count(k, l)).sum()
    };
    Sandwich {
        lower: block_sum(t * &Rational::frac(1, 2)),
        count,
        upper: block_sum(t * &Rational::from_int(2)),
    }
}

pub fn sandwich_check(k: u32, t: &Rational) -> Check {
    let s = sandwich(k, t);
    let c = BigUint::from(s.count);
    if s.lower <= c && c <= s.upper {
        Ok(())
    } else {
        Err(Witness::msg(format!(
            "k = {k}, t = {t}: {} <= {} <= {} fails",
            s.lower, s.count, s.upper
        )))
    }
}

/// `Φ(x)`, the standard normal distribution function.
///
/// For `|x| < 5` the positive-term series
/// `Φ(x) = 1/2 + φ(x)·Σ x^(2n+1)/(1·3·…·(2n+1))`; beyond that the
/// continued fraction of the Mills ratio. Absolute error below `1e-15`.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x.abs() < 5.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-17 * sum.abs() {
            n += 1.0;
            term *= x2 / (2.0 * n + 1.0);
            sum += term;
        }
        0.5 + density * sum
    } else {
        let z = x.abs();
        // Mills ratio R(z) = 1/(z+ 1/(z+ 2/(z+ 3/(z+ …)))), evaluated bottom-up
        let mut frac = z;
        for k in (1..=80).rev() {
            frac = z + k as f64 / frac;
        }
        let tail = density / frac;
        if x > 0.0 {
            1.0 - tail
        } else {
            tail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub empirical_cdf: f64,
    pub normal_cdf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CltReport {
    pub limit: u64,
    pub samples: u64,
    pub rows: Vec<HistogramRow>,
    /// `sup_y |F_emp(y) − Φ(y)|` over the exact empirical step function.
    pub ks_distance: f64,
}

/// `y_N = (d_N − (1/4)log₂N) / ((1/(4√3))·√(log₂N))`.
pub fn normalized(n: u64, d: f64) -> f64 {
    let l = (n as f64).log2();
    (d - 0.25 * l) / (l.sqrt() / (4.0 * 3f64.sqrt()))
}

/// Normalized discrepancies for `2 ≤ N < limit`, sorted ascending.
pub fn normalized_sample(limit: u64) -> Vec<f64> {
    assert!(limit >= 4);
    let scale = 2f64.powi(D_SCALE as i32);
    let mut ys: Vec<f64> = sweep::chunks(2, limit, |a, b| {
        d_stream(a, b, D_SCALE)
            .map(|(n, v)| normalized(n, v as f64 / scale))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    ys.par_sort_unstable_by(f64::total_cmp);
    ys
}

/// Kolmogorov–Smirnov distance of a sorted sample to `Φ`.
pub fn ks_distance(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .par_iter()
        .enumerate()
        .map(|(i, &y)| {
            let phi = normal_cdf(y);
            ((i + 1) as f64 / n - phi).max(phi - i as f64 / n)
        })
        .reduce(|| 0.0, f64::max)
}

/// Binned empirical distribution of the normalized discrepancy, bins of
/// equal width over the sample range.
pub fn clt_histogram(limit: u64, bins: usize) -> CltReport {
    assert!(bins >= 1);
    let ys = normalized_sample(limit);
    let (lo, hi) = (ys[0], ys[ys.len() - 1]);
    let width = (hi - lo) / bins as f64;
    let total = ys.len() as f64;
    let rows = (0..bins)
        .map(|b| {
            let left = lo + width * b as f64;
            let right = if b + 1 == bins { hi } else { lo + width * (b + 1) as f64 };
            let below = ys.partition_point(|&y| y <= right);
            HistogramRow {
                bin_left: left,
                bin_right: right,
                empirical_cdf: below as f64 / total,
                normal_cdf: normal_cdf(right),
            }
        })
        .collect();
    CltReport {
        limit,
        samples: ys.len() as u64,
        rows,
        ks_distance: ks_distance(&ys),
    }
}

/// Exact `d_n ≤ t` test for a single index, for callers outside a sweep.
pub fn below_threshold(n: u64, threshold: &Threshold, limit: u64) -> bool {
    let exp = bit_len(n.max(limit)).max(1);
    let v = d_recurrence(n).scaled_num(exp).to_u128().expect("fits in u128");
    ThresholdTest::new(threshold, limit, exp).admits(n, v, exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::enumerate_by_blocks;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(3, 3), BigUint::from(1u32));
        assert_eq!(binomial(5, 3), BigUint::from(10u32));
        assert_eq!(binomial(2, -1), BigUint::zero());
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(100, 7), BigUint::from(16_007_560_800u64));
    }

    #[test]
    fn a_count_matches_enumeration() {
        assert_eq!(a_count(2, 1), BigUint::from(3u32));
        assert_eq!(a_count(2, 2), BigUint::from(1u32));
        assert_eq!(a_count(4, 2), BigUint::from(10u32));
        for k in 0..=14 {
            let mut total = BigUint::zero();
            for l in 1..=(k + 2) / 2 + 1 {
                let c = a_count(k, l);
                assert_eq!(c, BigUint::from(enumerate_by_blocks(k, l).len()), "k={k} l={l}");
                total += c;
            }
            assert_eq!(total, BigUint::one() << k);
        }
    }

    #[test]
    fn block_bounds_small() {
        assert_eq!(verify_block_bounds(32), Ok(()));
        assert_eq!(verify_block_bounds(1 << 15), Ok(()));
    }

    #[test]
    fn tightness_examples() {
        assert_eq!(tightness_probe(1), (Rational::one(), Rational::one()));
        assert_eq!(tightness_probe(2).0, Rational::frac(7, 8));
        assert_eq!(tightness_probe(3).0, Rational::frac(13, 16));
        let mut prev = tightness_probe(2);
        for k in 3..9 {
            let cur = tightness_probe(k);
            assert!(cur.0 < prev.0 && cur.0 > Rational::frac(2, 3));
            assert!(cur.1 > prev.1 && cur.1 < Rational::from_int(2));
            prev = cur;
        }
    }

    #[test]
    fn robbins_examples() {
        for n in [1, 2, 3, 10, 100] {
            assert!(robbins_check(n), "n={n}");
        }
    }

    #[test]
    fn binom_bounds_examples() {
        let r = |s: &str| Rational::parse_decimal(s).unwrap();
        assert_eq!(binom_bounds_check(100, 7, &r("0.05"), &r("0.1")), Ok(true));
        assert_eq!(binom_bounds_check(50, 5, &r("0.1"), &r("0.1")), Ok(true));
        assert_eq!(binom_bounds_check(10, 1, &r("0.05"), &r("0.1")), Ok(true));
        assert!(matches!(
            binom_bounds_check(10, 1, &r("0.2"), &r("0.1")),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            binom_bounds_check(10, 1, &r("0.05"), &r("0.4")),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            binom_bounds_check(10, 3, &r("0.05"), &r("0.1")),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn exponent_constants() {
        let p = 192;
        let ln2 = Interval::ln2(p);
        let upper = exponent_constant(&ln2.mul_int(4).div_int(100)).unwrap();
        assert!(upper.certainly_lt(&Interval::from_rational(&Rational::frac(183, 1000), p)));
        assert!((upper.mid_f64() - 0.182_85).abs() < 1e-4);
        let lower = exponent_constant(&ln2.div_int(100)).unwrap();
        assert!(Interval::from_rational(&Rational::frac(56, 1000), p).certainly_lt(&lower));
        let half = exponent_constant(&Interval::from_rational(&Rational::frac(1, 2), p)).unwrap();
        assert!(half.contains_rational(&Rational::one()));
        assert!(half.width_f64() < 1e-40);
    }

    #[test]
    fn census_examples() {
        let abs = |t| Threshold::Absolute(t);
        for method in [Method::Direct, Method::Pruned] {
            assert_eq!(census(32, &abs(Rational::one()), method).count, 5);
            assert_eq!(census(32, &abs(Rational::frac(3, 2)), method).count, 9);
            let eps = Threshold::Log {
                epsilon: Rational::frac(1, 100),
                mode: LogMode::Index,
            };
            let r = census(1 << 20, &eps, method);
            assert_eq!(r.count, 0);
            assert_eq!(r.empirical_exponent, None);
            assert_eq!(r.exponent_text(), "undefined");
        }
        assert_eq!(census(32, &abs(Rational::frac(-1, 2)), Method::Direct).count, 0);
        assert_eq!(census(32, &abs(Rational::from_int(1000)), Method::Pruned).count, 31);
    }

    #[test]
    fn census_methods_agree() {
        let thresholds = [
            Threshold::Absolute(Rational::frac(5, 2)),
            Threshold::Absolute(Rational::frac(7, 4)),
            Threshold::Log {
                epsilon: Rational::frac(1, 4),
                mode: LogMode::Index,
            },
            Threshold::Log {
                epsilon: Rational::frac(1, 4),
                mode: LogMode::Window,
            },
            Threshold::Log {
                epsilon: Rational::frac(1, 10),
                mode: LogMode::Window,
            },
        ];
        for t in &thresholds {
            for limit in [2, 100, 5000, 1 << 17] {
                let a = census(limit, t, Method::Direct).count;
                let b = census(limit, t, Method::Pruned).count;
                assert_eq!(a, b, "limit {limit} threshold {t}");
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let s = sandwich(4, &Rational::one());
        assert_eq!((s.lower, s.count, s.upper), (BigUint::zero(), 1, BigUint::from(15u32)));
        assert_eq!(sandwich_check(4, &Rational::from_int(2)), Ok(()));
        let z = sandwich(4, &Rational::zero());
        assert_eq!((z.lower, z.count, z.upper), (BigUint::zero(), 0, BigUint::zero()));
        for k in 1..=12 {
            for t in [(1, 1), (3, 2), (2, 1), (5, 2), (3, 1)] {
                assert_eq!(sandwich_check(k, &Rational::frac(t.0, t.1)), Ok(()));
            }
        }
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        // reference values (erfc-based, 20 digits)
        let cases = [
            (1.0, 0.841_344_746_068_542_9),
            (-1.96, 0.024_997_895_148_220_435),
            (3.0, 0.998_650_101_968_369_9),
            (-6.0, 9.865_876_450_376_98e-10),
            (8.0, 0.999_999_999_999_999_4),
        ];
        for (x, want) in cases {
            assert!((normal_cdf(x) - want).abs() < 1e-15, "x={x}: {}", normal_cdf(x));
        }
        for i in -80..80 {
            let x = i as f64 / 10.0;
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn clt_small() {
        let y2 = normalized(2, 1.0);
        assert!((y2 - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        let r = clt_histogram(1 << 12, 16);
        assert_eq!(r.rows.len(), 16);
        assert_eq!(r.samples, (1 << 12) - 2);
        assert_eq!(r.rows.last().unwrap().empirical_cdf, 1.0);
        assert!(r.rows.windows(2).all(|w| w[0].empirical_cdf <= w[1].empirical_cdf));
        assert!(r.ks_distance > 0.0 && r.ks_distance < 1.0);
    }

    #[test]
    fn single_threshold_test() {
        let t = Threshold::Absolute(Rational::frac(3, 2));
        assert!(below_threshold(24, &t, 32));
        assert!(!below_threshold(5, &t, 32));
    }
}
