//! The summatory function `S(N) = d_1 + … + d_N`, its doubling law, and the
//! periodic fluctuation `ψ` with `S(N)/N = (1/4)log₂N + d_N/(2N) + ψ(log₂N)`.
//!
//! With `S'(N) = S(N) − d_N/2` the doubling law is exact:
//! `S'(2N) = 2S'(N) + N/2`. Consequently `R(N) = S'(N)/N − (1/4)log₂N`
//! satisfies `R(2N) = R(N)`, and `ψ` is `R` read on the fractional part of
//! `log₂N`. The level-`k` approximant `ψ_k` samples `R` on `[2^(k−1), 2^k)`.
//!
//! The second half of the module does the same for Stern's diatomic
//! sequence, whose partial sums triple under doubling.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bit_len, decide, reverse, Dyadic, Interval, Rational, DEFAULT_PREC};
use crate::pairs::{self, PairRule, PairStream};
use crate::report::{Check, Witness};
use crate::sweep;
use crate::vdc::d_stream;

/// `(S'(n), S'(n+1), d_n, d_{n+1})` by doubling along the bits of `n`.
fn s_prime_state(n: u64) -> [Dyadic; 4] {
    let one = Dyadic::one();
    // state for m = 0: S'(0) = 0, S'(1) = 1/2, d_0 = 0, d_1 = 1
    let (mut s0, mut s1) = (Dyadic::zero(), Dyadic::new(1, 1));
    let (mut d0, mut d1) = (Dyadic::zero(), one.clone());
    let mut m: u64 = 0;
    for i in (0..bit_len(n)).rev() {
        let d_odd = (&(&d0 + &d1) + &one).half();
        let s_even = &s0.shl(1) + &Dyadic::new(m, 1);
        let s_odd = &s_even + &(&d0 + &d_odd).half();
        if (n >> i) & 1 == 0 {
            s1 = s_odd;
            s0 = s_even;
            d1 = d_odd;
            m *= 2;
        } else {
            s0 = s_odd;
            s1 = &s1.shl(1) + &Dyadic::new(m + 1, 1);
            d0 = d_odd;
            m = 2 * m + 1;
        }
    }
    [s0, s1, d0, d1]
}

/// `S(N)` exactly, in `O(log N)` steps.
pub fn summatory(n: u64) -> Dyadic {
    let [s, _, d, _] = s_prime_state(n);
    &s + &d.half()
}

/// `S'(N) = S(N) − d_N/2`.
pub fn s_prime(n: u64) -> Dyadic {
    s_prime_state(n)[0].clone()
}

/// One step of a fixed-point sweep: `d_n`, `d_{n+1}` and `S'(n)`, all scaled
/// by the same `2^exp`.
#[derive(Clone, Copy, Debug)]
struct SPoint {
    n: u64,
    d: u128,
    d_next: u128,
    s: u128,
}

/// Fixed-point sweep over `n` in `[start, end)`.
fn s_prime_stream(start: u64, end: u64, exp: u32) -> impl Iterator<Item = SPoint> {
    let s0: u128 = s_prime(start).scaled_num(exp).try_into().expect("S' fits in u128");
    let mut ds = d_stream(start, end + 1, exp).peekable();
    let mut s = s0;
    std::iter::from_fn(move || {
        let (n, d) = ds.next()?;
        let (_, d_next) = *ds.peek()?;
        let out = SPoint { n, d, d_next, s };
        s += (d + d_next) >> 1;
        Some(out)
    })
}

/// Scale that keeps every `d_n` and `S'(n)` with `n < end` exact.
fn s_scale(end: u64) -> u32 {
    bit_len(end) + 1
}

/// `S'(2N) = 2S'(N) + N/2` for every `1 ≤ N < limit`.
pub fn check_s_doubling(limit: u64) -> Check {
    let exp = s_scale(2 * limit);
    let half = 1u128 << (exp - 1);
    sweep::first_failure(1, limit, |a, b| {
        let mut evens = s_prime_stream(2 * a, 2 * b, exp).step_by(2);
        s_prime_stream(a, b, exp).find_map(|SPoint { n, s, .. }| {
            let s2 = evens.next().expect("stream length").s;
            (s2 != 2 * s + n as u128 * half).then(|| {
                (
                    n,
                    format!(
                        "S'(2N) = {} but 2S'(N) + N/2 = {}",
                        Dyadic::from_scaled(s2, exp),
                        Dyadic::from_scaled(2 * s + n as u128 * half, exp)
                    ),
                )
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// `S'(2N)/(2N) − S'(N)/N = 1/4` for every `1 ≤ N < limit`, cross-multiplied
/// by `4·2N` so that it is an identity between integers.
pub fn check_r_invariance(limit: u64) -> Check {
    let exp = s_scale(2 * limit);
    let unit = 1i128 << exp;
    sweep::first_failure(1, limit, |a, b| {
        let mut evens = s_prime_stream(2 * a, 2 * b, exp).step_by(2);
        s_prime_stream(a, b, exp).find_map(|SPoint { n, s, .. }| {
            let s2 = evens.next().expect("stream length").s;
            let n = n as i128;
            // 4·S'(2N) − 8·S'(N) = 2N
            let lhs = 4 * s2 as i128 - 8 * s as i128;
            (lhs != 2 * n * unit).then(|| {
                let r2 = Dyadic::from_scaled(s2, exp).to_rational() * Rational::new(1, 2 * n).expect("n > 0");
                let r1 = Dyadic::from_scaled(s, exp).to_rational() * Rational::new(1, n).expect("n > 0");
                (n as u64, format!("S'(2N)/(2N) − S'(N)/N = {}", r2 - r1))
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// For `N = N₀·2^j` with `N₀` odd:
/// `S(N)/N − d_N/(2N) − S'(N₀)/N₀ = j/4`, for every `1 ≤ N < limit`.
pub fn check_theorem3(limit: u64) -> Check {
    let exp = s_scale(limit);
    let unit = 1i128 << exp;
    // S'(N₀) for every N₀ < limit, needed out of order
    let table: Vec<u128> = s_prime_stream(0, limit, exp).map(|p| p.s).collect();
    sweep::first_failure(1, limit, |a, b| {
        // S(N) accumulated from d alone, independently of the table
        let mut sum: u128 = summatory(a - 1).scaled_num(exp).try_into().expect("fits");
        d_stream(a, b, exp).find_map(|(n, d)| {
            sum += d;
            let j = n.trailing_zeros();
            let odd = n >> j;
            let (big_n, n0) = (n as i128, odd as i128);
            let s_n = sum as i128 - (d >> 1) as i128;
            // multiplied through by 4·N·N₀
            let lhs = 4 * s_n * n0 - 4 * table[odd as usize] as i128 * big_n;
            let rhs = j as i128 * big_n * n0 * unit;
            (lhs != rhs).then(|| {
                let diff = Rational::new(BigInt::from(lhs), BigInt::from(4 * big_n * n0 * unit)).expect("nonzero");
                (n, format!("S(N)/N − d_N/(2N) − S'(N₀)/N₀ = {diff}, expected {j}/4"))
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// A value of `ψ` kept exact: `rational − (1/4)·log₂(odd_part)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiValue {
    #[serde(serialize_with = "as_text")]
    pub rational: Rational,
    pub odd_part: u64,
}

fn as_text<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PsiValue {
    /// `R(N)` split along `N = N₀·2^j`: `(S'(N)/N − j/4) − (1/4)log₂N₀`.
    pub fn of(n: u64, s_prime_n: &Dyadic) -> Self {
        assert!(n >= 1);
        let j = n.trailing_zeros();
        let r = s_prime_n.to_rational() * Rational::new(1, n).expect("n > 0");
        PsiValue {
            rational: r - Rational::frac(j as i64, 4),
            odd_part: n >> j,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() - 0.25 * (self.odd_part as f64).log2()
    }

    pub fn enclose(&self, prec: u32) -> Interval {
        let log = Interval::from_int(self.odd_part, prec).log2().expect("odd part >= 1");
        Interval::from_rational(&self.rational, prec).sub(&log.div_int(4))
    }
}

/// One evaluation point of `ψ_k`.
#[derive(Clone, Debug, Serialize)]
pub struct FluctuationSample {
    pub n: u64,
    /// `{log₂ n}`.
    pub frac: f64,
    /// `S'(n)/n`.
    #[serde(serialize_with = "as_text")]
    pub r_rational: Rational,
    pub psi: PsiValue,
    pub psi_value: f64,
    pub level: u32,
    pub error_radius: f64,
}

impl FluctuationSample {
    fn new(n: u64, s_prime_n: &Dyadic, level: u32, error_radius: f64) -> Self {
        let psi = PsiValue::of(n, s_prime_n);
        FluctuationSample {
            n,
            frac: frac_log2(n),
            r_rational: s_prime_n.to_rational() * Rational::new(1, n).expect("n > 0"),
            psi_value: psi.to_f64(),
            psi,
            level,
            error_radius,
        }
    }
}

/// `{log₂ n}`, computed on the mantissa so that no digits cancel.
pub fn frac_log2(n: u64) -> f64 {
    let k = bit_len(n) - 1;
    ((n as f64) / 2f64.powi(k as i32)).log2()
}

/// `ψ_k` on its grid: one sample per `N` in `[2^(k−1), 2^k)`, by increasing
/// `{log₂ N}`. The first sample is `ψ_k(0) = 1/2`.
pub fn psi_sample_level(k: u32) -> Vec<FluctuationSample> {
    assert!((1..=40).contains(&k), "level must be in 1..=40");
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let exp = s_scale(hi);
    sweep::chunks(lo, hi, |a, b| {
        s_prime_stream(a, b, exp)
            .map(|p| FluctuationSample::new(p.n, &Dyadic::from_scaled(p.s, exp), k, 0.0))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Per-level statistics of `ψ_k` gathered in one pass over `[2^(k−1), 2^k)`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelStats {
    pub k: u32,
    /// `max_N |ψ_{k+1}({log₂(2N+1)}) − ψ_k({log₂N})| = max |R(2N+1) − R(N)|`.
    pub cauchy_max: f64,
    pub cauchy_at: u64,
    /// `cauchy_max · 2^k / k`.
    pub m_k: f64,
    /// Largest jump `(d_N + d_{N+1})/(2(N+1))` of `ψ_k` at an integer abscissa.
    pub jump_max: f64,
    /// Largest difference between consecutive grid values of `ψ_k`.
    pub step_max: f64,
}

fn level_stats(k: u32) -> LevelStats {
    assert!((2..=40).contains(&k));
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let exp = k + 3;
    let unit = 2f64.powi(exp as i32);
    let inv_ln2 = std::f64::consts::LOG2_E;
    let one = 1u128 << exp;
    let parts = sweep::chunks(lo, hi, |a, b| {
        let mut best = (0.0f64, a);
        let (mut jump, mut step) = (0.0f64, 0.0f64);
        for SPoint {
            n,
            d: dn,
            d_next: dn1,
            s,
        } in s_prime_stream(a, b, exp)
        {
            let d_odd = (dn + dn1 + one) >> 1; // d_{2N+1}
            let s_even = 2 * s + ((n as u128) << (exp - 1)); // S'(2N)
            let nf = n as f64;
            // R(2N+1) − R(N) = (N(d_N + d_{2N+1}) − S'(2N)) / (2N(2N+1)) − log₂(1 + 1/(2N))/4
            let num = n as i128 * (dn + d_odd) as i128 - s_even as i128;
            let q = num as f64 / unit / (2.0 * nf * (2.0 * nf + 1.0));
            let dev = (q - 0.25 * inv_ln2 * (1.0 / (2.0 * nf)).ln_1p()).abs();
            if dev > best.0 {
                best = (dev, n);
            }
            // consecutive grid values: R(N+1) − R(N)
            let num1 = n as i128 * (dn + dn1) as i128 / 2 - s as i128;
            let q1 = num1 as f64 / unit / (nf * (nf + 1.0));
            if n + 1 < hi {
                step = step.max((q1 - 0.25 * inv_ln2 * (1.0 / nf).ln_1p()).abs());
            }
            jump = jump.max((dn + dn1) as f64 / unit / (2.0 * (nf + 1.0)));
        }
        (best, jump, step)
    });
    let mut best = (0.0f64, lo);
    let (mut jump, mut step) = (0.0f64, 0.0f64);
    for (b, j, s) in parts {
        if b.0 > best.0 {
            best = b;
        }
        jump = jump.max(j);
        step = step.max(s);
    }
    LevelStats {
        k,
        cauchy_max: best.0,
        cauchy_at: best.1,
        m_k: best.0 * 2f64.powi(k as i32) / k as f64,
        jump_max: jump,
        step_max: step,
    }
}

/// The calibrated constant `C` of the Cauchy envelope
/// `|ψ_{k+1}(x_{k+1}) − ψ_k(x_k)| ≤ C·k/2^k`, with `C = 2·max_k M_k`.
#[derive(Clone, Debug, Serialize)]
pub struct CauchyEnvelope {
    pub levels: Vec<LevelStats>,
    pub constant: f64,
    /// `max_k jump_max · 2^k / k`.
    pub jump_constant: f64,
    /// Empirical modulus of continuity: largest grid step on the last level.
    pub modulus: f64,
}

impl CauchyEnvelope {
    pub fn calibrate(k_min: u32, k_max: u32) -> Self {
        assert!(2 <= k_min && k_min <= k_max && k_max <= 40);
        let levels: Vec<LevelStats> = (k_min..=k_max).map(level_stats).collect();
        let constant = 2.0 * levels.iter().map(|l| l.m_k).fold(0.0, f64::max);
        let jump_constant = levels
            .iter()
            .map(|l| l.jump_max * 2f64.powi(l.k as i32) / l.k as f64)
            .fold(0.0, f64::max);
        let modulus = levels.last().expect("at least one level").step_max;
        CauchyEnvelope {
            levels,
            constant,
            jump_constant,
            modulus,
        }
    }

    /// `K_k = C·Σ_{i≥k} i/2^i = C·(k+1)/2^(k−1)`.
    pub fn tail(&self, k: u32) -> f64 {
        self.constant * (k as f64 + 1.0) / 2f64.powi(k as i32 - 1)
    }

    /// Whether every level satisfies `max deviation ≤ C·k/2^k`.
    pub fn check(&self) -> Check {
        check_envelope_levels(&self.levels, self.constant)
    }
}

/// `cauchy_max ≤ c·k/2^k` on each of `levels`.
pub fn check_envelope_levels(levels: &[LevelStats], c: f64) -> Check {
    for l in levels {
        let bound = c * l.k as f64 / 2f64.powi(l.k as i32);
        if l.cauchy_max > bound {
            return Err(Witness::at(
                l.cauchy_at,
                format!(
                    "level {}: deviation {:e} exceeds C·k/2^k = {:e}",
                    l.k, l.cauchy_max, bound
                ),
            ));
        }
    }
    Ok(())
}

pub fn level_statistics(k_min: u32, k_max: u32) -> Vec<LevelStats> {
    (k_min..=k_max).map(level_stats).collect()
}

/// Jumps of `ψ_k` stay below `(2/3 + 2/k)·k/2^k` (from `d_N ≤ (1/3)log₂N + 1`),
/// i.e. the recorded constant `C'` is at most `2/3 + 2/k_min`.
pub fn check_jump_constant(envelope: &CauchyEnvelope) -> Check {
    for l in &envelope.levels {
        let cap = 2.0 / 3.0 + 2.0 / l.k as f64;
        let c = l.jump_max * 2f64.powi(l.k as i32) / l.k as f64;
        if c > cap {
            return Err(Witness::msg(format!("level {}: jump constant {c} above {cap}", l.k)));
        }
    }
    Ok(())
}

/// Largest level accepted by [`psi_eval`]; beyond it `N` no longer fits.
pub const PSI_MAX_LEVEL: u32 = 62;

/// `ψ_k` at the grid point `N_k = max{N ∈ [2^(k−1), 2^k) : {log₂N} ≤ x}`,
/// with radius `2K_k`: `|value − ψ(x)| ≤ 2K_k` for the calibrated `C`.
pub fn psi_eval(x: &Rational, k: u32, envelope: &CauchyEnvelope) -> Result<FluctuationSample> {
    if !(2..=PSI_MAX_LEVEL).contains(&k) {
        return Err(Error::Level {
            level: k,
            min: 2,
            max: PSI_MAX_LEVEL,
        });
    }
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::Range(format!("x = {x} is outside [0, 1]")));
    }
    let n = grid_point(x, k);
    let s = s_prime(n);
    Ok(FluctuationSample::new(n, &s, k, 2.0 * envelope.tail(k)))
}

/// `N_k` for `x` in `[0, 1]`: a double-precision guess corrected by
/// certified comparisons of `log₂N − (k−1)` with `x`.
pub fn grid_point(x: &Rational, k: u32) -> u64 {
    let lo = 1u64 << (k - 1);
    let hi_incl = (1u64 << k) - 1;
    let target = Rational::from_int(k as i64 - 1) + x.clone();
    // log₂N ≤ (k−1) + x; ties only at N = 2^(k−1), where x ≥ 0 makes it true
    let fits = |n: u64| -> bool {
        if n == lo {
            return true;
        }
        decide(|prec| {
            let l = Interval::from_int(n, prec).log2()?;
            match l.certain_cmp(&Interval::from_rational(&target, prec)) {
                Some(Ordering::Greater) => Some(false),
                Some(_) => Some(true),
                None => None,
            }
        })
    };
    let guess = (2f64.powf(k as f64 - 1.0 + x.to_f64())).floor();
    let mut n = if guess.is_finite() {
        (guess as u64).clamp(lo, hi_incl)
    } else {
        hi_incl
    };
    while n > lo && !fits(n) {
        n -= 1;
    }
    while n < hi_incl && fits(n + 1) {
        n += 1;
    }
    n
}

/// On each unit cell `[N, N+1)` the continuous piece
/// `x ↦ S'(N)/x − (1/4)log₂x` of `ψ_k` decreases: its value at `N` exceeds
/// the left limit at `N+1`. Checked for every `N` on level `k`.
pub fn check_piecewise_monotone(k: u32) -> Check {
    assert!((1..=40).contains(&k));
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let exp = s_scale(hi);
    let unit = 2f64.powi(exp as i32);
    sweep::first_failure(lo, hi, |a, b| {
        s_prime_stream(a, b, exp).find_map(|SPoint { n, s, .. }| {
            let nf = n as f64;
            // value(N) − value((N+1)⁻) = S'(N)/(N(N+1)) + (1/4)log₂(1 + 1/N)
            let gap = s as f64 / unit / (nf * (nf + 1.0)) + 0.25 * std::f64::consts::LOG2_E * (1.0 / nf).ln_1p();
            if gap > 1e-300 {
                return None;
            }
            let certified = decide(|prec| {
                let sp = Interval::from_rational(&Dyadic::from_scaled(s, exp).to_rational(), prec);
                let n1 = Interval::from_int(n, prec);
                let n2 = Interval::from_int(n + 1, prec);
                let left = sp.div(&n1)?.sub(&n1.log2()?.div_int(4));
                let right = sp.div(&n2)?.sub(&n2.log2()?.div_int(4));
                match left.certain_cmp(&right) {
                    Some(Ordering::Greater) => Some(true),
                    Some(_) => Some(false),
                    None => None,
                }
            });
            (!certified).then(|| (n, "piece not decreasing".to_string()))
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// `max |S(N)/N − (1/4)log₂N|` over `1 ≤ N < limit` and its first maximizer.
pub fn mean_value_deviation(limit: u64) -> (f64, u64) {
    let exp = s_scale(limit);
    let unit = 2f64.powi(exp as i32);
    sweep::chunks(1, limit, |a, b| {
        let mut best = (f64::NEG_INFINITY, a);
        for SPoint { n, d: dn, s, .. } in s_prime_stream(a, b, exp) {
            let sum = (s + (dn >> 1)) as f64 / unit;
            let dev = (sum / n as f64 - 0.25 * (n as f64).log2()).abs();
            if dev > best.0 {
                best = (dev, n);
            }
        }
        best
    })
    .into_iter()
    .fold((f64::NEG_INFINITY, 0), |acc, b| if b.0 > acc.0 { b } else { acc })
}

/// `|S(N)/N − (1/4)log₂N| < bound` for every `1 ≤ N < limit`.
///
/// Values within `1e-9` of the bound are decided exactly (at powers of two
/// the left side is rational) or with certified enclosures.
pub fn check_mean_value(limit: u64, bound: &Rational) -> Check {
    let exp = s_scale(limit);
    let unit = 2f64.powi(exp as i32);
    let bf = bound.to_f64();
    sweep::first_failure(1, limit, |a, b| {
        s_prime_stream(a, b, exp).find_map(|SPoint { n, d: dn, s, .. }| {
            let sum_scaled = s + (dn >> 1);
            let dev = (sum_scaled as f64 / unit / n as f64 - 0.25 * (n as f64).log2()).abs();
            if dev < bf - 1e-9 {
                return None;
            }
            let mean = Dyadic::from_scaled(sum_scaled, exp).to_rational() * Rational::new(1, n as i64).expect("n > 0");
            let below = if n.is_power_of_two() {
                (mean - Rational::frac(n.trailing_zeros() as i64, 4)).abs() < *bound
            } else {
                decide(|prec| {
                    let v = Interval::from_rational(&mean, prec)
                        .sub(&Interval::from_int(n, prec).log2()?.div_int(4))
                        .abs();
                    match v.certain_cmp(&Interval::from_rational(bound, prec)) {
                        Some(Ordering::Less) => Some(true),
                        Some(_) => Some(false),
                        None => None,
                    }
                })
            };
            (!below).then(|| (n, format!("|S(N)/N − log₂(N)/4| = {dev:.17} is not below {bound}")))
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// Stern's diatomic recurrence `s_1 = s_2 = 1`, `s_{2n+1} = s_n + s_{n+1}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SternRule;

impl PairRule for SternRule {
    type Value = u64;
    const BASE: u64 = 1;

    fn seed(&self) -> (u64, u64) {
        (1, 1)
    }

    fn odd(&self, a: &u64, b: &u64) -> u64 {
        a + b
    }
}

pub fn stern(n: u64) -> u64 {
    assert!(n >= 1, "the diatomic sequence starts at s_1");
    pairs::eval(&SternRule, n)
}

/// `s_n` for `n` in `[start, end)`, `start ≥ 1`.
pub fn stern_stream(start: u64, end: u64) -> PairStream<SternRule> {
    PairStream::new(SternRule, start, end)
}

/// `2·S'(N) = 2(s_1 + … + s_{N−1}) + s_N` for `N = 0 … end−1` (zero at 0).
fn stern_twice_s_prime(end: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(end as usize);
    out.push(0);
    let mut prefix = 0u64;
    for (_, s) in stern_stream(1, end) {
        out.push(2 * prefix + s);
        prefix += s;
    }
    out
}

/// `S'(N)` of the diatomic sequence, a half-integer.
pub fn stern_s_prime(n: u64) -> Dyadic {
    assert!(n >= 1);
    let prefix: u64 = stern_stream(1, n).map(|(_, s)| s).sum();
    Dyadic::new(2 * prefix + stern(n), 1)
}

/// `S'(2N) = 3·S'(N)` for every `1 ≤ N < limit`.
pub fn check_stern_doubling(limit: u64) -> Check {
    let t = stern_twice_s_prime(2 * limit);
    (1..limit)
        .find(|&n| t[2 * n as usize] != 3 * t[n as usize])
        .map_or(Ok(()), |n| {
            Err(Witness::at(
                n,
                format!(
                    "S'(2N) = {} but 3·S'(N) = {}",
                    Dyadic::new(t[2 * n as usize], 1),
                    Dyadic::new(3 * t[n as usize], 1)
                ),
            ))
        })
}

/// `max{s_n : 2^k ≤ n < 2^(k+1)}`.
pub fn stern_max(k: u32) -> u64 {
    assert!(k <= 40);
    stern_stream(1 << k, 1 << (k + 1))
        .map(|(_, s)| s)
        .max()
        .expect("nonempty block")
}

/// `F_n` with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

/// `stern_max(k) = F_{k+2}` for `0 ≤ k ≤ k_max`.
pub fn check_stern_max(k_max: u32) -> Check {
    (0..=k_max)
        .find(|&k| stern_max(k) != fibonacci(k + 2))
        .map_or(Ok(()), |k| {
            Err(Witness::msg(format!(
                "level {k}: max {} but F_{} = {}",
                stern_max(k),
                k + 2,
                fibonacci(k + 2)
            )))
        })
}

/// `s_n = s_{n^R}` for every `1 ≤ n < limit`.
pub fn check_stern_reversal(limit: u64) -> Check {
    sweep::first_failure(1, limit, |a, b| {
        stern_stream(a, b).find_map(|(n, s)| {
            let r = reverse(n).expect("n >= 1");
            let sr = stern(r);
            (s != sr).then(|| (n, format!("s_n = {s} but s_(n^R) = s_{r} = {sr}")))
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// One point of the diatomic fluctuation `ψ_stern({log₂N}) = S'(N)/N^(log₂3)`.
#[derive(Clone, Debug)]
pub struct SternSample {
    pub n: u64,
    pub frac: f64,
    pub s_prime: Dyadic,
    pub value: Interval,
}

/// Certified `S'(N) / N^(log₂3)`, with `N^(log₂3) = exp(ln3 · log₂N)`.
pub fn stern_psi(n: u64, s_prime_n: &Dyadic, prec: u32) -> Interval {
    let wp = prec + 32;
    let power = Interval::from_int(3, wp)
        .ln()
        .expect("positive")
        .mul(&Interval::from_int(n, wp).log2().expect("n >= 1"))
        .exp();
    Interval::from_rational(&s_prime_n.to_rational(), wp)
        .div(&power)
        .expect("power is positive")
        .with_prec(prec)
}

/// `ψ_stern` on the grid `N ∈ [2^(k−1), 2^k)`.
pub fn stern_psi_sample(k: u32) -> Vec<SternSample> {
    assert!((1..=30).contains(&k));
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let t = stern_twice_s_prime(hi);
    sweep::chunks(lo, hi, |a, b| {
        (a..b)
            .map(|n| {
                let sp = Dyadic::new(t[n as usize], 1);
                SternSample {
                    n,
                    frac: frac_log2(n),
                    value: stern_psi(n, &sp, DEFAULT_PREC),
                    s_prime: sp,
                }
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `ψ_stern(N)` and `ψ_stern(2N)`, each evaluated from its own partial sum,
/// agree to within `tol` (certified) for every `N` on level `k`.
pub fn check_stern_psi_invariance(k: u32, tol: f64) -> Check {
    let hi = 1u64 << k;
    let t = stern_twice_s_prime(2 * hi);
    let tol_iv = Interval::from_f64(tol, DEFAULT_PREC);
    sweep::first_failure(hi / 2, hi, |a, b| {
        (a..b).find_map(|n| {
            let v1 = stern_psi(n, &Dyadic::new(t[n as usize], 1), DEFAULT_PREC);
            let v2 = stern_psi(2 * n, &Dyadic::new(t[2 * n as usize], 1), DEFAULT_PREC);
            let gap = v1.sub(&v2).abs();
            (!gap.certainly_lt(&tol_iv)).then(|| (n, format!("ψ(N) = {v1}, ψ(2N) = {v2}")))
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// `S'(2^j)/2^j = 1/2 + j/4`, so `ψ_k(0) = 1/2` exactly on every level.
pub fn psi_at_zero(k: u32) -> PsiValue {
    let n = 1u64 << (k - 1);
    PsiValue::of(n, &s_prime(n))
}

/// Exact `S'(N)/N` as a rational.
pub fn r_rational(n: u64) -> Rational {
    s_prime(n).to_rational() * Rational::new(1, BigInt::from(n)).expect("n > 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vdc::{d_batch, d_recurrence};

    fn streamed_summatory(n: u64) -> Dyadic {
        d_batch(n + 1).fold(Dyadic::zero(), |acc, (_, d)| &acc + &d)
    }

    #[test]
    fn summatory_examples() {
        assert_eq!(summatory(0), Dyadic::zero());
        assert_eq!(summatory(4), Dyadic::new(9, 1));
        // d_1 + … + d_8 from the value table
        assert_eq!(summatory(8), Dyadic::new(21, 1));
        for n in 0..600 {
            assert_eq!(summatory(n), streamed_summatory(n), "n={n}");
        }
    }

    #[test]
    fn s_prime_examples() {
        assert_eq!(s_prime(1), Dyadic::new(1, 1));
        assert_eq!(s_prime(2), Dyadic::new(3, 1));
        assert_eq!(s_prime(4), Dyadic::from_int(4));
        assert_eq!(s_prime(3), Dyadic::new(11, 2));
        assert_eq!(s_prime(6), Dyadic::from_int(7));
    }

    #[test]
    fn stream_matches_pointwise() {
        let exp = s_scale(3000);
        for SPoint { n, d, d_next, s } in s_prime_stream(1000, 3000, exp) {
            assert_eq!(Dyadic::from_scaled(s, exp), s_prime(n));
            assert_eq!(Dyadic::from_scaled(d, exp), d_recurrence(n));
            assert_eq!(Dyadic::from_scaled(d_next, exp), d_recurrence(n + 1));
        }
    }

    #[test]
    fn doubling_laws() {
        assert_eq!(check_s_doubling(1 << 14), Ok(()));
        assert_eq!(check_r_invariance(1 << 14), Ok(()));
        assert_eq!(check_theorem3(1 << 14), Ok(()));
        assert_eq!(r_rational(6) - r_rational(3), Rational::frac(1, 4));
    }

    #[test]
    fn psi_samples() {
        for k in 1..=12 {
            let samples = psi_sample_level(k);
            assert_eq!(samples.len(), 1 << (k - 1));
            let first = &samples[0];
            assert_eq!(first.frac, 0.0);
            assert_eq!(
                first.psi,
                PsiValue {
                    rational: Rational::frac(1, 2),
                    odd_part: 1
                }
            );
            assert!(samples.windows(2).all(|w| w[0].frac < w[1].frac));
        }
        let level2 = psi_sample_level(2);
        assert_eq!(level2[1].n, 3);
        assert_eq!(level2[1].psi.rational, Rational::frac(11, 12));
        assert!((level2[1].psi_value - (11.0 / 12.0 - 0.25 * 3f64.log2())).abs() < 1e-15);
        let level3 = psi_sample_level(3);
        assert_eq!(level3[2].n, 6);
        assert_eq!(level3[2].psi, level2[1].psi);
        assert_eq!(psi_at_zero(30).rational, Rational::frac(1, 2));
    }

    #[test]
    fn level_stats_against_exact_values() {
        // brute-force R via exact S' and f64 logs
        let r = |n: u64| r_rational(n).to_f64() - 0.25 * (n as f64).log2();
        for k in [3, 6, 9] {
            let stats = level_stats(k);
            let lo = 1u64 << (k - 1);
            let mut best = (0.0, lo);
            let mut step = 0.0f64;
            for n in lo..(1 << k) {
                let dev = (r(2 * n + 1) - r(n)).abs();
                if dev > best.0 {
                    best = (dev, n);
                }
                if n + 1 < 1 << k {
                    step = step.max((r(n + 1) - r(n)).abs());
                }
            }
            assert!((stats.cauchy_max - best.0).abs() < 1e-13, "k={k}");
            assert_eq!(stats.cauchy_at, best.1);
            assert!((stats.step_max - step).abs() < 1e-13);
        }
    }

    #[test]
    fn envelope_and_eval() {
        let env = CauchyEnvelope::calibrate(5, 14);
        assert_eq!(env.check(), Ok(()));
        assert_eq!(check_jump_constant(&env), Ok(()));
        assert!(env.tail(6) < env.tail(5));
        let zero = psi_eval(&Rational::zero(), 10, &env).unwrap();
        assert_eq!(zero.n, 512);
        assert_eq!(zero.psi_value, 0.5);
        // {log₂ 3} lands exactly on N = 3·2^(k−2)
        let x = frac_log2(3);
        let x_rat = Rational::from_f64(x).unwrap();
        for k in 2..=20 {
            let s = psi_eval(&x_rat, k, &env).unwrap();
            assert!((s.psi_value - 0.520_43).abs() <= s.error_radius.max(1e-4), "k={k}");
        }
        assert!(psi_eval(&Rational::one(), 1, &env).is_err());
        assert!(psi_eval(&Rational::from_int(2), 5, &env).is_err());
        assert_eq!(psi_eval(&Rational::one(), 5, &env).unwrap().n, 31);
    }

    #[test]
    fn grid_point_is_floor_of_power() {
        for k in 2..=12u32 {
            for i in 0..=50 {
                let x = Rational::frac(i, 50);
                let n = grid_point(&x, k);
                let want = (1..1u64 << k)
                    .filter(|&m| m >= 1 << (k - 1))
                    .filter(|&m| ((m as f64).log2() - (k - 1) as f64) <= x.to_f64() + 1e-13)
                    .max()
                    .unwrap();
                assert_eq!(n, want, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn monotone_pieces_and_mean_value() {
        for k in 1..=12 {
            assert_eq!(check_piecewise_monotone(k), Ok(()));
        }
        let (max, at) = mean_value_deviation(1 << 12);
        assert_eq!((max, at), (1.0, 1));
        let w = check_mean_value(1 << 12, &Rational::one()).unwrap_err();
        assert_eq!(w.n, Some(1));
        assert_eq!(check_mean_value(1 << 12, &Rational::frac(11, 10)), Ok(()));
    }

    #[test]
    fn stern_values() {
        let first: Vec<u64> = (1..=15).map(stern).collect();
        assert_eq!(first, [1, 1, 2, 1, 3, 2, 3, 1, 4, 3, 5, 2, 5, 3, 4]);
        assert_eq!(stern(11), 5);
        assert_eq!(stern(1 << 40), 1);
        assert_eq!(stern_s_prime(2), Dyadic::new(3, 1));
        assert_eq!(stern_s_prime(4), Dyadic::new(9, 1));
        assert_eq!(check_stern_doubling(1 << 12), Ok(()));
        assert_eq!((stern_max(0), stern_max(2), stern_max(3)), (1, 3, 5));
        assert_eq!(check_stern_max(16), Ok(()));
        assert_eq!(check_stern_reversal(1 << 12), Ok(()));
    }

    #[test]
    fn stern_psi_values() {
        let one = stern_psi(1, &stern_s_prime(1), DEFAULT_PREC);
        assert!(one.contains_rational(&Rational::frac(1, 2)));
        let two = stern_psi(2, &stern_s_prime(2), DEFAULT_PREC);
        assert!(two.contains_rational(&Rational::frac(1, 2)));
        assert!(two.width_f64() < 1e-40);
        let three = stern_psi(3, &stern_s_prime(3), DEFAULT_PREC);
        assert!((three.mid_f64() - 3.0 / 3f64.powf(3f64.log2())).abs() < 1e-15);
        let level = stern_psi_sample(4);
        assert_eq!(level.len(), 8);
        assert_eq!(check_stern_psi_invariance(6, 1e-12), Ok(()));
    }
}
