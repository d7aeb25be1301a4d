//! The Van der Corput sequence and its scaled discrepancy `d_N = N·D_N`.
//!
//! Three independent routes to `d_N`:
//!
//! * [`d_explicit`]: `Σ_{j≥1} ||N/2^j||`, with the geometric tail closed
//!   exactly once `N/2^j <= 1/2`;
//! * [`d_recurrence`]: pair iteration of `d_0 = 0`, `d_1 = 1`,
//!   `d_{2N} = d_N`, `d_{2N+1} = (d_N + d_{N+1} + 1)/2`;
//! * [`discrepancy_oracle`]: the extreme discrepancy of the sorted point set
//!   `ω_0, …, ω_{N−1}`.
//!
//! The sweeps over large ranges work on fixed-point numerators (`d·2^e` as a
//! `u128`), which is exact because `d_n` has denominator at most
//! `2^bit_len(n)`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{bit_len, decide, dist_nearest_int, Dyadic, Interval, Rational, DEFAULT_PREC};
use crate::pairs::{self, PairRule, PairStream};
use crate::report::{Check, Witness};
use crate::sweep;

/// Scale used by the default fixed-point stream: exact for every `n < 2^64`.
pub const D_SCALE: u32 = 64;

/// `ω_n = Σ ε_i(n)·2^(−i−1)`, the base-2 radical inverse.
pub fn radical_inverse(n: u64) -> Dyadic {
    Dyadic::from_scaled(radical_inverse_scaled(n) as u128, 64)
}

/// `ω_n · 2^64`.
#[inline]
pub fn radical_inverse_scaled(n: u64) -> u64 {
    n.reverse_bits()
}

/// `d_N` from the explicit series `Σ_{j≥1} ||N/2^j||`.
pub fn d_explicit(n: u64) -> Dyadic {
    if n == 0 {
        return Dyadic::zero();
    }
    // j0 - 1 = ceil(log2 n): the first j with n / 2^j <= 1/2 is j0
    let head = tail_start(n);
    let mut sum = Dyadic::zero();
    for j in 1..=head {
        sum = &sum + &dist_nearest_int(n, j);
    }
    &sum + &Dyadic::new(n, head)
}

/// `j0 − 1`, i.e. the smallest `h` with `n <= 2^h`.
#[inline]
fn tail_start(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        bit_len(n - 1)
    }
}

/// `d_n · 2^exp` from the explicit series; needs `exp >= bit_len(n)`.
pub fn d_explicit_scaled(n: u64, exp: u32) -> u128 {
    debug_assert!(exp >= bit_len(n) && exp <= 64);
    if n == 0 {
        return 0;
    }
    let head = tail_start(n);
    let n128 = n as u128;
    let mut sum: u128 = 0;
    for j in 1..=head {
        let modulus = 1u128 << j;
        let r = n128 & (modulus - 1);
        sum += r.min(modulus - r) << (exp - j);
    }
    sum + (n128 << (exp - head))
}

/// `d_n` from the explicit series for arbitrarily long `n`.
pub fn d_explicit_big(n: &BigUint) -> Dyadic {
    if n.is_zero() {
        return Dyadic::zero();
    }
    let one = BigUint::one();
    let head = if n == &one { 0 } else { (n - &one).bits() as u32 };
    let mut sum = Dyadic::zero();
    for j in 1..=head {
        let modulus = &one << j;
        let r = n & (&modulus - &one);
        let dist = if &r + &r <= modulus { r } else { &modulus - &r };
        sum = &sum + &Dyadic::new(BigInt::from(dist), j);
    }
    &sum + &Dyadic::new(BigInt::from(n.clone()), head)
}

/// The discrepancy recurrence over exact dyadics.
#[derive(Clone, Copy, Debug, Default)]
pub struct DyadicRule;

impl PairRule for DyadicRule {
    type Value = Dyadic;
    const BASE: u64 = 0;

    fn seed(&self) -> (Dyadic, Dyadic) {
        (Dyadic::zero(), Dyadic::one())
    }

    fn odd(&self, a: &Dyadic, b: &Dyadic) -> Dyadic {
        (&(a + b) + &Dyadic::one()).half()
    }
}

/// The discrepancy recurrence on fixed-point numerators `d·2^exp`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledRule {
    exp: u32,
}

impl ScaledRule {
    pub fn new(exp: u32) -> Self {
        assert!(exp <= 100, "scale too large for u128 sums");
        ScaledRule { exp }
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }
}

impl PairRule for ScaledRule {
    type Value = u128;
    const BASE: u64 = 0;

    fn seed(&self) -> (u128, u128) {
        (0, 1u128 << self.exp)
    }

    #[inline]
    fn odd(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b + (1u128 << self.exp);
        debug_assert!(s & 1 == 0, "scale too small for exact halving");
        s >> 1
    }
}

/// `d_N` by pair iteration: `O(log N)` exact steps, no table.
pub fn d_recurrence(n: u64) -> Dyadic {
    pairs::eval(&DyadicRule, n)
}

/// Fixed-point stream of `d_n · 2^exp` for `n` in `[start, end)`.
///
/// `exp` must be at least `bit_len(end)` for the halvings to stay exact.
pub fn d_stream(start: u64, end: u64, exp: u32) -> PairStream<ScaledRule> {
    assert!(
        exp >= bit_len(end),
        "scale 2^{exp} is too coarse for indices below {end}"
    );
    PairStream::new(ScaledRule::new(exp), start, end)
}

/// `(n, d_n)` for `n = 0, …, limit − 1`, amortized `O(1)` per value.
pub fn d_batch(limit: u64) -> impl Iterator<Item = (u64, Dyadic)> {
    d_stream(0, limit, D_SCALE).map(|(n, v)| (n, Dyadic::from_scaled(v, D_SCALE)))
}

/// `(N·D_N, N·D*_N)` evaluated directly on the sorted points `ω_0 … ω_{N−1}`.
///
/// With `x_(1) < … < x_(N)`:
/// `N·D_N = 1 + max_i (i − N x_(i)) − min_i (i − N x_(i))` and
/// `N·D*_N = max_i max(i − N x_(i), N x_(i) − (i − 1))`.
pub fn discrepancy_oracle(n: u64) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    if n >= 1 << 62 {
        return Err(Error::Range(format!("oracle supports N < 2^62, got {n}")));
    }
    let mut xs: Vec<u64> = (0..n).map(radical_inverse_scaled).collect();
    xs.sort_unstable();
    let nn = n as i128;
    let one = 1i128 << 64;
    let mut max_dev = i128::MIN; // max of i − N x_(i), scaled by 2^64
    let mut min_dev = i128::MAX;
    let mut star = i128::MIN;
    for (idx, &x) in xs.iter().enumerate() {
        let i = idx as i128 + 1;
        let dev = i * one - nn * x as i128;
        max_dev = max_dev.max(dev);
        min_dev = min_dev.min(dev);
        star = star.max(dev).max(one - dev);
    }
    let scale: BigInt = BigInt::one() << 64;
    let ext = Rational::new(BigInt::from(one + max_dev - min_dev), scale.clone())?;
    let star = Rational::new(BigInt::from(star), scale)?;
    Ok((ext, star))
}

/// Each dyadic block is a palindrome: `d_N = d_{3·2^(k−1) − N}` for every
/// `N` in `[2^(k−1), 2^k]`.
///
/// Read literally, `d_N = d_{2^k − N}` fails already at `k = 3` (`d_5 = 7/4`,
/// `d_3 = 3/2`); the reflection of the block onto itself is the identity the
/// value table actually shows.
pub fn check_symmetry(k: u32) -> Check {
    assert!((1..63).contains(&k));
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let mirror = lo + hi;
    let exp = bit_len(hi);
    let vals: Vec<u128> = d_stream(lo, hi + 1, exp).map(|(_, v)| v).collect();
    let at = |n: u64| vals[(n - lo) as usize];
    for n in lo..=hi {
        if at(n) != at(mirror - n) {
            return Err(Witness::at(
                n,
                format!(
                    "d_N = {} but d_(3*2^{}-N) = {}",
                    Dyadic::from_scaled(at(n), exp),
                    k - 1,
                    Dyadic::from_scaled(at(mirror - n), exp)
                ),
            ));
        }
    }
    Ok(())
}

/// The first maximum of `d_N` on `[2^(k−1), 2^k]` in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopePoint {
    pub k: u32,
    pub n_star: u64,
    pub value: Rational,
}

/// `((2^(k+1) + (−1)^k)/3, k/3 + 7/9 + (−1)^k/(9·2^(k−1)))`.
pub fn envelope_point(k: u32) -> EnvelopePoint {
    assert!((1..=62).contains(&k), "level must be in 1..=62");
    let sign: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
    let n_star = ((1i128 << (k + 1)) + sign as i128) / 3;
    let value = Rational::frac(k as i64, 3)
        + Rational::frac(7, 9)
        + Rational::new(sign, BigInt::from(9) * (BigInt::one() << (k - 1))).expect("nonzero");
    EnvelopePoint {
        k,
        n_star: n_star as u64,
        value,
    }
}

/// Checks the closed-form envelope point against an exhaustive scan of
/// `[2^(k−1), 2^k]`: same maximum and `n_star` is its smallest maximizer.
pub fn check_envelope(k: u32) -> Check {
    assert!((1..=40).contains(&k));
    let p = envelope_point(k);
    let lo = 1u64 << (k - 1);
    let hi = 1u64 << k;
    let exp = bit_len(hi);
    let (mut best_n, mut best) = (lo, 0u128);
    for (n, v) in d_stream(lo, hi + 1, exp) {
        if v > best {
            best = v;
            best_n = n;
        }
    }
    let best_val = Dyadic::from_scaled(best, exp).to_rational();
    if best_val != p.value {
        return Err(Witness::at(
            best_n,
            format!("level {k}: maximum {best_val} differs from closed form {}", p.value),
        ));
    }
    if best_n != p.n_star {
        return Err(Witness::at(
            best_n,
            format!("level {k}: first maximizer {best_n}, closed form gives {}", p.n_star),
        ));
    }
    let at_star = d_recurrence(p.n_star).to_rational();
    if at_star != p.value {
        return Err(Witness::at(
            p.n_star,
            format!("d at n_star is {at_star}, expected {}", p.value),
        ));
    }
    Ok(())
}

/// Compares `d ≤ (1/3)·log2(n) + 1` with a certified fallback.
///
/// A double-precision filter settles every case whose margin exceeds
/// `1e-9`; anything closer is redone with interval arithmetic. Equality is
/// only possible for powers of two, which are decided exactly.
pub fn within_upper_bound(n: u64, d: &Dyadic) -> bool {
    assert!(n >= 1);
    if n.is_power_of_two() {
        // log2 n = k exactly: 3(d − 1) <= k
        let lhs = (d - &Dyadic::one()).to_rational() * Rational::from_int(3);
        return lhs.cmp_int(n.trailing_zeros() as i64) != Ordering::Greater;
    }
    let gap = (n as f64).log2() - 3.0 * (d.to_f64() - 1.0);
    if gap > 1e-9 {
        return true;
    }
    if gap < -1e-9 {
        return false;
    }
    let lhs = (d - &Dyadic::one()).to_rational() * Rational::from_int(3);
    decide(|prec| {
        let rhs = Interval::from_int(n, prec).log2()?;
        match Interval::from_rational(&lhs, prec).certain_cmp(&rhs)? {
            Ordering::Greater => Some(false),
            _ => Some(true),
        }
    })
}

pub fn check_upper_bound(limit: u64) -> Check {
    assert!(limit >= 2);
    let exp = bit_len(limit).max(1);
    sweep::first_failure(1, limit, |a, b| {
        d_stream(a, b, exp)
            .find(|&(n, v)| !within_upper_bound_fast(n, v, exp))
            .map(|(n, v)| {
                (
                    n,
                    format!("d_N = {} exceeds log2(N)/3 + 1", Dyadic::from_scaled(v, exp)),
                )
            })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

#[inline]
fn within_upper_bound_fast(n: u64, v: u128, exp: u32) -> bool {
    let df = v as f64 / 2f64.powi(exp as i32);
    if !n.is_power_of_two() && 3.0 * (df - 1.0) < (n as f64).log2() - 1e-6 {
        return true;
    }
    within_upper_bound(n, &Dyadic::from_scaled(v, exp))
}

/// Certified enclosure of `d_{n_star(k)} − (1/3)·log2(n_star(k))`.
pub fn limsup_probe(k: u32) -> Interval {
    assert!(k >= 2);
    let p = envelope_point(k);
    let value = Interval::from_rational(&p.value, DEFAULT_PREC);
    let log = Interval::from_int(p.n_star, DEFAULT_PREC).log2().expect("positive");
    value.sub(&log.div_int(3))
}

/// Certified enclosure of `4/9 + (1/3)·log2 3`.
pub fn limsup_target() -> Interval {
    let l3 = Interval::from_int(3, DEFAULT_PREC).log2().expect("positive");
    Interval::from_rational(&Rational::frac(4, 9), DEFAULT_PREC).add(&l3.div_int(3))
}

/// `d_N` is dominated by the segment joining envelope points `k` and `k+1`
/// for every `N` in `[n_star(k), n_star(k+1)]`.
pub fn check_polygonal(k: u32) -> Check {
    assert!((1..=40).contains(&k));
    let p1 = envelope_point(k);
    let p2 = envelope_point(k + 1);
    let (n1, n2) = (p1.n_star, p2.n_star);
    // integer form: scale values by 9·2^e so both are integers
    let e = bit_len(n2) + 1;
    let scale = Rational::from_int(BigInt::from(9) * (BigInt::one() << e));
    let int_of = |r: &Rational| -> i128 {
        let s = r * &scale;
        assert!(s.denom().is_one());
        i128::try_from(s.numer().clone()).expect("fits")
    };
    let (v1, v2) = (int_of(&p1.value), int_of(&p2.value));
    let span = (n2 - n1) as i128;
    for (n, v) in d_stream(n1, n2 + 1, e) {
        let lhs = 9 * v as i128 * span;
        let rhs = v1 * (n2 - n) as i128 + v2 * (n - n1) as i128;
        if lhs > rhs {
            return Err(Witness::at(
                n,
                format!(
                    "d_N = {} lies above the envelope segment {k}..{}",
                    Dyadic::from_scaled(v, e),
                    k + 1
                ),
            ));
        }
    }
    Ok(())
}

/// `d_N ≥ 1` for every `1 ≤ N < limit`.
pub fn check_min_value(limit: u64) -> Check {
    let exp = bit_len(limit).max(1);
    let one = 1u128 << exp;
    sweep::first_failure(1, limit, |a, b| {
        d_stream(a, b, exp)
            .find(|&(_, v)| v < one)
            .map(|(n, v)| (n, format!("d_N = {} < 1", Dyadic::from_scaled(v, exp))))
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// `d_{2N} = d_N` for every `N < limit`, read off the batch stream.
pub fn check_doubling(limit: u64) -> Check {
    let exp = bit_len(2 * limit).max(1);
    sweep::first_failure(0, limit, |a, b| {
        let mut evens = d_stream(2 * a, 2 * b, exp).step_by(2);
        d_stream(a, b, exp).find_map(|(n, v)| {
            let (_, w) = evens.next().expect("stream length");
            (v != w).then(|| {
                (
                    n,
                    format!(
                        "d_N = {} but d_2N = {}",
                        Dyadic::from_scaled(v, exp),
                        Dyadic::from_scaled(w, exp)
                    ),
                )
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// Explicit series, recurrence and point-set oracle agree, and the star
/// discrepancy equals the extreme discrepancy, for `1 ≤ N ≤ max`.
///
/// `recurrence` is injectable so a corrupted implementation can be shown
/// to be caught.
pub fn check_triple_agreement_with(max: u64, recurrence: &(dyn Fn(u64) -> Dyadic + Sync)) -> Check {
    sweep::first_failure(1, max + 1, |a, b| {
        (a..b).find_map(|n| {
            let e = d_explicit(n);
            let r = recurrence(n);
            let (ext, star) = match discrepancy_oracle(n) {
                Ok(v) => v,
                Err(err) => return Some((n, err.to_string())),
            };
            let e_rat = e.to_rational();
            if e != r || e_rat != ext || star != ext {
                Some((n, format!("explicit {e}, recurrence {r}, oracle {ext}, star {star}")))
            } else {
                None
            }
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

pub fn check_triple_agreement(max: u64) -> Check {
    check_triple_agreement_with(max, &d_recurrence)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 32 published values of d_0 … d_31, as (numerator, log2 denominator).
    pub(crate) const TABLE: [(i64, u32); 32] = [
        (0, 0),
        (1, 0),
        (1, 0),
        (3, 1),
        (1, 0),
        (7, 2),
        (3, 1),
        (7, 2),
        (1, 0),
        (15, 3),
        (7, 2),
        (17, 3),
        (3, 1),
        (17, 3),
        (7, 2),
        (15, 3),
        (1, 0),
        (31, 4),
        (15, 3),
        (37, 4),
        (7, 2),
        (39, 4),
        (17, 3),
        (37, 4),
        (3, 1),
        (37, 4),
        (17, 3),
        (39, 4),
        (7, 2),
        (37, 4),
        (15, 3),
        (31, 4),
    ];

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(0), Dyadic::zero());
        assert_eq!(radical_inverse(1), Dyadic::new(1, 1));
        assert_eq!(radical_inverse(6), Dyadic::new(3, 3));
        // direct digit sum
        for n in 0..512u64 {
            let mut s = Dyadic::zero();
            for i in 0..10 {
                if (n >> i) & 1 == 1 {
                    s = &s + &Dyadic::new(1, i + 1);
                }
            }
            assert_eq!(radical_inverse(n), s);
        }
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(d_explicit(1), Dyadic::one());
        assert_eq!(d_explicit(19), Dyadic::new(37, 4));
        assert_eq!(d_explicit(3), Dyadic::new(3, 1));
        assert_eq!(d_explicit(0), Dyadic::zero());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(d_recurrence(0), Dyadic::zero());
        assert_eq!(d_recurrence(25), Dyadic::new(37, 4));
        assert_eq!(d_recurrence(1 << 40), Dyadic::one());
    }

    #[test]
    fn table_reproduced_by_all_routes() {
        let batch: Vec<_> = d_batch(32).collect();
        for (n, &(p, e)) in TABLE.iter().enumerate() {
            let want = Dyadic::new(p, e);
            assert_eq!(d_explicit(n as u64), want, "explicit n={n}");
            assert_eq!(d_recurrence(n as u64), want, "recurrence n={n}");
            assert_eq!(batch[n], (n as u64, want.clone()));
            if n > 0 {
                let (ext, star) = discrepancy_oracle(n as u64).unwrap();
                assert_eq!(ext, want.to_rational());
                assert_eq!(star, want.to_rational());
            }
        }
    }

    #[test]
    fn batch_edges() {
        assert_eq!(d_batch(1).collect::<Vec<_>>(), vec![(0, Dyadic::zero())]);
        let first4: Vec<_> = d_batch(4).map(|(_, d)| d).collect();
        assert_eq!(
            first4,
            vec![Dyadic::zero(), Dyadic::one(), Dyadic::one(), Dyadic::new(3, 1)]
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(discrepancy_oracle(2).unwrap(), (Rational::one(), Rational::one()));
        assert_eq!(
            discrepancy_oracle(3).unwrap(),
            (Rational::frac(3, 2), Rational::frac(3, 2))
        );
        assert_eq!(discrepancy_oracle(1).unwrap(), (Rational::one(), Rational::one()));
        assert_eq!(discrepancy_oracle(0), Err(Error::EmptyPointSet));
    }

    #[test]
    fn scaled_and_big_explicit_agree() {
        for n in (0..5000u64).chain([u64::MAX, u64::MAX - 1, 1 << 63, (1 << 63) + 1]) {
            let d = d_explicit(n);
            assert_eq!(Dyadic::from_scaled(d_explicit_scaled(n, 64), 64), d, "n={n}");
            assert_eq!(d_explicit_big(&BigUint::from(n)), d, "n={n}");
        }
        assert_eq!(d_recurrence(u64::MAX), d_explicit(u64::MAX));
    }

    #[test]
    fn symmetry_small_levels() {
        for k in 1..=12 {
            assert_eq!(check_symmetry(k), Ok(()), "k={k}");
        }
    }

    #[test]
    fn envelope_examples() {
        let p4 = envelope_point(4);
        assert_eq!((p4.n_star, p4.value.clone()), (11, Rational::frac(17, 8)));
        let p5 = envelope_point(5);
        assert_eq!((p5.n_star, p5.value), (21, Rational::frac(39, 16)));
        let p2 = envelope_point(2);
        assert_eq!((p2.n_star, p2.value), (3, Rational::frac(3, 2)));
        for k in 1..=14 {
            assert_eq!(check_envelope(k), Ok(()), "k={k}");
            let p = envelope_point(k);
            assert!(p.n_star >= 1 << (k - 1) && p.n_star <= 1 << k);
        }
    }

    #[test]
    fn upper_bound_small() {
        assert_eq!(check_upper_bound(32), Ok(()));
        assert!(within_upper_bound(1, &Dyadic::one()));
        assert!(!within_upper_bound(1, &Dyadic::new(3, 1)));
        assert!(!within_upper_bound(3, &Dyadic::from_int(2)));
        assert_eq!(check_upper_bound(1 << 14), Ok(()));
    }

    #[test]
    fn limsup_values() {
        let target = limsup_target();
        assert!((target.mid_f64() - 0.972_765_278_018_163_2).abs() < 1e-15);
        let p4 = limsup_probe(4);
        assert!((p4.mid_f64() - (17.0 / 8.0 - 11f64.log2() / 3.0)).abs() < 1e-14);
        let p40 = limsup_probe(40);
        assert!(p40.sub(&target).abs().hi_f64() < 1e-6);
    }

    #[test]
    fn polygonal_and_minimum() {
        for k in 1..=12 {
            assert_eq!(check_polygonal(k), Ok(()), "k={k}");
        }
        assert_eq!(check_min_value(1 << 14), Ok(()));
        assert_eq!(check_doubling(1 << 13), Ok(()));
    }

    #[test]
    fn triple_agreement_small() {
        assert_eq!(check_triple_agreement(300), Ok(()));
        let broken = |n: u64| if n == 77 { Dyadic::zero() } else { d_recurrence(n) };
        let w = check_triple_agreement_with(300, &broken).unwrap_err();
        assert_eq!(w.n, Some(77));
    }
}
