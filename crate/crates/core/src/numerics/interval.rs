//! Certified real arithmetic on fixed-point intervals.
//!
//! An [`Interval`] holds integers `lo <= hi` and stands for the real range
//! `[lo / 2^prec, hi / 2^prec]`. Every operation rounds its endpoints outward,
//! and every truncated series adds a bound on its tail, so the true value of
//! any expression built from these operations lies inside the result.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Working precision (fractional bits) used when callers do not choose one.
pub const DEFAULT_PREC: u32 = 192;

const GUARD: u32 = 32;

/// Precisions tried in turn by [`decide`].
const ESCALATION: [u32; 4] = [DEFAULT_PREC, 512, 2048, 8192];

/// Runs a certified predicate at increasing precision until it commits.
///
/// `f` returns `None` when its enclosures overlap. Panics if even the
/// highest precision cannot separate them, which for the predicates in this
/// crate means an exact tie that should have been handled symbolically.
pub fn decide<F: Fn(u32) -> Option<bool>>(f: F) -> bool {
    for prec in ESCALATION {
        if let Some(v) = f(prec) {
            return v;
        }
    }
    panic!(
        "certified comparison undecided at {} bits",
        ESCALATION[ESCALATION.len() - 1]
    );
}

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    // BigInt's shift right rounds toward negative infinity
    x >> k
}

fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> k)
}

fn shift(x: &BigInt, from: u32, to: u32, up: bool) -> BigInt {
    match to.cmp(&from) {
        Ordering::Equal => x.clone(),
        Ordering::Greater => x << (to - from),
        Ordering::Less if up => shr_ceil(x, from - to),
        Ordering::Less => shr_floor(x, from - to),
    }
}

impl Interval {
    fn raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let v = n.into() << prec;
        Interval::raw(v.clone(), v, prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        let q = r.denom();
        Interval::raw(scaled.div_floor(q), scaled.div_ceil(q), prec)
    }

    /// Finite doubles are dyadic, so this is exact whenever `prec` is large enough.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let r = Rational::from_f64(x).expect("finite input");
        Interval::from_rational(&r, prec)
    }

    /// The hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = self.align(other);
        Interval::raw(a.lo.clone().min(b.lo.clone()), a.hi.clone().max(b.hi.clone()), a.prec)
    }

    /// Re-expresses the interval at another precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval::raw(
            shift(&self.lo, self.prec, prec, false),
            shift(&self.hi, self.prec, prec, true),
            prec,
        )
    }

    fn align(&self, other: &Interval) -> (Interval, Interval) {
        if self.prec == other.prec {
            (self.clone(), other.clone())
        } else {
            let p = self.prec.max(other.prec);
            (self.with_prec(p), other.with_prec(p))
        }
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.prec).expect("nonzero")
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.prec).expect("nonzero")
    }

    pub fn mid_f64(&self) -> f64 {
        let m: BigInt = (&self.lo + &self.hi) >> 1u32;
        Rational::new(m, BigInt::one() << self.prec).expect("nonzero").to_f64()
    }

    pub fn width_f64(&self) -> f64 {
        Rational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
            .expect("nonzero")
            .to_f64()
    }

    /// Largest distance from the midpoint to an endpoint, as an upper bound.
    pub fn radius_f64(&self) -> f64 {
        self.width_f64() / 2.0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        let scaled = r.numer() << self.prec;
        let q = r.denom();
        &self.lo * q <= scaled && scaled <= &self.hi * q
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(ordering)` when every point of `self` compares the same way to
    /// every point of `other`; `None` when the intervals overlap.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        let (a, b) = self.align(other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.lo == a.hi && b.lo == b.hi && a.lo == b.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.certain_cmp(other) == Some(Ordering::Less)
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        let (a, b) = self.align(other);
        a.hi <= b.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.align(other);
        Interval::raw(&a.lo + &b.lo, &a.hi + &b.hi, a.prec)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let (a, b) = self.align(other);
        Interval::raw(&a.lo - &b.hi, &a.hi - &b.lo, a.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval::raw(-&self.hi, -&self.lo, self.prec)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.sign() != Sign::Minus {
            self.clone()
        } else if self.hi.sign() != Sign::Plus {
            self.neg()
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Interval::raw(BigInt::zero(), m, self.prec)
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = self.align(other);
        let p = a.prec;
        let cands = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = cands.iter().min().expect("nonempty");
        let max = cands.iter().max().expect("nonempty");
        Interval::raw(shr_floor(min, p), shr_ceil(max, p), p)
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        let p = a.prec;
        Interval::raw(shr_floor(&(&a.lo * &a.lo), p), shr_ceil(&(&a.hi * &a.hi), p), p)
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        let k = BigInt::from(k);
        let (x, y) = (&self.lo * &k, &self.hi * &k);
        if x <= y {
            Interval::raw(x, y, self.prec)
        } else {
            Interval::raw(y, x, self.prec)
        }
    }

    pub fn div_int(&self, k: i64) -> Interval {
        assert!(k != 0, "division by zero");
        let kk = BigInt::from(k.unsigned_abs());
        let r = Interval::raw(self.lo.div_floor(&kk), self.hi.div_ceil(&kk), self.prec);
        if k < 0 {
            r.neg()
        } else {
            r
        }
    }

    /// Multiplication by `2^k` (negative `k` divides).
    pub fn scale_pow2(&self, k: i64) -> Interval {
        if k >= 0 {
            Interval::raw(&self.lo << k as u32, &self.hi << k as u32, self.prec)
        } else {
            let s = (-k) as u32;
            Interval::raw(shr_floor(&self.lo, s), shr_ceil(&self.hi, s), self.prec)
        }
    }

    /// `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = BigInt::one() << (2 * self.prec);
        Some(Interval::raw(
            one.div_floor(&self.hi),
            one.div_ceil(&self.lo),
            self.prec,
        ))
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = self.align(other);
        b.recip().map(|r| a.mul(&r))
    }

    /// Square root; `None` if the interval reaches below zero.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.lo.is_negative() {
            return None;
        }
        let p = self.prec;
        let lo = (&self.lo << p).sqrt();
        let hi_sq = &self.hi << p;
        let mut hi = hi_sq.sqrt();
        if &hi * &hi < hi_sq {
            hi += 1;
        }
        Some(Interval::raw(lo, hi, p))
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut result = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }
}

/// Constants and elementary functions.
impl Interval {
    /// `ln 2 = 2·atanh(1/3)`.
    pub fn ln2(prec: u32) -> Interval {
        let wp = prec + GUARD;
        let third = Interval::from_rational(&Rational::frac(1, 3), wp);
        atanh_nonneg(&third).mul_int(2).with_prec(prec)
    }

    /// `π = 16·atan(1/5) − 4·atan(1/239)`.
    pub fn pi(prec: u32) -> Interval {
        let wp = prec + GUARD;
        let a = atan_small(&Rational::frac(1, 5), wp).mul_int(16);
        let b = atan_small(&Rational::frac(1, 239), wp).mul_int(4);
        a.sub(&b).with_prec(prec)
    }

    pub fn e(prec: u32) -> Interval {
        Interval::from_int(1, prec + GUARD).exp().with_prec(prec)
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_point(&self.lo, self.prec);
        let hi = if self.hi == self.lo {
            lo.clone()
        } else {
            ln_point(&self.hi, self.prec)
        };
        Some(Interval::raw(lo.lo, hi.hi, self.prec))
    }

    pub fn log2(&self) -> Option<Interval> {
        let wp = self.prec + GUARD;
        let l = self.with_prec(wp).ln()?;
        l.div(&Interval::ln2(wp)).map(|r| r.with_prec(self.prec))
    }

    /// Exponential. Monotone, so the endpoints are evaluated separately.
    pub fn exp(&self) -> Interval {
        let lo = exp_point(&self.lo, self.prec);
        let hi = if self.hi == self.lo {
            lo.clone()
        } else {
            exp_point(&self.hi, self.prec)
        };
        Interval::raw(lo.lo, hi.hi, self.prec)
    }
}

/// Encloses `ln(v / 2^prec)` for an exact positive fixed-point `v`.
fn ln_point(v: &BigInt, prec: u32) -> Interval {
    let wp = prec + GUARD;
    let x = v << GUARD;
    // x / 2^wp lies in [2^k, 2^(k+1))
    let k = x.bits() as i64 - 1 - wp as i64;
    let m = Interval::raw(x.clone(), x, wp).scale_pow2(-k);
    let one = Interval::from_int(1, wp);
    let t = m.sub(&one).div(&m.add(&one)).expect("m + 1 > 0");
    let t = Interval::raw(t.lo.max(BigInt::zero()), t.hi, wp);
    let series = atanh_nonneg(&t).mul_int(2);
    Interval::ln2(wp).mul_int(k).add(&series).with_prec(prec)
}

/// `atanh(t) = Σ t^(2i+1)/(2i+1)` for `0 <= t <= 1/2`, with the tail bound
/// `t^(2n+1) / ((2n+1)(1 − t²))` added to the upper end.
fn atanh_nonneg(t: &Interval) -> Interval {
    let prec = t.prec;
    assert!(!t.lo.is_negative(), "atanh series needs t >= 0");
    assert!(t.hi <= (BigInt::one() << (prec - 1)), "atanh series needs t <= 1/2");
    let t2 = t.square();
    let mut power = t.clone();
    let mut sum = Interval::from_int(0, prec);
    let threshold = BigInt::one();
    let mut i: i64 = 0;
    loop {
        let term = power.div_int(2 * i + 1);
        sum = sum.add(&term);
        power = power.mul(&t2);
        i += 1;
        if power.hi <= threshold {
            break;
        }
    }
    // remaining terms are at most power.hi / (2i+1) · 1/(1 − t²) <= power.hi · 4/3 / (2i+1)
    let tail: BigInt = Integer::div_ceil(&(&power.hi * 4), &BigInt::from(3 * (2 * i + 1))) + 1;
    Interval::raw(sum.lo, sum.hi + tail, prec)
}

/// `atan(x)` for a small exact rational `0 < x <= 1/5` via the alternating series.
fn atan_small(x: &Rational, prec: u32) -> Interval {
    let xi = Interval::from_rational(x, prec);
    let x2 = xi.square();
    let mut power = xi.clone();
    let mut sum = Interval::from_int(0, prec);
    let mut i: i64 = 0;
    loop {
        let term = power.div_int(2 * i + 1);
        sum = if i % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(&x2);
        i += 1;
        if power.hi <= BigInt::one() {
            break;
        }
    }
    // alternating with decreasing terms: the error is below the next term
    let next = power.hi.clone() + 1;
    Interval::raw(sum.lo - &next, sum.hi + next, prec)
}

/// Encloses `exp(v / 2^prec)` for an exact fixed-point `v`.
fn exp_point(v: &BigInt, prec: u32) -> Interval {
    if v.is_negative() {
        let pos = exp_point(&((-v) << 2u32), prec + 2);
        return pos.recip().expect("exp is positive").with_prec(prec);
    }
    // halve until the argument is below 2^-8, then square back up
    let int_bits = (v >> prec).bits() as u32;
    let halvings = int_bits + 8;
    let wp = prec + GUARD + halvings;
    let y = Interval::raw(v << (wp - prec), v << (wp - prec), wp).scale_pow2(-(halvings as i64));
    let mut sum = Interval::from_int(1, wp);
    let mut term = Interval::from_int(1, wp);
    let mut i: i64 = 1;
    loop {
        term = term.mul(&y).div_int(i);
        sum = sum.add(&term);
        i += 1;
        if term.hi <= BigInt::one() {
            break;
        }
    }
    // for 0 <= y <= 1 the remainder is at most twice the next term
    let tail = &term.hi * 2 + 2;
    let mut r = Interval::raw(sum.lo, sum.hi + tail, wp);
    for _ in 0..halvings {
        r = r.square();
    }
    r.with_prec(prec)
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lower().to_f64(), self.upper().to_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.3e}", self.mid_f64(), self.radius_f64())
    }
}

impl Interval {
    /// Upper bound on `|self|` as an exact rational.
    pub fn magnitude(&self) -> Rational {
        let m = self.lo.abs().max(self.hi.abs());
        Rational::new(m, BigInt::one() << self.prec).expect("nonzero")
    }

    pub fn lo_f64(&self) -> f64 {
        self.lower().to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.upper().to_f64()
    }

    pub fn to_i64_floor(&self) -> Option<i64> {
        (&self.lo >> self.prec).to_i64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn encloses(iv: &Interval, x: f64) -> bool {
        iv.lo_f64() <= x && x <= iv.hi_f64()
    }

    #[test]
    fn constants() {
        let ln2 = Interval::ln2(P);
        assert!(encloses(&ln2, std::f64::consts::LN_2));
        assert!(ln2.width_f64() < 1e-35);
        let pi = Interval::pi(P);
        assert!(encloses(&pi, std::f64::consts::PI));
        assert!(pi.width_f64() < 1e-35);
        let e = Interval::e(P);
        assert!(encloses(&e, std::f64::consts::E), "{e:?}");
        assert!(e.width_f64() < 1e-30);
    }

    #[test]
    fn ln_and_exp_invert() {
        for x in [1e-9, 0.3, 1.0, 1.5, 2.0, 7.25, 1e6, 3.3e15] {
            let iv = Interval::from_f64(x, P);
            let l = iv.ln().unwrap();
            assert!((l.mid_f64() - x.ln()).abs() <= 1e-15 * x.ln().abs().max(1.0), "ln {x}");
            let back = l.exp();
            assert!(back.contains_rational(&Rational::from_f64(x).unwrap()), "exp(ln {x})");
            assert!(back.width_f64() < 1e-25 * x.max(1.0));
        }
        assert!(Interval::from_int(0, P).ln().is_none());
        assert!(Interval::from_int(-1, P).ln().is_none());
    }

    #[test]
    fn exp_of_negative_and_large() {
        let v = Interval::from_int(-20, P).exp();
        assert!((v.mid_f64() - (-20f64).exp()).abs() < 1e-22);
        let w = Interval::from_int(50, P).exp();
        assert!(((w.mid_f64() - 50f64.exp()) / 50f64.exp()).abs() < 1e-14);
        assert!(w.width_f64() / 50f64.exp() < 1e-25);
    }

    #[test]
    fn log2_of_powers_is_tight() {
        let l = Interval::from_int(1u64 << 40, P).log2().unwrap();
        assert!(l.contains_rational(&Rational::from_int(40)));
        assert!(l.width_f64() < 1e-30);
        let l3 = Interval::from_int(3, P).log2().unwrap();
        assert!(encloses(&l3, 3f64.log2()));
    }

    #[test]
    fn sqrt_and_division() {
        let two = Interval::from_int(2, P);
        let s = two.sqrt().unwrap();
        assert!(encloses(&s, std::f64::consts::SQRT_2));
        assert!(s.square().contains_rational(&Rational::from_int(2)));
        let third = Interval::from_int(1, P).div(&Interval::from_int(3, P)).unwrap();
        assert!(third.contains_rational(&Rational::frac(1, 3)));
        assert!(Interval::from_int(1, P).div(&Interval::from_int(0, P)).is_none());
    }

    #[test]
    fn comparisons() {
        let a = Interval::from_rational(&Rational::frac(1, 3), P);
        let b = Interval::from_rational(&Rational::frac(1, 2), P);
        assert!(a.certainly_lt(&b));
        assert_eq!(b.certain_cmp(&a), Some(Ordering::Greater));
        assert_eq!(a.certain_cmp(&a), None);
        let one = Interval::from_int(1, P);
        assert_eq!(one.certain_cmp(&one), Some(Ordering::Equal));
    }

    #[test]
    fn outward_rounding_mixed_signs() {
        let x =
            Interval::from_rational(&Rational::frac(-1, 3), P).hull(&Interval::from_rational(&Rational::frac(1, 7), P));
        let y = x.mul(&x);
        assert!(y.contains_rational(&Rational::frac(-1, 21)));
        assert!(y.contains_rational(&Rational::frac(1, 9)));
        assert!(x.square().lower().cmp_int(0) != Ordering::Less);
    }
}
