use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// An exact dyadic rational `num / 2^exp`.
///
/// Always normalized: either `exp == 0` or `num` is odd. Zero is `0/2^0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    /// Builds from a fixed-point numerator, as produced by the fast sweeps.
    pub fn from_scaled(num: u128, exp: u32) -> Self {
        if num == 0 {
            return Dyadic::zero();
        }
        let tz = num.trailing_zeros().min(exp);
        Dyadic {
            num: BigInt::from(num >> tz),
            exp: exp - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { num: n.into(), exp: 0 }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = (tz.min(self.exp as u64)) as u32;
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    pub fn half(&self) -> Self {
        self.shr(1)
    }

    /// Divides by `2^k`.
    pub fn shr(&self, k: u32) -> Self {
        Dyadic::new(self.num.clone(), self.exp + k)
    }

    /// Multiplies by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        if k <= self.exp {
            Dyadic {
                num: self.num.clone(),
                exp: self.exp - k,
            }
        } else {
            Dyadic {
                num: &self.num << (k - self.exp),
                exp: 0,
            }
        }
    }

    /// The numerator at a common scale `2^exp` (requires `exp >= self.exp`).
    pub fn scaled_num(&self, exp: u32) -> BigInt {
        debug_assert!(exp >= self.exp);
        &self.num << (exp - self.exp)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), BigInt::one() << self.exp).expect("power of two")
    }

    pub fn to_f64(&self) -> f64 {
        match self.num.to_f64() {
            Some(n) if n.is_finite() && self.exp < 1000 => n / 2f64.powi(self.exp as i32),
            _ => self.to_rational().to_f64(),
        }
    }

    /// Embeds the dyadic into `Rational` only if it is one; `None` otherwise.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let q = r.denom();
        let tz = q.trailing_zeros().unwrap_or(0);
        if (q >> tz as usize).is_one() {
            Some(Dyadic::new(r.numer().clone(), tz as u32))
        } else {
            None
        }
    }
}

fn align<'a>(a: &'a Dyadic, b: &'a Dyadic) -> (BigInt, BigInt, u32) {
    let e = a.exp.max(b.exp);
    (a.scaled_num(e), b.scaled_num(e), e)
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        let (x, y, e) = align(self, rhs);
        Dyadic::new(x + y, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        let (x, y, e) = align(self, rhs);
        Dyadic::new(x - y, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y, _) = align(self, other);
        x.cmp(&y)
    }
}

impl From<Dyadic> for Rational {
    fn from(d: Dyadic) -> Rational {
        d.to_rational()
    }
}

/// Canonical text form `p/2^e`, or plain `p` when `e = 0`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            kind: "dyadic",
            input: s.to_string(),
        };
        let t = s.trim();
        let (p, e) = match t.split_once("/2^") {
            Some((p, e)) => (p, e.parse::<u32>().map_err(|_| err())?),
            None => (t, 0),
        };
        let p: BigInt = p.parse().map_err(|_| err())?;
        let d = Dyadic::new(p, e);
        // Only the canonical spelling round-trips.
        if d.exp != e && !(d.is_zero() && e == 0) {
            return Err(err());
        }
        Ok(d)
    }
}

impl Dyadic {
    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }
}
