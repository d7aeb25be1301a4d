//! Digit-reversal invariance for the affine recurrences
//! `x_{2n} = x_n`, `x_{2n+1} = α·x_n + β·x_{n+1} + γ`.
//!
//! Two evaluators are provided: pair iteration on the recurrence and the
//! product `v·A(ε_1)…A(ε_{ν−1})·w` of transition matrices over the interior
//! digits of an odd `n`. The second only describes the sequence seeded with
//! `x_1 = 1`; reversal itself is checked for arbitrary seeds.

use std::cell::RefCell;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bit_len, reverse, Rational};
use crate::pairs::{self, PairRule, PairStream};
use crate::report::{Check, Witness};
use crate::sweep;
use crate::vdc::{d_explicit, d_explicit_scaled};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineRecurrence {
    #[serde(serialize_with = "as_text")]
    pub alpha: Rational,
    #[serde(serialize_with = "as_text")]
    pub beta: Rational,
    #[serde(serialize_with = "as_text")]
    pub gamma: Rational,
    #[serde(serialize_with = "as_text")]
    pub x1: Rational,
}

fn as_text<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl AffineRecurrence {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, x1: Rational) -> Self {
        AffineRecurrence { alpha, beta, gamma, x1 }
    }

    /// `(1/2, 1/2, 1/2)` seeded with 1: the scaled discrepancy `d_n`.
    pub fn discrepancy() -> Self {
        let h = Rational::frac(1, 2);
        AffineRecurrence::new(h.clone(), h.clone(), h, Rational::one())
    }

    /// `(1, 1, 0)` seeded with 1: Stern's diatomic sequence.
    pub fn stern() -> Self {
        AffineRecurrence::new(Rational::one(), Rational::one(), Rational::zero(), Rational::one())
    }

    pub fn matrices(&self) -> TransitionMatrices {
        TransitionMatrices::new(&self.alpha, &self.beta, &self.gamma)
    }
}

impl fmt::Display for AffineRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha, beta, gamma, x1) = ({}, {}, {}, {})",
            self.alpha, self.beta, self.gamma, self.x1
        )
    }
}

/// The recurrence as a pair rule starting at `(x_1, x_2) = (x_1, x_1)`.
struct AffineRule<'a>(&'a AffineRecurrence);

impl PairRule for AffineRule<'_> {
    type Value = Rational;
    const BASE: u64 = 1;

    fn seed(&self) -> (Rational, Rational) {
        (self.0.x1.clone(), self.0.x1.clone())
    }

    fn odd(&self, xm: &Rational, xm1: &Rational) -> Rational {
        &(&(&self.0.alpha * xm) + &(&self.0.beta * xm1)) + &self.0.gamma
    }
}

/// `x_n` for `n ≥ 1`.
pub fn eval_recurrence(rec: &AffineRecurrence, n: u64) -> Rational {
    assert!(n >= 1, "the recurrence starts at x_1");
    pairs::eval(&AffineRule(rec), n)
}

/// `x_1, …, x_{limit−1}` (index 0 holds a placeholder zero).
pub fn eval_batch(rec: &AffineRecurrence, limit: u64) -> Vec<Rational> {
    let mut out = Vec::with_capacity(limit as usize);
    out.push(Rational::zero());
    if limit > 1 {
        out.extend(PairStream::new(AffineRule(rec), 1, limit).map(|(_, x)| x));
    }
    out
}

/// `x / D^exp` with `D` the common denominator of the parameters.
#[derive(Clone, Debug)]
struct Scaled {
    num: BigInt,
    exp: u32,
}

/// The recurrence with all parameters over one denominator `D`, so that
/// sweeps run on integers (no gcd per step).
struct IntegerForm {
    alpha: BigInt,
    beta: BigInt,
    gamma: BigInt,
    x1: BigInt,
    powers: RefCell<Vec<BigInt>>,
}

impl IntegerForm {
    fn new(params: [&Rational; 4]) -> Self {
        let d = params.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let lift = |p: &Rational| p.numer() * (&d / p.denom());
        IntegerForm {
            alpha: lift(params[0]),
            beta: lift(params[1]),
            gamma: lift(params[2]),
            x1: lift(params[3]),
            powers: RefCell::new(vec![BigInt::one(), d]),
        }
    }

    fn power(&self, k: u32) -> BigInt {
        let mut p = self.powers.borrow_mut();
        while p.len() <= k as usize {
            let next = p.last().unwrap() * &p[1];
            p.push(next);
        }
        p[k as usize].clone()
    }

    fn lift(&self, x: &Scaled, exp: u32) -> BigInt {
        if x.exp == exp {
            x.num.clone()
        } else {
            &x.num * self.power(exp - x.exp)
        }
    }

    fn same(&self, x: &Scaled, y: &Scaled) -> bool {
        let e = x.exp.max(y.exp);
        self.lift(x, e) == self.lift(y, e)
    }

    fn to_rational(&self, x: &Scaled) -> Rational {
        Rational::new(x.num.clone(), self.power(x.exp)).expect("D > 0")
    }
}

impl PairRule for &IntegerForm {
    type Value = Scaled;
    const BASE: u64 = 1;

    fn seed(&self) -> (Scaled, Scaled) {
        let x1 = Scaled {
            num: self.x1.clone(),
            exp: 1,
        };
        (x1.clone(), x1)
    }

    fn odd(&self, xm: &Scaled, xm1: &Scaled) -> Scaled {
        let e = xm.exp.max(xm1.exp);
        let num = &self.alpha * self.lift(xm, e) + &self.beta * self.lift(xm1, e) + &self.gamma * self.power(e);
        Scaled { num, exp: e + 1 }
    }
}

fn integer_batch(form: &IntegerForm, limit: u64) -> Vec<Scaled> {
    let mut out = Vec::with_capacity(limit as usize);
    out.push(Scaled {
        num: BigInt::zero(),
        exp: 0,
    });
    if limit > 1 {
        out.extend(PairStream::new(form, 1, limit).map(|(_, x)| x));
    }
    out
}

/// A 3×3 matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix3(pub [[Rational; 3]; 3]);

/// A row vector of length 3.
pub type Row3 = [Rational; 3];

impl Matrix3 {
    pub fn identity() -> Self {
        let (o, z) = (Rational::one, Rational::zero);
        Matrix3([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone())))
    }

    pub fn mul(&self, other: &Matrix3) -> Matrix3 {
        Matrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).fold(Rational::zero(), |acc, k| acc + &self.0[i][k] * &other.0[k][j]))
        }))
    }
}

/// `row · m`.
pub fn row_mul(row: &Row3, m: &Matrix3) -> Row3 {
    std::array::from_fn(|j| (0..3).fold(Rational::zero(), |acc, k| acc + &row[k] * &m.0[k][j]))
}

fn row_combination(terms: &[(&Rational, &Row3)]) -> Row3 {
    std::array::from_fn(|j| terms.iter().fold(Rational::zero(), |acc, (c, r)| acc + *c * &r[j]))
}

/// `A(0)`, `A(1)`, `v = (α, β, γ)` and `w = (1, 1, 1)ᵀ`.
#[derive(Clone, Debug)]
pub struct TransitionMatrices {
    pub a0: Matrix3,
    pub a1: Matrix3,
    pub v: Row3,
    pub w: Row3,
}

impl TransitionMatrices {
    pub fn new(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Self {
        let (o, z) = (Rational::one, Rational::zero);
        let abc = [alpha.clone(), beta.clone(), gamma.clone()];
        TransitionMatrices {
            a0: Matrix3([[o(), z(), z()], abc.clone(), [z(), z(), o()]]),
            a1: Matrix3([abc.clone(), [z(), o(), z()], [z(), z(), o()]]),
            v: abc,
            w: [o(), o(), o()],
        }
    }

    pub fn digit(&self, bit: bool) -> &Matrix3 {
        if bit {
            &self.a1
        } else {
            &self.a0
        }
    }
}

fn dot(a: &Row3, b: &Row3) -> Rational {
    (0..3).fold(Rational::zero(), |acc, k| acc + &a[k] * &b[k])
}

/// `v·A(ε_1)…A(ε_{ν−1})·w` for odd `n ≥ 3`; the word is empty for `n = 3`.
pub fn eval_matrix(rec: &AffineRecurrence, n: u64) -> Result<Rational> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::MatrixDomain(n));
    }
    let m = rec.matrices();
    let nu = bit_len(n) - 1;
    let mut row = m.v.clone();
    for i in 1..nu {
        row = row_mul(&row, m.digit((n >> i) & 1 == 1));
    }
    Ok(dot(&row, &m.w))
}

type IntRow = [BigInt; 3];
type IntMatrix = [IntRow; 3];

fn int_row_mul(row: &IntRow, m: &IntMatrix) -> IntRow {
    std::array::from_fn(|j| &row[0] * &m[0][j] + &row[1] * &m[1][j] + &row[2] * &m[2][j])
}

/// Formula values for every odd `n` in `[3, 2^max_bits)`, sharing prefix
/// products across words. Returns `(n, value)` in no particular order.
fn matrix_values(form: &IntegerForm, max_bits: u32) -> Vec<(u64, Scaled)> {
    let d = form.power(1);
    let z = BigInt::zero;
    let v: IntRow = [form.alpha.clone(), form.beta.clone(), form.gamma.clone()];
    // D·A(0) and D·A(1)
    let digits: [IntMatrix; 2] = [
        [[d.clone(), z(), z()], v.clone(), [z(), z(), d.clone()]],
        [v.clone(), [z(), d.clone(), z()], [z(), z(), d.clone()]],
    ];
    let mut out = Vec::new();
    // (row v·A(ε_1)…A(ε_i) scaled by D^i, low bits of n so far, i)
    let mut stack = vec![(v, 1u64, 1u32)];
    while let Some((row, low, i)) = stack.pop() {
        // close the word with the leading digit: n = 2^i + low
        let n = (1u64 << i) | low;
        if i < max_bits {
            let num = &row[0] + &row[1] + &row[2];
            out.push((n, Scaled { num, exp: i }));
        }
        if i + 1 < max_bits {
            for bit in [0, 1] {
                stack.push((int_row_mul(&row, &digits[bit]), low | (bit as u64) << i, i + 1));
            }
        }
    }
    out
}

/// The matrix formula agrees with pair iteration for every odd
/// `3 ≤ n < 2^max_bits`, for the sequence seeded with `x_1 = 1`.
pub fn check_matrix_agreement(alpha: &Rational, beta: &Rational, gamma: &Rational, max_bits: u32) -> Check {
    let rec = AffineRecurrence::new(alpha.clone(), beta.clone(), gamma.clone(), Rational::one());
    let form = IntegerForm::new([alpha, beta, gamma, &rec.x1]);
    let values = integer_batch(&form, 1 << max_bits);
    let mut formula = matrix_values(&form, max_bits);
    formula.sort_by_key(|(n, _)| *n);
    for (n, v) in formula {
        let x = &values[n as usize];
        if !form.same(&v, x) {
            return Err(Witness::at(
                n,
                format!(
                    "{rec}: matrix product {} but recurrence {}",
                    form.to_rational(&v),
                    form.to_rational(x)
                ),
            ));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Products `v·XYZ`.
    V,
    /// Transposed products `wᵀ·XᵀYᵀZᵀ`.
    W,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRecord {
    pub word: &'static str,
    pub side: Side,
    pub holds: bool,
}

/// The eight three-letter words with their expansion
/// `u·XYZ = c2·u·(word2) + c1·u·(word1) + c0·u`.
struct Identity {
    word: &'static str,
    word2: &'static str,
    word1: &'static str,
    coeffs: fn(&Rational, &Rational) -> [Rational; 3],
}

fn quad(x: &Rational) -> [Rational; 2] {
    let sq = x * x;
    [&(&sq + x) + &Rational::one(), -(&sq + x)]
}

const IDENTITIES: [Identity; 8] = [
    Identity {
        word: "AAA",
        word2: "AA",
        word1: "A",
        coeffs: |_, b| {
            let [p, q] = quad(b);
            [Rational::zero(), p, q]
        },
    },
    Identity {
        word: "AAB",
        word2: "AB",
        word1: "B",
        coeffs: |_, b| [b + &Rational::one(), -b, Rational::zero()],
    },
    Identity {
        word: "ABA",
        word2: "BA",
        word1: "A",
        coeffs: |_, b| [b + &Rational::one(), Rational::zero(), -b],
    },
    Identity {
        word: "ABB",
        word2: "AB",
        word1: "A",
        coeffs: |a, _| [a + &Rational::one(), -a, Rational::zero()],
    },
    Identity {
        word: "BAA",
        word2: "BA",
        word1: "B",
        coeffs: |_, b| [b + &Rational::one(), -b, Rational::zero()],
    },
    Identity {
        word: "BAB",
        word2: "AB",
        word1: "B",
        coeffs: |a, _| [a + &Rational::one(), Rational::zero(), -a],
    },
    Identity {
        word: "BBA",
        word2: "BA",
        word1: "A",
        coeffs: |a, _| [a + &Rational::one(), -a, Rational::zero()],
    },
    Identity {
        word: "BBB",
        word2: "BB",
        word1: "B",
        coeffs: |a, _| {
            let [p, q] = quad(a);
            [Rational::zero(), p, q]
        },
    },
];

fn word_product(m: &TransitionMatrices, word: &str, transposed: bool) -> Matrix3 {
    word.chars().fold(Matrix3::identity(), |acc, c| {
        let x = if c == 'A' { &m.a0 } else { &m.a1 };
        acc.mul(&if transposed { x.transpose() } else { x.clone() })
    })
}

/// Each of the 16 identities (8 words, `v` and `w` side) evaluated exactly.
pub fn verify_matrix_identities(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Vec<IdentityRecord> {
    let m = TransitionMatrices::new(alpha, beta, gamma);
    let mut out = Vec::with_capacity(16);
    for id in &IDENTITIES {
        let [c2, c1, c0] = (id.coeffs)(alpha, beta);
        for (side, start, transposed) in [(Side::V, &m.v, false), (Side::W, &m.w, true)] {
            let lhs = row_mul(start, &word_product(&m, id.word, transposed));
            let r2 = row_mul(start, &word_product(&m, id.word2, transposed));
            let r1 = row_mul(start, &word_product(&m, id.word1, transposed));
            let rhs = row_combination(&[(&c2, &r2), (&c1, &r1), (&c0, start)]);
            out.push(IdentityRecord {
                word: id.word,
                side,
                holds: lhs == rhs,
            });
        }
    }
    out
}

/// `x_n = x_{n^R}` for every `1 ≤ n < limit`.
pub fn check_reversal(rec: &AffineRecurrence, limit: u64) -> Check {
    let form = IntegerForm::new([&rec.alpha, &rec.beta, &rec.gamma, &rec.x1]);
    // n^R < 2^bit_len(n), so one table up to the next power of two suffices
    let table = integer_batch(&form, 1u64 << bit_len(limit - 1).max(1));
    for n in 1..limit {
        let r = reverse(n).expect("n >= 1");
        let (x, y) = (&table[n as usize], &table[r as usize]);
        if !form.same(x, y) {
            return Err(Witness::at(
                n,
                format!(
                    "{rec}: x_n = {} but x_(n^R) = x_{r} = {}",
                    form.to_rational(x),
                    form.to_rational(y)
                ),
            ));
        }
    }
    Ok(())
}

/// `d_n = d_{n^R}` for every `1 ≤ n < limit`, both sides from the explicit
/// series (independent of the recurrence).
pub fn check_corollary(limit: u64) -> Check {
    let exp = bit_len(limit).max(1);
    sweep::first_failure(1, limit, |a, b| {
        (a..b).find_map(|n| {
            let r = reverse(n).expect("n >= 1");
            let (dn, dr) = (d_explicit_scaled(n, exp), d_explicit_scaled(r, exp));
            (dn != dr).then(|| {
                (
                    n,
                    format!("d_n = {} but d_(n^R) = d_{r} = {}", d_explicit(n), d_explicit(r)),
                )
            })
        })
    })
    .map_or(Ok(()), |(n, d)| Err(Witness::at(n, d)))
}

/// A uniformly random rational `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::frac(p, q)
}

/// Numerators and denominators of random parameters are bounded by this.
pub const PARAM_BOUND: i64 = 1_000_000;

/// `count` seeded parameter triples `(α, β, γ)`.
pub fn random_triples(seed: u64, count: usize) -> Vec<[Rational; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| random_rational(&mut rng, PARAM_BOUND)))
        .collect()
}

/// `count` seeded recurrences with random `(α, β, γ, x_1)`.
pub fn random_recurrences(seed: u64, count: usize) -> Vec<AffineRecurrence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let [a, b, c, x] = std::array::from_fn(|_| random_rational(&mut rng, PARAM_BOUND));
            AffineRecurrence::new(a, b, c, x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vdc::{d_batch, d_recurrence};

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    #[test]
    fn recurrence_examples() {
        let d = AffineRecurrence::discrepancy();
        assert_eq!(eval_recurrence(&d, 19), r(37, 16));
        assert_eq!(eval_recurrence(&AffineRecurrence::stern(), 11), r(5, 1));
        let odd = AffineRecurrence::new(r(2, 3), r(-1, 5), r(7, 2), r(9, 4));
        for k in 0..20 {
            assert_eq!(eval_recurrence(&odd, 1 << k), r(9, 4));
        }
        let batch = eval_batch(&odd, 300);
        for n in 1..300 {
            assert_eq!(batch[n as usize], eval_recurrence(&odd, n));
        }
    }

    #[test]
    fn integer_form_matches_rationals() {
        let rec = AffineRecurrence::new(r(2, 3), r(-1, 5), r(7, 2), r(9, 4));
        let form = IntegerForm::new([&rec.alpha, &rec.beta, &rec.gamma, &rec.x1]);
        let exact = eval_batch(&rec, 600);
        for (n, x) in integer_batch(&form, 600).iter().enumerate().skip(1) {
            assert_eq!(form.to_rational(x), exact[n], "n={n}");
        }
    }

    #[test]
    fn discrepancy_specialization() {
        let d = AffineRecurrence::discrepancy();
        let batch = eval_batch(&d, 1 << 12);
        for (n, dn) in d_batch(1 << 12).skip(1) {
            assert_eq!(batch[n as usize], dn.to_rational());
        }
    }

    #[test]
    fn matrix_examples() {
        let d = AffineRecurrence::discrepancy();
        assert_eq!(eval_matrix(&d, 3).unwrap(), r(3, 2));
        assert_eq!(eval_matrix(&d, 19).unwrap(), r(37, 16));
        assert_eq!(eval_matrix(&AffineRecurrence::stern(), 5).unwrap(), r(3, 1));
        assert_eq!(eval_matrix(&d, 4), Err(Error::MatrixDomain(4)));
        assert_eq!(eval_matrix(&d, 1), Err(Error::MatrixDomain(1)));
    }

    #[test]
    fn shared_products_match_pointwise() {
        let rec = AffineRecurrence::new(r(2, 3), r(-1, 5), r(7, 2), Rational::one());
        let form = IntegerForm::new([&rec.alpha, &rec.beta, &rec.gamma, &rec.x1]);
        let vals = matrix_values(&form, 9);
        assert_eq!(vals.len(), (1 << 8) - 1);
        for (n, v) in vals {
            assert_eq!(form.to_rational(&v), eval_matrix(&rec, n).unwrap(), "n={n}");
        }
        assert_eq!(check_matrix_agreement(&r(2, 3), &r(-1, 5), &r(7, 2), 11), Ok(()));
    }

    #[test]
    fn matrix_needs_unit_seed() {
        let rec = AffineRecurrence::new(r(2, 3), r(-1, 5), r(7, 2), r(3, 1));
        assert_ne!(eval_matrix(&rec, 3).unwrap(), eval_recurrence(&rec, 3));
    }

    #[test]
    fn identities_hold() {
        for (a, b, c) in [
            (r(0, 1), r(0, 1), r(0, 1)),
            (r(1, 2), r(1, 2), r(1, 2)),
            (r(1, 1), r(1, 1), r(0, 1)),
        ] {
            let recs = verify_matrix_identities(&a, &b, &c);
            assert_eq!(recs.len(), 16);
            assert!(recs.iter().all(|x| x.holds));
        }
        for [a, b, c] in random_triples(3, 20) {
            assert!(verify_matrix_identities(&a, &b, &c).iter().all(|x| x.holds));
        }
    }

    #[test]
    fn identity_checker_detects_a_wrong_coefficient() {
        // swapping the B-word coefficients of BAB breaks its v-side identity
        let (a, b, c) = (r(2, 7), r(-3, 5), r(4, 1));
        let m = TransitionMatrices::new(&a, &b, &c);
        let lhs = row_mul(&m.v, &word_product(&m, "BAB", false));
        let r2 = row_mul(&m.v, &word_product(&m, "AB", false));
        let r1 = row_mul(&m.v, &word_product(&m, "B", false));
        let wrong = row_combination(&[(&(&a + &Rational::one()), &r2), (&-&a, &r1)]);
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(check_reversal(&AffineRecurrence::discrepancy(), 32), Ok(()));
        assert_eq!(d_recurrence(19), d_recurrence(25));
        assert_eq!(check_reversal(&AffineRecurrence::stern(), 1 << 12), Ok(()));
        for rec in random_recurrences(11, 3) {
            assert_eq!(check_reversal(&rec, 1 << 10), Ok(()), "{rec}");
        }
        assert_eq!(check_corollary(1 << 14), Ok(()));
    }

    #[test]
    fn seeded_parameters_are_reproducible() {
        assert_eq!(random_triples(5, 4), random_triples(5, 4));
        assert_ne!(random_triples(5, 4), random_triples(6, 4));
        for [a, b, c] in random_triples(1, 50) {
            for x in [a, b, c] {
                assert!(x.denom() <= &PARAM_BOUND.into() && x.numer().magnitude() <= &(PARAM_BOUND as u64).into());
            }
        }
    }
}
