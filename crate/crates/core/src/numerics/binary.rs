//! Binary expansions: digits, digit reversal and blocks of 1-digits.
//!
//! Block counts follow the "maximal runs of 1s" convention, i.e. the number
//! of `01` factors in the expansion once a leading `0` is prepended. Read
//! literally over `ε_ν…ε_0` alone, the factor count would be one smaller for
//! every `n >= 1`, since the leading run has no `0` before it.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::Dyadic;
use crate::error::{Error, Result};

/// Binary digits `ε_ν…ε_0` of a nonnegative integer, most significant first.
///
/// For `n >= 1` the leading digit is 1; `0` is the single digit `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    bits: Vec<bool>,
}

impl BinaryWord {
    pub fn from_u64(n: u64) -> Self {
        if n == 0 {
            return BinaryWord { bits: vec![false] };
        }
        let len = 64 - n.leading_zeros();
        let bits = (0..len).rev().map(|i| (n >> i) & 1 == 1).collect();
        BinaryWord { bits }
    }

    /// Parses a word of `0`/`1` characters; leading zeros are dropped.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits: Vec<bool> = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        kind: "binary word",
                        input: s.to_string(),
                    })
                }
            }
        }
        match bits.iter().position(|&b| b) {
            Some(first) => Ok(BinaryWord {
                bits: bits[first..].to_vec(),
            }),
            None => Ok(BinaryWord { bits: vec![false] }),
        }
    }

    /// `(w)^k`, the word repeated `k` times, as an integer word.
    pub fn repeat(pattern: &str, k: usize) -> Result<Self> {
        Self::parse(&pattern.repeat(k))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `ν + 1`, the number of digits.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The digit `ε_i`, zero above the leading digit.
    pub fn digit(&self, i: usize) -> bool {
        i < self.bits.len() && self.bits[self.bits.len() - 1 - i]
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn to_biguint(&self) -> BigUint {
        self.bits
            .iter()
            .fold(BigUint::zero(), |acc, &b| (acc << 1u32) + BigUint::from(b as u8))
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return BinaryWord { bits: vec![false] };
        }
        let len = n.bits();
        let bits = (0..len).rev().map(|i| n.bit(i)).collect();
        BinaryWord { bits }
    }

    /// Number of maximal runs of 1-digits.
    pub fn block_count(&self) -> usize {
        let mut prev = false;
        let mut count = 0;
        for &b in &self.bits {
            if b && !prev {
                count += 1;
            }
            prev = b;
        }
        count
    }

    /// Digit reversal, dropping the zeros that move to the front.
    pub fn reversed(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.reverse();
        let first = bits.iter().position(|&b| b).unwrap_or(bits.len() - 1);
        BinaryWord {
            bits: bits[first..].to_vec(),
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

/// Number of binary digits of `n` (`0` for `n = 0`).
#[inline]
pub fn bit_len(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `||n / 2^j||`, the distance from `n/2^j` to the nearest integer.
pub fn dist_nearest_int(n: u64, j: u32) -> Dyadic {
    assert!(j >= 1, "j must be positive");
    if j > 64 {
        // n < 2^64 <= 2^(j-1), so n/2^j < 1/2
        return Dyadic::new(n, j);
    }
    let modulus = 1u128 << j;
    let r = n as u128 & (modulus - 1);
    Dyadic::new(r.min(modulus - r), j)
}

/// `n^R`: the integer whose binary digits are those of `n` read backwards.
pub fn reverse(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ReverseZero);
    }
    Ok(n.reverse_bits() >> n.leading_zeros())
}

/// `|n|_{01}`: the number of maximal blocks of consecutive 1-digits.
#[inline]
pub fn block_count(n: u64) -> u32 {
    // each block contributes exactly one 1 whose lower neighbour is 0
    (n & !(n << 1)).count_ones()
}

/// All `n` in `[2^k, 2^(k+1))` with exactly `blocks` blocks of 1s, ascending.
pub fn enumerate_by_blocks(k: u32, blocks: u32) -> Vec<u64> {
    assert!(k < 63, "k must be below 63");
    let mut out = Vec::new();
    if blocks == 0 {
        return out;
    }
    // The leading digit is 1, which opens the first block.
    fill_blocks(1, k, 1, true, blocks, &mut out);
    out
}

/// Depth-first over the remaining `remaining` digits, 0 before 1 so the output
/// comes out in ascending order. Only prefixes that still admit a completion
/// with exactly `target` blocks are expanded.
fn fill_blocks(prefix: u64, remaining: u32, blocks: u32, last: bool, target: u32, out: &mut Vec<u64>) {
    if remaining == 0 {
        if blocks == target {
            out.push(prefix);
        }
        return;
    }
    let reachable = if last { remaining / 2 } else { remaining.div_ceil(2) };
    if blocks > target || blocks + reachable < target {
        return;
    }
    fill_blocks(prefix << 1, remaining - 1, blocks, false, target, out);
    fill_blocks(
        (prefix << 1) | 1,
        remaining - 1,
        blocks + !last as u32,
        true,
        target,
        out,
    );
}

/// Iterator over every `n` in `[1, limit)` with at most `max_blocks` blocks
/// of 1s, in ascending order.
///
/// Instead of testing each integer it jumps over whole ranges: once an
/// integer has more than `max_blocks` blocks, every integer sharing its
/// digits above the start of the offending block is skipped at once.
#[derive(Clone, Debug)]
pub struct LowBlockIter {
    next: u64,
    limit: u64,
    max_blocks: u32,
}

impl LowBlockIter {
    pub fn new(limit: u64, max_blocks: u32) -> Self {
        LowBlockIter {
            next: 1,
            limit,
            max_blocks,
        }
    }
}

impl Iterator for LowBlockIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut x = self.next;
        loop {
            if x >= self.limit || x == 0 {
                self.next = self.limit;
                return None;
            }
            if block_count(x) <= self.max_blocks {
                self.next = x + 1;
                return Some(x);
            }
            // Highest digits of the blocks, most significant first.
            let mut tops = x & !(x >> 1);
            for _ in 0..self.max_blocks {
                tops &= !(1u64 << (63 - tops.leading_zeros()));
            }
            let s = 63 - tops.leading_zeros();
            x = match ((x >> (s + 1)) + 1).checked_shl(s + 1) {
                Some(y) if y >> (s + 1) == (x >> (s + 1)) + 1 => y,
                _ => u64::MAX,
            };
        }
    }
}

/// Every `n` in `[1, limit)` with `block_count(n) <= max_blocks`.
pub fn enumerate_low_block(limit: u64, max_blocks: u32) -> LowBlockIter {
    LowBlockIter::new(limit, max_blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: count "01" factors in "0" + binary string.
    fn string_block_count(n: u64) -> u32 {
        let s = format!("0{n:b}");
        s.as_bytes().windows(2).filter(|w| w == b"01").count() as u32
    }

    #[test]
    fn nearest_int_examples() {
        assert_eq!(dist_nearest_int(3, 1), Dyadic::new(1, 1));
        assert_eq!(dist_nearest_int(5, 3), Dyadic::new(3, 3));
        assert_eq!(dist_nearest_int(8, 2), Dyadic::zero());
        assert_eq!(dist_nearest_int(u64::MAX, 70), Dyadic::new(u64::MAX, 70));
        assert_eq!(dist_nearest_int(u64::MAX, 64), Dyadic::new(1, 64));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(19), Ok(25));
        assert_eq!(reverse(12), Ok(3));
        assert_eq!(reverse(1), Ok(1));
        assert_eq!(reverse(0), Err(Error::ReverseZero));
        assert_eq!(reverse(u64::MAX), Ok(u64::MAX));
    }

    #[test]
    fn block_count_examples() {
        assert_eq!(block_count(0), 0);
        assert_eq!(block_count(21), 3);
        assert_eq!(block_count(12), 1);
        assert_eq!(BinaryWord::from_u64(21).block_count(), 3);
    }

    #[test]
    fn block_count_matches_string_scan() {
        for n in 0..(1u64 << 16) {
            assert_eq!(block_count(n), string_block_count(n), "n = {n}");
        }
    }

    #[test]
    fn reversal_properties() {
        for n in 1..(1u64 << 16) {
            let r = reverse(n).unwrap();
            assert_eq!(r & 1, 1);
            assert_eq!(reverse(2 * n).unwrap(), r);
            if n & 1 == 1 {
                assert_eq!(reverse(r).unwrap(), n);
            }
            assert_eq!(BinaryWord::from_u64(n).reversed().to_u64(), Some(r));
        }
    }

    #[test]
    fn by_blocks_examples() {
        assert_eq!(enumerate_by_blocks(2, 2), vec![5]);
        assert_eq!(enumerate_by_blocks(2, 1), vec![4, 6, 7]);
        assert!(enumerate_by_blocks(1, 2).is_empty());
    }

    #[test]
    fn by_blocks_matches_scan() {
        for k in 0..=12u32 {
            let lo = 1u64 << k;
            for l in 1..=(k + 2) / 2 + 1 {
                let scan: Vec<u64> = (lo..2 * lo).filter(|&n| block_count(n) == l).collect();
                assert_eq!(enumerate_by_blocks(k, l), scan, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn low_block_examples() {
        assert_eq!(enumerate_low_block(8, 1).collect::<Vec<_>>(), vec![1, 2, 3, 4, 6, 7]);
        assert_eq!(
            enumerate_low_block(8, 2).collect::<Vec<_>>(),
            (1..8).collect::<Vec<_>>()
        );
        assert_eq!(enumerate_low_block(2, 1).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn low_block_matches_scan() {
        for limit in [3u64, 17, 100, 1 << 12, 5000] {
            for m in 1..=5 {
                let scan: Vec<u64> = (1..limit).filter(|&n| block_count(n) <= m).collect();
                assert_eq!(
                    enumerate_low_block(limit, m).collect::<Vec<_>>(),
                    scan,
                    "limit={limit} m={m}"
                );
            }
        }
    }

    #[test]
    fn low_block_near_u64_max() {
        let v: Vec<u64> = LowBlockIter {
            next: u64::MAX - 4,
            limit: u64::MAX,
            max_blocks: 1,
        }
        .collect();
        assert_eq!(v, vec![u64::MAX - 3, u64::MAX - 1]);
    }

    #[test]
    fn word_round_trip() {
        for n in [0u64, 1, 2, 19, u64::MAX] {
            let w = BinaryWord::from_u64(n);
            assert_eq!(w.to_u64(), Some(n));
            assert_eq!(BinaryWord::from_biguint(&w.to_biguint()), w);
            assert_eq!(w.len() as u32, bit_len(n).max(1));
        }
        assert_eq!(BinaryWord::parse("0011").unwrap().to_u64(), Some(3));
        assert_eq!(BinaryWord::repeat("01", 3).unwrap().to_u64(), Some(21));
        assert!(BinaryWord::parse("012").is_err());
        assert!(BinaryWord::from_u64(19).digit(4));
        assert!(!BinaryWord::from_u64(19).digit(2));
    }
}
