//! Pair iteration for divide-and-conquer recurrences of the form
//! `x_{2m} = x_m`, `x_{2m+1} = f(x_m, x_{m+1})`.
//!
//! The pair `(x_m, x_{m+1})` is carried along the binary digits of `n`,
//! most significant first: digit 0 maps it to `(x_{2m}, x_{2m+1})`, digit 1
//! to `(x_{2m+1}, x_{2m+2})`. A single value costs `O(log n)` steps with no
//! table; [`PairStream`] produces consecutive values in amortized `O(1)`.

use crate::numerics::bit_len;

pub trait PairRule {
    type Value: Clone;

    /// Index of the seed pair: 0 if the sequence starts at `x_0`, 1 if at `x_1`.
    const BASE: u64;

    /// `(x_BASE, x_{BASE+1})`.
    fn seed(&self) -> (Self::Value, Self::Value);

    /// `x_{2m+1}` from `x_m` and `x_{m+1}`.
    fn odd(&self, xm: &Self::Value, xm1: &Self::Value) -> Self::Value;
}

#[inline]
fn step<R: PairRule>(rule: &R, pair: &(R::Value, R::Value), bit: bool) -> (R::Value, R::Value) {
    let mid = rule.odd(&pair.0, &pair.1);
    if bit {
        (mid, pair.1.clone())
    } else {
        (pair.0.clone(), mid)
    }
}

/// Number of digit steps from the seed to index `n`.
#[inline]
fn depth<R: PairRule>(n: u64) -> u32 {
    if R::BASE == 0 {
        bit_len(n)
    } else {
        bit_len(n) - 1
    }
}

/// `(x_n, x_{n+1})`. Panics if `n < R::BASE`.
pub fn eval_pair<R: PairRule>(rule: &R, n: u64) -> (R::Value, R::Value) {
    assert!(n >= R::BASE, "index below the seed");
    let mut pair = rule.seed();
    for i in (0..depth::<R>(n)).rev() {
        pair = step(rule, &pair, (n >> i) & 1 == 1);
    }
    pair
}

/// `x_n` by pair iteration.
pub fn eval<R: PairRule>(rule: &R, n: u64) -> R::Value {
    eval_pair(rule, n).0
}

/// Consecutive values `x_start, x_{start+1}, …, x_{end-1}`.
///
/// Keeps the pair for every prefix `n >> i`; moving from `n` to `n + 1` only
/// the prefixes below the lowest 0-digit of `n` change.
pub struct PairStream<R: PairRule> {
    rule: R,
    n: u64,
    end: u64,
    levels: Vec<(R::Value, R::Value)>,
}

impl<R: PairRule> PairStream<R> {
    pub fn new(rule: R, start: u64, end: u64) -> Self {
        assert!(start >= R::BASE, "index below the seed");
        let mut s = PairStream {
            rule,
            n: start,
            end,
            levels: Vec::new(),
        };
        if start < end {
            s.rebuild();
        }
        s
    }

    fn rebuild(&mut self) {
        let d = depth::<R>(self.n) as usize;
        let seed = self.rule.seed();
        self.levels.clear();
        self.levels.resize(d + 1, seed);
        for i in (0..d).rev() {
            self.levels[i] = step(&self.rule, &self.levels[i + 1], (self.n >> i) & 1 == 1);
        }
    }

    /// `(x_n, x_{n+1})` at the current position.
    pub fn current_pair(&self) -> &(R::Value, R::Value) {
        &self.levels[0]
    }

    fn advance(&mut self) {
        let t = self.n.trailing_ones() as usize;
        self.n += 1;
        if self.n >= self.end {
            return;
        }
        if t + 1 >= self.levels.len() {
            self.rebuild();
            return;
        }
        for i in (0..=t).rev() {
            self.levels[i] = step(&self.rule, &self.levels[i + 1], (self.n >> i) & 1 == 1);
        }
    }
}

impl<R: PairRule> Iterator for PairStream<R> {
    type Item = (u64, R::Value);

    fn next(&mut self) -> Option<Self::Item> {
        if self.n >= self.end {
            return None;
        }
        let out = (self.n, self.levels[0].0.clone());
        self.advance();
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.end.saturating_sub(self.n) as usize;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stern's diatomic sequence from s_0 = 0, s_1 = 1.
    struct Stern0;
    impl PairRule for Stern0 {
        type Value = u64;
        const BASE: u64 = 0;
        fn seed(&self) -> (u64, u64) {
            (0, 1)
        }
        fn odd(&self, a: &u64, b: &u64) -> u64 {
            a + b
        }
    }

    /// Counts pairs of the same sequence started at 1.
    struct Stern1;
    impl PairRule for Stern1 {
        type Value = u64;
        const BASE: u64 = 1;
        fn seed(&self) -> (u64, u64) {
            (1, 1)
        }
        fn odd(&self, a: &u64, b: &u64) -> u64 {
            a + b
        }
    }

    fn table(n: usize) -> Vec<u64> {
        let mut s = vec![0u64; n + 2];
        s[1] = 1;
        for m in 1..=n / 2 {
            s[2 * m] = s[m];
            s[2 * m + 1] = s[m] + s[m + 1];
        }
        s
    }

    #[test]
    fn eval_matches_table() {
        let t = table(5000);
        for n in 0..5000u64 {
            assert_eq!(eval(&Stern0, n), t[n as usize]);
            if n >= 1 {
                assert_eq!(eval(&Stern1, n), t[n as usize]);
                assert_eq!(eval_pair(&Stern1, n).1, t[n as usize + 1]);
            }
        }
    }

    #[test]
    fn stream_matches_eval_from_any_start() {
        let t = table(5000);
        for start in [0u64, 1, 2, 3, 7, 8, 1000, 1023, 1024] {
            let s0: Vec<_> = PairStream::new(Stern0, start, 4100).collect();
            assert_eq!(s0.len() as u64, 4100 - start);
            for (n, v) in s0 {
                assert_eq!(v, t[n as usize], "base 0, n = {n}");
            }
            if start >= 1 {
                for (n, v) in PairStream::new(Stern1, start, 4100) {
                    assert_eq!(v, t[n as usize], "base 1, n = {n}");
                }
            }
        }
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(PairStream::new(Stern0, 5, 5).count(), 0);
        assert_eq!(PairStream::new(Stern0, 0, 1).collect::<Vec<_>>(), vec![(0, 0)]);
    }
}
