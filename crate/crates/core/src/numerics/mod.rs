//! Exact numbers shared by every other module: dyadic rationals, rationals,
//! binary words, and certified enclosures of transcendental quantities.

pub mod binary;
pub mod dyadic;
pub mod interval;
pub mod rational;

pub use binary::{
    bit_len, block_count, dist_nearest_int, enumerate_by_blocks, enumerate_low_block, reverse, BinaryWord, LowBlockIter,
};
pub use dyadic::Dyadic;
pub use interval::{decide, Interval, DEFAULT_PREC};
pub use rational::Rational;

/// Formats a double with 17 significant digits, round-to-nearest: plain
/// notation for moderate magnitudes, scientific otherwise.
pub fn fmt_f64(x: f64) -> String {
    let sci = format!("{x:.16e}");
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { format!("{:.16}", 0.0) } else { sci };
    }
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent");
    if (-5..17).contains(&exp) {
        format!("{x:.prec$}", prec = (16 - exp) as usize)
    } else {
        sci
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_f64;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(2.3125), "2.3125000000000000");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000");
        assert_eq!(fmt_f64(-0.1), "-0.10000000000000001");
        assert_eq!(fmt_f64(23.75), "23.750000000000000");
        assert_eq!(fmt_f64(1.5e-58), "1.5000000000000000e-58");
        assert_eq!(fmt_f64(1e-5), "0.000010000000000000001");
    }
}
