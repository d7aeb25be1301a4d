//! d_N three ways: the distance-to-nearest-integer series, the recurrence,
//! and brute force over the sorted points.
//!
//! ```bash
//! cargo run --release --example discrepancy
//! ```

use std::error::Error;

use num_bigint::BigUint;
use vdcorput::vdc;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in [1u64, 3, 19, 25, 1000, 4095] {
        let explicit = vdc::d_explicit(n);
        let recurrence = vdc::d_recurrence(n);
        let (ext, star) = vdc::discrepancy_oracle(n)?;
        assert_eq!(explicit, recurrence);
        assert_eq!(explicit.to_rational(), ext);
        println!("d_{n:<5} = {explicit:<12} oracle {ext} (star {star})");
    }

    // the series also works far beyond u64
    let big: BigUint = "340282366920938463463374607431768211457".parse()?;
    println!("d at 2^128 + 1 = {}", vdc::d_explicit_big(&big));

    println!("first maxima of each block:");
    for k in [4u32, 10, 20] {
        let p = vdc::envelope_point(k);
        println!("  k = {k:>2}: N* = {:>8}, d = {}", p.n_star, p.value);
    }
    let probe = vdc::limsup_probe(40);
    println!("d_N* - log2(N*)/3 at k = 40: {probe}");
    println!("4/9 + log2(3)/3 =              {}", vdc::limsup_target());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
