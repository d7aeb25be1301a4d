//! Certified enclosures: Stirling's bounds, the binomial estimate, and
//! the upper bound d_N <= log2(N)/3 + 1.

use std::error::Error;

use vdcorput::irregularity;
use vdcorput::numerics::Interval;
use vdcorput::{vdc, Rational};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let l3 = Interval::from_int(3, 256).log2().expect("positive");
    println!("log2(3) in {l3}");
    println!("pi in {}", Interval::pi(128));

    for n in [1u64, 10, 100] {
        println!("Stirling bounds at n = {n}: {}", irregularity::robbins_check(n));
    }
    let ok = irregularity::binom_bounds_check(100, 7, &Rational::frac(1, 20), &Rational::frac(1, 10))?;
    println!("binomial estimate at (100, 7, 1/20, 1/10): {ok}");
    match irregularity::binom_bounds_check(10, 9, &Rational::frac(1, 2), &Rational::frac(9, 10)) {
        Err(e) => println!("rejected: {e}"),
        Ok(v) => println!("unexpectedly evaluated: {v}"),
    }

    let n = vdc::envelope_point(20).n_star;
    let d = vdc::d_recurrence(n);
    println!("d_{n} = {d} within the upper bound: {}", vdc::within_upper_bound(n, &d));
    vdc::check_upper_bound(1 << 18).map_err(|w| w.to_string())?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
