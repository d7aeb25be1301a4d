//! The first 32 values of d_N, printed as the CLI's `table 0 32` does.

use std::error::Error;

use vdcorput::numerics::fmt_f64;
use vdcorput::vdc;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("n,d_exact,d_float");
    for (n, d) in vdc::d_batch(32) {
        println!("{n},{d},{}", fmt_f64(d.to_f64()));
    }
    // each block [2^(k-1), 2^k] reads the same backwards
    for k in 1..=5 {
        vdc::check_symmetry(k).map_err(|w| w.to_string())?;
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
