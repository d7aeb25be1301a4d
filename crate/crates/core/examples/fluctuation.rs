//! The summatory function, its exact doubling law, and samples of the
//! periodic fluctuation psi.

use std::error::Error;

use vdcorput::fluctuation::{self, CauchyEnvelope};
use vdcorput::Rational;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in [4u64, 8, 1000] {
        println!(
            "S({n}) = {}, S'({n}) = {}",
            fluctuation::summatory(n),
            fluctuation::s_prime(n)
        );
    }
    fluctuation::check_s_doubling(1 << 16).map_err(|w| w.to_string())?;
    fluctuation::check_theorem3(1 << 16).map_err(|w| w.to_string())?;

    let env = CauchyEnvelope::calibrate(5, 16);
    println!("calibrated envelope constant C = {:.6}", env.constant);
    for x in ["0", "1/3", "1/2", "0.9"] {
        let x = Rational::parse_decimal(x).or_else(|_| x.parse())?;
        let s = fluctuation::psi_eval(&x, 16, &env)?;
        println!("psi({x}) ~ {:.8} +- {:.2e} (N = {})", s.psi_value, s.error_radius, s.n);
    }

    let samples = fluctuation::psi_sample_level(6);
    let (lo, hi) = samples.iter().fold((f64::MAX, f64::MIN), |(a, b), s| {
        (a.min(s.psi_value), b.max(s.psi_value))
    });
    println!(
        "psi_6 ranges over [{lo:.5}, {hi:.5}] on its {} grid points",
        samples.len()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
