//! Stern's diatomic sequence as the (1, 1, 0) member of the family.

use std::error::Error;

use vdcorput::fluctuation;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let first: Vec<u64> = (1..=16).map(fluctuation::stern).collect();
    println!("s_1..s_16 = {first:?}");
    for k in [4u32, 8, 12] {
        println!(
            "max over [2^{k}, 2^{}) = {} = F_{}",
            k + 1,
            fluctuation::stern_max(k),
            k + 2
        );
    }
    fluctuation::check_stern_doubling(1 << 16).map_err(|w| w.to_string())?;
    fluctuation::check_stern_reversal(1 << 14).map_err(|w| w.to_string())?;
    for s in fluctuation::stern_psi_sample(3) {
        println!("psi_stern at N = {} (frac {:.4}): {}", s.n, s.frac, s.value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
