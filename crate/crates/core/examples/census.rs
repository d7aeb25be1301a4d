//! Counting indices of small discrepancy, and the block-count sandwich
//! that bounds those counts.

use std::error::Error;

use vdcorput::irregularity::{self, LogMode, Method, Threshold};
use vdcorput::numerics::Interval;
use vdcorput::Rational;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for t in ["1", "3/2", "2", "3"] {
        let th = Threshold::Absolute(t.parse()?);
        let direct = irregularity::census(1 << 16, &th, Method::Direct);
        let pruned = irregularity::census(1 << 16, &th, Method::Pruned);
        assert_eq!(direct.count, pruned.count);
        println!(
            "n < 2^16 with d_n <= {t:<3}: {:>6}  exponent {}",
            pruned.count,
            pruned.exponent_text()
        );
    }

    let tiny = Threshold::Log {
        epsilon: Rational::frac(1, 100),
        mode: LogMode::Index,
    };
    let r = irregularity::census(1 << 20, &tiny, Method::Pruned);
    println!(
        "n < 2^20 with d_n <= ln(n)/100: {} (exponent {})",
        r.count,
        r.exponent_text()
    );

    for k in [8u32, 12] {
        let s = irregularity::sandwich(k, &Rational::from_int(2));
        println!("k = {k}: {} <= {} <= {}", s.lower, s.count, s.upper);
    }

    let ln2 = Interval::ln2(192);
    let upper = irregularity::exponent_constant(&ln2.mul_int(4).div_int(100)).expect("beta in (0, 1)");
    let lower = irregularity::exponent_constant(&ln2.div_int(100)).expect("beta in (0, 1)");
    println!("entropy exponents: {:.6} and {:.6}", upper.mid_f64(), lower.mid_f64());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
