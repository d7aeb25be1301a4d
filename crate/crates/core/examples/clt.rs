//! How close the normalized discrepancy is to a standard normal law.

use std::error::Error;

use vdcorput::irregularity;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for bits in [10u32, 14, 18] {
        let r = irregularity::clt_histogram(1 << bits, 16);
        println!("limit 2^{bits}: KS distance {:.4}", r.ks_distance);
    }
    let r = irregularity::clt_histogram(1 << 16, 12);
    println!("{:>8} {:>8} {:>9} {:>9}", "left", "right", "empirical", "normal");
    for row in &r.rows {
        println!(
            "{:>8.3} {:>8.3} {:>9.4} {:>9.4}",
            row.bin_left, row.bin_right, row.empirical_cdf, row.normal_cdf
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
