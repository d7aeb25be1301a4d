//! Digit reversal invariance for the affine recurrences
//! x_2n = x_n, x_2n+1 = a x_n + b x_n+1 + c, and the transition matrices.

use std::error::Error;

use vdcorput::numerics::reverse;
use vdcorput::reversal::{self, AffineRecurrence};
use vdcorput::Rational;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = AffineRecurrence::discrepancy();
    println!(
        "19 reversed is {}; d_19 = {}, d_25 = {}",
        reverse(19)?,
        reversal::eval_recurrence(&d, 19),
        reversal::eval_recurrence(&d, 25)
    );
    println!("matrix product for n = 19: {}", reversal::eval_matrix(&d, 19)?);

    let odd = AffineRecurrence::new(
        Rational::frac(-3, 7),
        Rational::frac(5, 2),
        Rational::frac(1, 9),
        Rational::frac(4, 3),
    );
    for n in [11u64, 13, 52] {
        let r = reverse(n)?;
        println!("{odd}: x_{n} = x_{r} = {}", reversal::eval_recurrence(&odd, r));
        assert_eq!(reversal::eval_recurrence(&odd, n), reversal::eval_recurrence(&odd, r));
    }
    reversal::check_reversal(&odd, 1 << 12).map_err(|w| w.to_string())?;

    let records = reversal::verify_matrix_identities(&odd.alpha, &odd.beta, &odd.gamma);
    for r in &records {
        print!("{}/{:?}:{} ", r.word, r.side, if r.holds { "ok" } else { "FAIL" });
    }
    println!();
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
