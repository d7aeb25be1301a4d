//! Randomized properties of the exact layer and the recurrences.

use num_bigint::BigInt;
use proptest::prelude::*;

use vdcorput::fluctuation;
use vdcorput::irregularity::{self, Method, Threshold};
use vdcorput::numerics::{block_count, reverse, BinaryWord};
use vdcorput::reversal::{self, AffineRecurrence};
use vdcorput::{vdc, Dyadic, Rational};

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (any::<i128>(), 0u32..140).prop_map(|(n, e)| Dyadic::new(BigInt::from(n), e))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(p, q)| Rational::frac(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn dyadic_ring_laws(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(Dyadic::new(a.num().clone(), a.exp()), a.clone());
        prop_assert_eq!((&a + &b).to_rational(), a.to_rational() + b.to_rational());
        prop_assert_eq!((&a * &b).to_rational(), a.to_rational() * b.to_rational());
        prop_assert_eq!((&a - &c).to_rational(), a.to_rational() - c.to_rational());
    }
}

proptest! {
    #[test]
    fn reversal_of_binary_digits(n in 1u64..u64::MAX / 2) {
        let r = reverse(n).unwrap();
        prop_assert_eq!(r % 2, 1);
        prop_assert_eq!(reverse(2 * n).unwrap(), r);
        if n % 2 == 1 {
            prop_assert_eq!(reverse(r).unwrap(), n);
        }
        prop_assert_eq!(BinaryWord::from_u64(n).reversed().to_u64().map(|m| m >> m.trailing_zeros()), Some(r));
    }

    #[test]
    fn explicit_matches_recurrence(n in any::<u64>()) {
        prop_assert_eq!(vdc::d_explicit(n), vdc::d_recurrence(n));
        if n < u64::MAX / 2 {
            prop_assert_eq!(vdc::d_recurrence(2 * n), vdc::d_recurrence(n));
        }
    }

    #[test]
    fn discrepancy_is_reversal_invariant(n in 1u64..u64::MAX) {
        prop_assert_eq!(vdc::d_explicit(n), vdc::d_explicit(reverse(n).unwrap()));
    }

    #[test]
    fn block_sandwich(n in 1u64..u64::MAX) {
        let d = vdc::d_recurrence(n).to_rational();
        let b = Rational::from(block_count(n) as u64);
        prop_assert!(&b * &Rational::frac(1, 2) <= d);
        prop_assert!(d <= &b * &Rational::from_int(2));
        prop_assert!(d >= Rational::one());
    }

    #[test]
    fn upper_bound_holds(n in 1u64..1u64 << 60) {
        prop_assert!(vdc::within_upper_bound(n, &vdc::d_recurrence(n)));
    }

    #[test]
    fn s_prime_doubling(n in 0u64..1u64 << 40) {
        let lhs = fluctuation::s_prime(2 * n);
        let rhs = &fluctuation::s_prime(n).shl(1) + &Dyadic::new(BigInt::from(n), 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn affine_reversal(a in rational(), b in rational(), c in rational(), x1 in rational(), n in 1u64..1 << 40) {
        let rec = AffineRecurrence::new(a, b, c, x1);
        prop_assert_eq!(reversal::eval_recurrence(&rec, n), reversal::eval_recurrence(&rec, reverse(n).unwrap()));
    }

    #[test]
    fn matrix_formula_with_unit_seed(a in rational(), b in rational(), c in rational(), k in 1u64..1 << 30) {
        let rec = AffineRecurrence::new(a, b, c, Rational::one());
        let n = 2 * k + 1;
        prop_assert_eq!(reversal::eval_matrix(&rec, n).unwrap(), reversal::eval_recurrence(&rec, n));
    }

    #[test]
    fn census_methods_agree(limit in 2u64..5000, p in 0i64..12, q in 1i64..4) {
        let t = Threshold::Absolute(Rational::frac(p, q));
        let direct = irregularity::census(limit, &t, Method::Direct);
        let pruned = irregularity::census(limit, &t, Method::Pruned);
        prop_assert_eq!(direct.count, pruned.count);
        prop_assert!(direct.count <= limit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_identities(a in rational(), b in rational(), c in rational()) {
        let records = reversal::verify_matrix_identities(&a, &b, &c);
        prop_assert_eq!(records.len(), 16);
        prop_assert!(records.iter().all(|r| r.holds));
    }
}
