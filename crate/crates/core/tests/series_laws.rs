use num_bigint::BigInt;
use proptest::prelude::*;

use qpbasis_core::series::{geometric_inverse_factor, inv_q_pochhammer, ts_add, ts_mul};
use qpbasis_core::TruncatedSeries;

const RANK: usize = 2;
const M: u32 = 6;

fn series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec((0..=M, proptest::collection::vec(0u32..4, RANK), -20i64..=20), 0..8).prop_map(|terms| {
        TruncatedSeries::from_terms(RANK, M, terms.into_iter().map(|(q, y, c)| (q, y, BigInt::from(c)))).unwrap()
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in series(), b in series(), c in series()) {
        let left = ts_mul(&ts_mul(&a, &b).unwrap(), &c).unwrap();
        let right = ts_mul(&a, &ts_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_commutative(a in series(), b in series()) {
        prop_assert_eq!(ts_mul(&a, &b).unwrap(), ts_mul(&b, &a).unwrap());
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let left = ts_mul(&a, &ts_add(&b, &c).unwrap()).unwrap();
        let right = ts_add(&ts_mul(&a, &b).unwrap(), &ts_mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn addition_is_commutative_and_cancels(a in series(), b in series()) {
        prop_assert_eq!(ts_add(&a, &b).unwrap(), ts_add(&b, &a).unwrap());
        prop_assert!(ts_add(&a, &a.neg()).unwrap().is_empty());
    }
}

/// Partition numbers by the classical coin-change recurrence.
fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(0); n + 1];
    p[0] = BigInt::from(1);
    for part in 1..=n {
        for total in part..=n {
            let add = p[total - part].clone();
            p[total] += add;
        }
    }
    p
}

#[test]
fn partition_numbers_to_sixty() {
    let want = partition_numbers(60);
    assert_eq!(want[60], BigInt::from(966_467u64));
    let euler = geometric_inverse_factor(&[], 1, 60).unwrap().q_coefficients();
    assert_eq!(euler, want);
    assert_eq!(inv_q_pochhammer(60, 60).q_coefficients(), want);
}
