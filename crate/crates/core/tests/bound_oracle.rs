use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use cutcat::eval_upper_bound;

/// `Pr[Bin(n, q) > t]` in exact arithmetic.
fn exact_tail(n: usize, t: usize, q: &BigRational) -> BigRational {
    let mut binom = BigInt::one();
    let mut head = BigRational::zero();
    for k in 0..=t.min(n) {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        head += BigRational::from_integer(binom.clone()) * q.pow(k as i32) * (BigRational::one() - q).pow((n - k) as i32);
    }
    BigRational::one() - head
}

fn exact(gamma: usize, t: usize, p: f64) -> f64 {
    let q = BigRational::from_float(p).unwrap() * BigRational::new(2.into(), 3.into());
    exact_tail(4 * gamma, t, &q).to_f64().unwrap()
}

#[test]
fn hand_values() {
    // four locations, t = 0: 1 - (1 - 2p/3)^4
    let gamma = 1;
    let p: f64 = 0.3;
    let want = 1.0 - (1.0 - 0.2f64).powi(4);
    assert!((eval_upper_bound(gamma, 0, p) - want).abs() < 1e-15);
    assert_eq!(eval_upper_bound(10, 2, 0.0), 0.0);
    assert_eq!(eval_upper_bound(2, 8, 0.5), 0.0);
}

proptest! {
    #[test]
    fn matches_exact_tail(gamma in 2usize..48, t in 0usize..5, e in -5.0f64..-0.5) {
        let p = 10f64.powf(e);
        let want = exact(gamma, t, p);
        let got = eval_upper_bound(gamma, t, p);
        prop_assert!(((got - want) / want).abs() < 1e-12, "{} vs {}", got, want);
    }

    #[test]
    fn monotone_in_p_and_t(gamma in 2usize..40, t in 0usize..4, a in 1e-4f64..0.2, b in 1e-4f64..0.2) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(eval_upper_bound(gamma, t, lo) <= eval_upper_bound(gamma, t, hi));
        prop_assert!(eval_upper_bound(gamma, t + 1, lo) <= eval_upper_bound(gamma, t, lo));
    }
}
