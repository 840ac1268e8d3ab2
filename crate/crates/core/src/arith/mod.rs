//! Exact integer and rational arithmetic shared by every other module.

mod factor;
mod rational;
mod sieve;

pub use factor::{factorize, is_prime, DivisorStats, Factorization};
pub use rational::Rational;
pub(crate) use sieve::isqrt;
pub use sieve::{primes_up_to, sigma_sieve, sigma_sieve_with, SigmaTable, DEFAULT_SEGMENT_LEN, MAX_SIEVE_BOUND};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest `r` with `r^k ≤ n`, by binary search on exact powers.
pub fn integer_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1);
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (n.bits() / k as u64 + 1);
    // invariant: lo^k <= n < hi^k
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `Some(r)` when `n = r^k` exactly.
pub fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = integer_root(n, k);
    (r.pow(k) == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        for n in 0u32..3000 {
            for k in 1..6 {
                let r = integer_root(&BigUint::from(n), k);
                let r = u64::try_from(r).unwrap();
                assert!(r.pow(k) <= n as u64 && (r + 1).pow(k) > n as u64);
            }
        }
        assert_eq!(exact_root(&BigUint::from(1728u32), 3), Some(BigUint::from(12u32)));
        assert_eq!(exact_root(&BigUint::from(1728u32), 6), None);
        let big = BigUint::from(10u32).pow(90);
        assert_eq!(exact_root(&big, 45), Some(BigUint::from(100u32)));
    }
}
