//! Prime factorization of 64-bit integers.
//!
//! Trial division removes every prime factor below 2^20; whatever remains
//! is either prime (checked by a deterministic Miller-Rabin) or split with
//! Brent's variant of Pollard's rho.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime-power decomposition of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

/// σ₀, σ₁, σ₂ of `n`, optionally with the divisor list itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorStats {
    pub n: u64,
    #[serde(serialize_with = "crate::ser::decimal")]
    pub sigma0: BigUint,
    #[serde(serialize_with = "crate::ser::decimal")]
    pub sigma1: BigUint,
    #[serde(serialize_with = "crate::ser::decimal")]
    pub sigma2: BigUint,
    pub divisors: Option<Vec<u64>>,
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NotPositive(n.to_string()));
    }
    let mut factors = Vec::new();
    let mut m = n;

    for p in [2u64, 3] {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // 6k ± 1 wheel
    let mut p = 5u64;
    let mut step = 2u64;
    while p < TRIAL_LIMIT && p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += step;
        step = 6 - step;
    }

    if m > 1 {
        let mut large = Vec::new();
        split_large(m, &mut large);
        large.sort_unstable();
        for q in large {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(Factorization { n, factors })
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of divisors, `∏(e_i + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// `σ_x(n)` for `x ∈ {0, 1, 2}` from the per-prime-power closed form
    /// `σ_x(p^e) = 1 + p^x + … + p^{ex}`.
    pub fn sigma(&self, x: u32) -> Result<BigUint> {
        if x > 2 {
            return Err(Error::SigmaOrder(x));
        }
        let mut total = BigUint::one();
        for &(p, e) in &self.factors {
            let px = BigUint::from(p).pow(x);
            let mut term = BigUint::one();
            let mut local = BigUint::one();
            for _ in 0..e {
                term *= &px;
                local += &term;
            }
            total *= local;
        }
        Ok(total)
    }

    pub fn stats(&self, with_divisors: bool) -> DivisorStats {
        DivisorStats {
            n: self.n,
            sigma0: self.sigma(0).expect("order 0"),
            sigma1: self.sigma(1).expect("order 1"),
            sigma2: self.sigma(2).expect("order 2"),
            divisors: with_divisors.then(|| self.divisors()),
        }
    }

    pub fn is_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for every `u64` (first twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Returns a nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        let mut g = 1;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}
