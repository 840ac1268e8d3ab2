//! Segmented sieve for σ₀, σ₁, σ₂ over an interval.
//!
//! Each segment keeps a residual cofactor per entry and multiplies in the
//! local factor `1 + p^x + … + p^{ex}` for every sieving prime `p ≤ √hi`.
//! A residual above 1 after all sieving primes is a single large prime.
//! σ₂(n) < ζ(2)·n² so `u128` holds every value for `hi ≤ 2^62`.

use crate::par;
use crate::{Error, Result};

pub const DEFAULT_SEGMENT_LEN: usize = 1 << 16;
pub const MAX_SIEVE_BOUND: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTable {
    lo: u64,
    pub sigma0: Vec<u64>,
    pub sigma1: Vec<u128>,
    pub sigma2: Vec<u128>,
}

impl SigmaTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.sigma0.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.sigma0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma0.is_empty()
    }

    /// `(σ₀, σ₁, σ₂)` at `n`, or `None` outside the table.
    pub fn get(&self, n: u64) -> Option<(u64, u128, u128)> {
        let i = usize::try_from(n.checked_sub(self.lo)?).ok()?;
        Some((*self.sigma0.get(i)?, self.sigma1[i], self.sigma2[i]))
    }

    /// `(n, σ₀, σ₁, σ₂)` in ascending `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, u128, u128)> + '_ {
        (0..self.len()).map(move |i| (self.lo + i as u64, self.sigma0[i], self.sigma1[i], self.sigma2[i]))
    }
}

pub fn sigma_sieve(lo: u64, hi: u64) -> Result<SigmaTable> {
    sigma_sieve_with(lo, hi, DEFAULT_SEGMENT_LEN)
}

/// As [`sigma_sieve`] with an explicit segment length. Output does not
/// depend on the segment length or on how segments are scheduled.
pub fn sigma_sieve_with(lo: u64, hi: u64, segment_len: usize) -> Result<SigmaTable> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if hi > MAX_SIEVE_BOUND {
        return Err(Error::SieveLimit(hi));
    }
    let primes = primes_up_to(isqrt(hi));
    let segments = par::chunks(lo, hi, segment_len.max(1) as u64);
    let parts = par::map_collect(segments, |(s, e)| sieve_segment(s, e, &primes));

    let total = (hi - lo + 1) as usize;
    let mut table = SigmaTable {
        lo,
        sigma0: Vec::with_capacity(total),
        sigma1: Vec::with_capacity(total),
        sigma2: Vec::with_capacity(total),
    };
    for (s0, s1, s2) in parts {
        table.sigma0.extend(s0);
        table.sigma1.extend(s1);
        table.sigma2.extend(s2);
    }
    Ok(table)
}

type Segment = (Vec<u64>, Vec<u128>, Vec<u128>);

fn sieve_segment(start: u64, end: u64, primes: &[u64]) -> Segment {
    let len = (end - start + 1) as usize;
    let mut rest: Vec<u64> = (start..=end).collect();
    let mut s0 = vec![1u64; len];
    let mut s1 = vec![1u128; len];
    let mut s2 = vec![1u128; len];

    for &p in primes {
        if p * p > end {
            break;
        }
        let first = start.div_ceil(p) * p;
        let p = p as u128;
        let mut m = first;
        while m <= end {
            let i = (m - start) as usize;
            let (mut e, mut pk, mut sum1, mut sum2) = (0u64, 1u128, 1u128, 1u128);
            while rest[i].is_multiple_of(p as u64) {
                rest[i] /= p as u64;
                e += 1;
                pk *= p;
                sum1 += pk;
                sum2 += pk * pk;
            }
            s0[i] *= e + 1;
            s1[i] *= sum1;
            s2[i] *= sum2;
            m += p as u64;
        }
    }
    for i in 0..len {
        let r = rest[i] as u128;
        if r > 1 {
            s0[i] *= 2;
            s1[i] *= 1 + r;
            s2[i] *= 1 + r * r;
        }
    }
    (s0, s1, s2)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Plain Eratosthenes over `[2, limit]`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
