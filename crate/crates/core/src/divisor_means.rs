//! Means of the divisor set of `n`, from σ₀, σ₁, σ₂:
//!
//! ```text
//! A(n) = σ₁/σ₀    G(n)² = n    H(n) = nσ₀/σ₁    C(n) = σ₂/σ₁
//! B(n) = (H(n) + C(n))/2 = (nσ₀ + σ₂) / (2σ₁)
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, isqrt, sigma_sieve_with, Rational, DEFAULT_SEGMENT_LEN};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorMeansRecord {
    pub n: u64,
    #[serde(rename = "A")]
    pub arithmetic: Rational,
    #[serde(rename = "H")]
    pub harmonic: Rational,
    #[serde(rename = "C")]
    pub contraharmonic: Rational,
    #[serde(rename = "B")]
    pub biharmonic: Rational,
    /// `G(n)² = n`; `G(n)` itself is rational only for squares.
    #[serde(rename = "G_squared")]
    pub geometric_squared: u64,
    pub is_arithmetic: bool,
    pub is_harmonic: bool,
    pub is_contraharmonic_integer: bool,
    pub is_biharmonic: bool,
    /// `H(n)` when it is an integer.
    #[serde(rename = "H_value")]
    pub harmonic_value: Option<u64>,
}

impl DivisorMeansRecord {
    /// Builds the record from the divisor sums of `n`.
    pub fn from_sigmas(n: u64, sigma0: &BigUint, sigma1: &BigUint, sigma2: &BigUint) -> Self {
        let n_big = BigInt::from(n);
        let (s0, s1, s2) = (BigInt::from(sigma0.clone()), BigInt::from(sigma1.clone()), BigInt::from(sigma2.clone()));
        let q = |a: BigInt, b: BigInt| Rational::new(a, b).expect("σ₀, σ₁ > 0");

        let arithmetic = q(s1.clone(), s0.clone());
        let harmonic = q(&n_big * &s0, s1.clone());
        let contraharmonic = q(s2.clone(), s1.clone());
        let biharmonic = q(&n_big * &s0 + &s2, 2 * &s1);
        let harmonic_value = harmonic.to_integer().and_then(|h| h.to_u64());
        DivisorMeansRecord {
            n,
            is_arithmetic: arithmetic.is_integer(),
            is_harmonic: harmonic.is_integer(),
            is_contraharmonic_integer: contraharmonic.is_integer(),
            is_biharmonic: biharmonic.is_integer(),
            arithmetic,
            harmonic,
            contraharmonic,
            biharmonic,
            geometric_squared: n,
            harmonic_value,
        }
    }

    pub fn is_square(&self) -> bool {
        let r = isqrt(self.n);
        r * r == self.n
    }
}

pub fn divisor_means(n: u64) -> Result<DivisorMeansRecord> {
    let s = factorize(n)?.stats(false);
    Ok(DivisorMeansRecord::from_sigmas(n, &s.sigma0, &s.sigma1, &s.sigma2))
}

/// The four integer sequences defined by integral divisor means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    Arithmetic,
    Harmonic,
    Contraharmonic,
    Biharmonic,
}

impl MeanKind {
    pub const ALL: [MeanKind; 4] =
        [MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Contraharmonic, MeanKind::Biharmonic];

    pub fn holds_for(self, rec: &DivisorMeansRecord) -> bool {
        match self {
            MeanKind::Arithmetic => rec.is_arithmetic,
            MeanKind::Harmonic => rec.is_harmonic,
            MeanKind::Contraharmonic => rec.is_contraharmonic_integer,
            MeanKind::Biharmonic => rec.is_biharmonic,
        }
    }

    /// Integrality of the mean as a divisibility test on the reduced
    /// fraction's numerator and denominator before reduction.
    pub fn holds_for_sigmas(self, n: u64, s0: u64, s1: u128, s2: u128) -> bool {
        let (n, s0) = (n as u128, s0 as u128);
        match self {
            MeanKind::Arithmetic => s1.is_multiple_of(s0),
            MeanKind::Harmonic => (n * s0) % s1 == 0,
            MeanKind::Contraharmonic => s2.is_multiple_of(s1),
            MeanKind::Biharmonic => (n * s0 + s2).is_multiple_of(2 * s1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeanKind::Arithmetic => "arithmetic",
            MeanKind::Harmonic => "harmonic",
            MeanKind::Contraharmonic => "contraharmonic",
            MeanKind::Biharmonic => "biharmonic",
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeanKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MeanKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            format!("unknown sequence kind {s:?} (expected arithmetic, harmonic, contraharmonic or biharmonic)")
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub kind: MeanKind,
    pub limit: u64,
    pub terms: Vec<u64>,
    /// `H(n)` for each term, only for [`MeanKind::Harmonic`].
    pub harmonic_values: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// `n` up to this bound are classified by per-n factorization, larger `n`
    /// by the segmented sieve.
    pub sieve_threshold: u64,
    pub segment_len: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { sieve_threshold: 1_000, segment_len: DEFAULT_SEGMENT_LEN }
    }
}

pub fn enumerate(kind: MeanKind, limit: u64) -> Result<Enumeration> {
    enumerate_with(kind, limit, EnumerateOptions::default())
}

pub fn enumerate_with(kind: MeanKind, limit: u64, opts: EnumerateOptions) -> Result<Enumeration> {
    if limit == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let mut terms = Vec::new();
    let mut hvals = Vec::new();

    for n in 1..=limit.min(opts.sieve_threshold) {
        let rec = divisor_means(n)?;
        if kind.holds_for(&rec) {
            terms.push(n);
            if let Some(h) = rec.harmonic_value {
                hvals.push(h);
            }
        }
    }
    if limit > opts.sieve_threshold {
        let table = sigma_sieve_with(opts.sieve_threshold + 1, limit, opts.segment_len)?;
        for (n, s0, s1, s2) in table.iter() {
            if kind.holds_for_sigmas(n, s0, s1, s2) {
                terms.push(n);
                if kind == MeanKind::Harmonic {
                    hvals.push((n as u128 * s0 as u128 / s1) as u64);
                }
            }
        }
    }
    Ok(Enumeration { kind, limit, terms, harmonic_values: (kind == MeanKind::Harmonic).then_some(hvals) })
}

/// `(n+1)σ₁(n) = nσ₀(n) + σ₂(n)`, i.e. `B(n) = (n+1)/2`.
fn meets_prime_mean(n: u64, s0: &BigUint, s1: &BigUint, s2: &BigUint) -> bool {
    BigUint::from(n + 1) * s1 == BigUint::from(n) * s0 + s2
}

/// Whether `B(n) = (n+1)/2`; for odd `n > 1` this holds exactly for primes.
pub fn prime_characterization(n: u64) -> Result<bool> {
    if n <= 1 || n.is_multiple_of(2) {
        return Err(Error::OddHypothesis("prime_characterization", n));
    }
    let s = factorize(n)?.stats(false);
    Ok(meets_prime_mean(n, &s.sigma0, &s.sigma1, &s.sigma2))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CharacterizationScan {
    pub limit: u64,
    pub odd_checked: u64,
    pub primes_found: u64,
    /// Odd `n` where `B(n) = (n+1)/2` and primality disagree.
    pub exceptions: Vec<u64>,
    /// Even `n` with `(n+1)σ₁ = nσ₀ + σ₂`; `B(n)` is then not an integer.
    pub even_solutions: Vec<u64>,
}

/// Checks the odd-prime characterization over `(1, limit]` with the sieve,
/// using Miller-Rabin as the independent primality test.
pub fn characterization_scan(limit: u64) -> Result<CharacterizationScan> {
    let mut scan = CharacterizationScan { limit, ..Default::default() };
    if limit < 2 {
        return Ok(scan);
    }
    let table = sigma_sieve_with(2, limit, DEFAULT_SEGMENT_LEN)?;
    for (n, s0, s1, s2) in table.iter() {
        let hit = (n as u128 + 1) * s1 == n as u128 * s0 as u128 + s2;
        if n % 2 == 0 {
            if hit {
                scan.even_solutions.push(n);
            }
            continue;
        }
        scan.odd_checked += 1;
        let prime = is_prime(n);
        scan.primes_found += prime as u64;
        if hit != prime {
            scan.exceptions.push(n);
        }
    }
    Ok(scan)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumIdentity {
    pub n: u64,
    /// `(n+1)σ₁ − (σ₂ + nσ₀)` from the divisor sums.
    #[serde(serialize_with = "crate::ser::decimal")]
    pub lhs: BigInt,
    /// `Σ (d + n/d)(d − 1)(n/d − 1)` over pairs `d < n/d`, plus `k(k−1)²`
    /// when `n = k²`.
    #[serde(serialize_with = "crate::ser::decimal")]
    pub rhs: BigInt,
    pub equal: bool,
}

pub fn sum_identity_check(n: u64) -> Result<SumIdentity> {
    if n < 2 {
        return Err(Error::InvalidRange { lo: 2, hi: n });
    }
    let f = factorize(n)?;
    let s = f.stats(true);
    let nb = BigInt::from(n);
    let lhs = BigInt::from(n + 1) * BigInt::from(s.sigma1) - (BigInt::from(s.sigma2) + &nb * BigInt::from(s.sigma0));

    let mut rhs = BigInt::zero();
    for &d in s.divisors.as_deref().unwrap_or_default() {
        let e = n / d;
        if d >= e {
            if d == e {
                let k = BigInt::from(d);
                rhs += &k * (&k - 1u32) * (&k - 1u32);
            }
            break;
        }
        let (d, e) = (BigInt::from(d), BigInt::from(e));
        rhs += (&d + &e) * (&d - 1u32) * (&e - 1u32);
    }
    let equal = lhs == rhs;
    Ok(SumIdentity { n, lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn six_is_harmonic() {
        let r = divisor_means(6).unwrap();
        assert_eq!(r.harmonic, Rational::from(2));
        assert!(r.is_harmonic);
        assert_eq!(r.harmonic_value, Some(2));
    }

    #[test]
    fn one_has_all_flags() {
        let r = divisor_means(1).unwrap();
        for m in [&r.arithmetic, &r.harmonic, &r.contraharmonic, &r.biharmonic] {
            assert_eq!(m, &Rational::one());
        }
        assert!(r.is_arithmetic && r.is_harmonic && r.is_contraharmonic_integer && r.is_biharmonic);
        assert!(divisor_means(0).is_err());
    }

    #[test]
    fn twelve_against_divisor_list() {
        let r = divisor_means(12).unwrap();
        let d: Vec<Rational> = [1, 2, 3, 4, 6, 12].iter().map(|&x| Rational::from(x as u64)).collect();
        assert_eq!(r.arithmetic, means::arithmetic_mean(&d).unwrap());
        assert_eq!(r.harmonic, means::harmonic_mean(&d).unwrap());
        assert_eq!(r.contraharmonic, means::contraharmonic_mean(&d).unwrap());
        assert_eq!(r.biharmonic, means::biharmonic_mean(&d).unwrap());
        assert_eq!(r.arithmetic, q(14, 3));
        assert_eq!(r.harmonic, q(18, 7));
        assert_eq!(r.contraharmonic, q(15, 2));
        assert_eq!(r.biharmonic, q(141, 28));
        assert!(!(r.is_arithmetic || r.is_harmonic || r.is_contraharmonic_integer || r.is_biharmonic));
    }

    #[test]
    fn printed_prefixes() {
        let a = enumerate(MeanKind::Arithmetic, 37).unwrap();
        assert_eq!(a.terms, [1, 3, 5, 6, 7, 11, 13, 14, 15, 17, 19, 20, 21, 22, 23, 27, 29, 30, 31, 33, 35, 37]);
        let h = enumerate(MeanKind::Harmonic, 496).unwrap();
        assert_eq!(h.terms, [1, 6, 28, 140, 270, 496]);
        assert_eq!(h.harmonic_values.unwrap(), [1, 2, 3, 5, 6, 5]);
        let b = enumerate(MeanKind::Biharmonic, 37).unwrap();
        assert_eq!(b.terms, [1, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 35, 37]);
        assert_eq!(b.harmonic_values, None);
        assert!(enumerate(MeanKind::Harmonic, 0).is_err());
        assert_eq!(enumerate(MeanKind::Harmonic, 1).unwrap().terms, [1]);
    }

    #[test]
    fn sieve_and_factorization_paths_agree() {
        for kind in MeanKind::ALL {
            let slow = enumerate_with(kind, 20_000, EnumerateOptions { sieve_threshold: 20_000, ..Default::default() })
                .unwrap();
            let fast = enumerate_with(kind, 20_000, EnumerateOptions { sieve_threshold: 0, segment_len: 999 }).unwrap();
            assert_eq!(slow, fast, "{kind}");
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("harmonic".parse::<MeanKind>(), Ok(MeanKind::Harmonic));
        assert!("geometric".parse::<MeanKind>().is_err());
    }

    #[test]
    fn characterization_examples() {
        assert_eq!(prime_characterization(7), Ok(true));
        assert_eq!(divisor_means(7).unwrap().biharmonic, Rational::from(4));
        assert_eq!(prime_characterization(35), Ok(false));
        assert_eq!(divisor_means(35).unwrap().biharmonic, Rational::from(15));
        assert_eq!(prime_characterization(9), Ok(false));
        assert_eq!(divisor_means(9).unwrap().biharmonic, q(59, 13));
        assert!(prime_characterization(1).is_err());
        assert!(prime_characterization(2).is_err());
        assert!(prime_characterization(10).is_err());
    }

    #[test]
    fn characterization_small_scan() {
        let scan = characterization_scan(10_000).unwrap();
        assert!(scan.exceptions.is_empty());
        assert_eq!(scan.primes_found, 1228);
        assert_eq!(scan.even_solutions, [2]);
    }

    #[test]
    fn sum_identity_examples() {
        let s = sum_identity_check(12).unwrap();
        assert_eq!((s.lhs.clone(), s.rhs.clone(), s.equal), (BigInt::from(82), BigInt::from(82), true));
        let s = sum_identity_check(9).unwrap();
        assert_eq!((s.lhs.clone(), s.rhs.clone(), s.equal), (BigInt::from(12), BigInt::from(12), true));
        for p in [2u64, 3, 13, 7919] {
            let s = sum_identity_check(p).unwrap();
            assert!(s.equal && s.lhs.is_zero());
        }
        assert!(sum_identity_check(1).is_err());
    }

    #[test]
    fn sum_identity_small_range() {
        for n in 2..=2000 {
            let s = sum_identity_check(n).unwrap();
            assert!(s.equal, "n = {n}");
            if !is_prime(n) {
                assert!(s.rhs > BigInt::zero(), "n = {n}");
            }
        }
    }
}
