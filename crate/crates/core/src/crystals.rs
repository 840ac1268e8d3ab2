//! Crystals: odd `N = ab` with `a, b > 1` and
//!
//! ```text
//! B(a, b) = ((a + b)² + (ab + 1)²) / (2(a + 1)(b + 1))
//! ```
//!
//! an integer. The companions `F = (ab+1)²/((a+1)(b+1))`,
//! `P = (a+b)(ab+1)/((a+1)(b+1))` and `Q = (a+b)²/((a+1)(b+1))` are integral
//! exactly when `B` is, and `Q(a, b)` is the parameter `w` for which
//! `a = θ(a_n(w))`, `b = θ(a_{n−1}(w))`.
//!
//! The two-argument `B(a, b)` here is distinct from the divisor mean `B(n)`;
//! they agree only on semiprimes `n = pq`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{factorize, is_prime, Rational};
use crate::divisor_means::divisor_means;
use crate::par;
use crate::recurrences::{CheckReport, QuadraticInt, Theta};
use crate::{Error, Result};

/// A crystal `N = a·b` with `a ≥ b > 1` and `w = Q(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrystalRecord {
    #[serde(rename = "N", serialize_with = "crate::ser::decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "crate::ser::decimal")]
    pub a: BigUint,
    #[serde(serialize_with = "crate::ser::decimal")]
    pub b: BigUint,
    pub w: u64,
    /// The index with `a = θ(a_index(w))`, when produced by the generator.
    pub index: Option<usize>,
}

impl CrystalRecord {
    /// `(N, a, b)` without the generator bookkeeping.
    pub fn key(&self) -> (BigUint, BigUint, BigUint) {
        (self.n.clone(), self.a.clone(), self.b.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bfpq {
    #[serde(rename = "B")]
    pub b: Rational,
    #[serde(rename = "F")]
    pub f: Rational,
    #[serde(rename = "P")]
    pub p: Rational,
    #[serde(rename = "Q")]
    pub q: Rational,
}

pub fn bfpq(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Bfpq {
    let (a, b) = (a.into(), b.into());
    let den = (&a + 1u32) * (&b + 1u32);
    let sum = &a + &b;
    let prod1 = &a * &b + 1u32;
    let q = |num: BigInt, den: BigInt| Rational::new(num, den).expect("a, b ≥ 1");
    Bfpq {
        b: q(&sum * &sum + &prod1 * &prod1, 2 * &den),
        f: q(&prod1 * &prod1, den.clone()),
        p: q(&sum * &prod1, den.clone()),
        q: q(&sum * &sum, den),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub values: Bfpq,
    /// Integrality of `B, F, P, Q`.
    pub integral: [bool; 4],
    pub links_hold: bool,
}

impl Equivalence {
    /// All four integral or none, and the linking identities hold.
    pub fn holds(&self) -> bool {
        self.links_hold && (self.integral.iter().all(|&x| x) || self.integral.iter().all(|&x| !x))
    }
}

/// Checks `B + P = (a+1)(b+1)/2`, `P + Q = a + b`, `F + P = ab + 1` and that
/// the four integrality predicates agree.
pub fn equivalence_check(a: u64, b: u64) -> Equivalence {
    let v = bfpq(a, b);
    let (ab, bb) = (Rational::from(a), Rational::from(b));
    let one = Rational::one();
    let links_hold = &v.b + &v.p == (&ab + &one) * (&bb + &one) / Rational::from(2)
        && &v.p + &v.q == &ab + &bb
        && &v.f + &v.p == &ab * &bb + one;
    Equivalence {
        integral: [v.b.is_integer(), v.f.is_integer(), v.p.is_integer(), v.q.is_integer()],
        links_hold,
        values: v,
    }
}

/// Fast integrality test for `B(a, b)` in fixed width; `None` on overflow.
fn b_integral_u128(a: u64, b: u64) -> Option<bool> {
    let (a, b) = (a as u128, b as u128);
    let s = a.checked_add(b)?;
    let p = a.checked_mul(b)?.checked_add(1)?;
    let num = s.checked_mul(s)?.checked_add(p.checked_mul(p)?)?;
    let den = (a + 1).checked_mul(b + 1)?.checked_mul(2)?;
    Some(num % den == 0)
}

fn record(a: u64, b: u64) -> CrystalRecord {
    let w = bfpq(a, b).q.to_integer().and_then(|w| w.to_u64()).expect("Q integral on a crystal");
    CrystalRecord { n: BigUint::from(a) * b, a: a.into(), b: b.into(), w, index: None }
}

/// Every factor pair `N = a·b`, `a ≥ b > 1`, with `B(a, b)` integral.
pub fn crystal_decompositions(n: u64) -> Result<Vec<CrystalRecord>> {
    if n.is_multiple_of(2) {
        return Err(Error::OddHypothesis("crystal_decompositions", n));
    }
    let divisors = factorize(n)?.divisors();
    let mut out = Vec::new();
    for &b in &divisors {
        let a = n / b;
        if b <= 1 {
            continue;
        }
        if b > a {
            break;
        }
        let integral = b_integral_u128(a, b).unwrap_or_else(|| bfpq(a, b).b.is_integer());
        if integral {
            out.push(record(a, b));
        }
    }
    out.sort_by(|x, y| y.a.cmp(&x.a));
    Ok(out)
}

/// `(n, θ(a_n(w)), θ(a_{n−1}(w)))` for `n = 1, 2, …`.
struct ThetaPairs {
    prev: QuadraticInt,
    cur: QuadraticInt,
    n: usize,
}

impl ThetaPairs {
    fn new(w: u64) -> Self {
        ThetaPairs { prev: QuadraticInt::integer(w, 0), cur: QuadraticInt::integer(w, 1), n: 1 }
    }
}

impl Iterator for ThetaPairs {
    type Item = (usize, BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let item = (self.n, self.cur.theta().coeff().clone(), self.prev.theta().coeff().clone());
        let next = self.cur.mul_sqrt_w().checked_sub(&self.prev).expect("a_n parities alternate");
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        Some(item)
    }
}

fn admissible(x: &BigInt) -> Option<BigUint> {
    (x > &BigInt::one()).then(|| x.magnitude().clone())
}

/// Crystals `θ(a_n)·θ(a_{n−1})` for `3 ≤ n ≤ n_limit`, deduplicated by `N`
/// keeping the smallest index.
pub fn generate_crystals(w: u64, n_limit: usize) -> Vec<CrystalRecord> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (n, ta, tb) in ThetaPairs::new(w).skip(2).take_while(|(n, ..)| *n <= n_limit) {
        let (Some(x), Some(y)) = (admissible(&ta), admissible(&tb)) else {
            continue;
        };
        let (a, b) = if x >= y { (x, y) } else { (y, x) };
        let n_val = &a * &b;
        if seen.insert(n_val.clone()) {
            out.push(CrystalRecord { n: n_val, a, b, w, index: Some(n) });
        }
    }
    out
}

/// Smallest crystal the generator can produce for `w`: the `n = 3` product
/// `θ(a_3)·θ(a_2) = (2(w−1)² − 1)(2w − 1)`, when both factors exceed 1.
pub fn smallest_crystal_for(w: u64) -> Option<BigUint> {
    let (_, ta, tb) = ThetaPairs::new(w).nth(2)?;
    Some(admissible(&ta)? * admissible(&tb)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalCatalog {
    pub limit: u64,
    pub records: Vec<CrystalRecord>,
    /// Largest `w` whose orbit was scanned.
    pub w_max: u64,
    /// Whether the per-`w` smallest crystal grew strictly with `w` across
    /// the scanned range; the early stop relies on it.
    pub monotone: bool,
}

/// Crystals of a single `w` with `N ≤ limit`, ascending by index and
/// deduplicated by `N` (smallest index kept).
pub fn crystals_up_to(w: u64, limit: u64) -> Vec<CrystalRecord> {
    let limit = BigUint::from(limit);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    // w ≤ 3 orbits are periodic (period ≤ 6); for w ≥ 4 both θ-values grow with n
    let periodic = w <= 3;
    for (n, ta, tb) in ThetaPairs::new(w).skip(2) {
        if periodic && n > 12 {
            break;
        }
        let (Some(x), Some(y)) = (admissible(&ta), admissible(&tb)) else {
            continue;
        };
        let (a, b) = if x >= y { (x, y) } else { (y, x) };
        let n_val = &a * &b;
        if n_val > limit {
            if periodic {
                continue;
            }
            break;
        }
        if seen.insert(n_val.clone()) {
            out.push(CrystalRecord { n: n_val, a, b, w, index: Some(n) });
        }
    }
    out
}

/// All crystals `N ≤ limit` produced by the generator, ascending by `N`.
pub fn generate_all_crystals(limit: u64) -> CrystalCatalog {
    let limit_big = BigUint::from(limit);
    let mut found: BTreeMap<(BigUint, BigUint, BigUint), CrystalRecord> = BTreeMap::new();
    let mut monotone = true;
    let mut last_min: Option<BigUint> = None;
    let mut w = 1u64;
    loop {
        if let Some(m) = smallest_crystal_for(w) {
            if last_min.as_ref().is_some_and(|prev| m <= *prev) {
                monotone = false;
            }
            if m > limit_big {
                break;
            }
            last_min = Some(m);
        }
        for rec in crystals_up_to(w, limit) {
            found.entry(rec.key()).or_insert(rec);
        }
        w += 1;
    }
    CrystalCatalog { limit, records: found.into_values().collect(), w_max: w - 1, monotone }
}

/// Brute-force decomposition of every odd `N ≤ limit`, for cross-checking
/// the generator.
pub fn crystal_scan(limit: u64) -> Result<Vec<CrystalRecord>> {
    let per_n = decompose_range(limit)?;
    Ok(per_n.into_iter().flat_map(|(_, recs)| recs).collect())
}

fn decompose_range(limit: u64) -> Result<Vec<(u64, Vec<CrystalRecord>)>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let chunks = par::chunks(1, limit, 8192);
    let parts = par::map_collect(chunks, |(lo, hi)| -> Result<Vec<(u64, Vec<CrystalRecord>)>> {
        let mut out = Vec::new();
        let start = if lo % 2 == 0 { lo + 1 } else { lo };
        for n in (start..=hi).step_by(2) {
            let recs = crystal_decompositions(n)?;
            if !recs.is_empty() {
                out.push((n, recs));
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureFinding {
    #[serde(rename = "N")]
    pub n: u64,
    pub decompositions: Vec<CrystalRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub limit: u64,
    /// Odd `N ≤ limit` examined.
    pub scanned: u64,
    /// `N` with at least one crystal decomposition.
    pub crystals: u64,
    /// `N` with two or more distinct decompositions.
    pub findings: Vec<ConjectureFinding>,
}

/// Looks for odd `N ≤ limit` with more than one crystal decomposition.
pub fn conjecture_scan(limit: u64) -> Result<ConjectureReport> {
    let per_n = decompose_range(limit)?;
    let crystals = per_n.len() as u64;
    let findings = per_n
        .into_iter()
        .filter(|(_, recs)| recs.len() >= 2)
        .map(|(n, decompositions)| ConjectureFinding { n, decompositions })
        .collect();
    Ok(ConjectureReport { limit, scanned: limit.div_ceil(2), crystals, findings })
}

/// For crystals with prime components, the divisor mean `B(N)` is an
/// integer equal to `B(a, b)`.
pub fn semiprime_biharmonic_check(records: &[CrystalRecord]) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    for r in records {
        let (Some(a), Some(b), Some(n)) = (r.a.to_u64(), r.b.to_u64(), r.n.to_u64()) else {
            continue;
        };
        if !(is_prime(a) && is_prime(b)) {
            continue;
        }
        let dm = divisor_means(n)?;
        let two_arg = bfpq(a, b).b;
        report.checked += 1;
        if !(dm.is_biharmonic && dm.biharmonic == two_arg) && report.first_failure.is_none() {
            report.first_failure = Some(format!("N = {n}: B(N) = {}, B(a, b) = {two_arg}", dm.biharmonic));
        }
    }
    Ok(report)
}
