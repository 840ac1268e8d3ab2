//! Symbolic check that `G(n) = 𝒢(H(n), A(n))` holds for the divisor set of
//! `n = p₁^e₁ ⋯ p_k^e_k` with the primes replaced by indeterminates.
//!
//! The identity is checked in power form so no radicals appear:
//! `ℋ·𝒜 = n` as rational functions and `(∏ d)² = n^t` as polynomials,
//! which together give `𝒢^{2t} = (ℋ·𝒜)^t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Rational;
use crate::means;
use crate::{Error, Result};

pub type Exponents = Vec<u32>;

/// Integer-coefficient polynomial in a fixed list of variables. Terms are
/// kept in a `BTreeMap`, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl SparsePoly {
    pub fn zero(vars: &[String]) -> Self {
        SparsePoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &[String], exps: Exponents, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, 1)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(&self.vars, 1);
        for _ in 0..k {
            out = out.mul(self).expect("same variables");
        }
        out
    }

    /// Largest exponent vector under lexicographic order.
    fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// `self / divisor`, failing unless the division leaves no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_vars(divisor)?;
        let (lead_e, lead_c) = divisor.leading().ok_or(Error::NotDivisible)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return Err(Error::NotDivisible);
            }
            let (q, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let step = Self::monomial(&self.vars, qe.clone(), q.clone());
            rem = rem.sub(&step.mul(divisor)?)?;
            quot.add_term(qe, q);
        }
        Ok(quot)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: Rational = point.iter().zip(e).map(|(x, &k)| x.pow(k)).product();
                m * Rational::from(c.clone())
            })
            .sum()
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let mag = c.abs();
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `num / den` with polynomial numerator and denominator.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: SparsePoly,
    pub den: SparsePoly,
}

impl RationalFunction {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        num.check_vars(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let den = SparsePoly::constant(p.vars(), 1);
        RationalFunction { num: p, den }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let num = self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?)?;
        Self::new(num, self.den.mul(&o.den)?)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.mul(&o.num)?, self.den.mul(&o.den)?)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_as(&self, o: &Self) -> Result<bool> {
        Ok(self.num.mul(&o.den)? == o.num.mul(&self.den)?)
    }
}

/// Exponents `(e₁, …, e_k)` of `n = p₁^e₁ ⋯ p_k^e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentPattern(Vec<u32>);

/// Default cap on the number of distinct primes in a pattern.
pub const MAX_VARIABLES: usize = 4;

impl ExponentPattern {
    pub fn new(e: Vec<u32>) -> Result<Self> {
        if e.is_empty() || e.contains(&0) {
            return Err(Error::InvalidPattern(format!("{e:?}")));
        }
        if e.len() > MAX_VARIABLES {
            return Err(Error::InvalidPattern(format!("{e:?} has more than {MAX_VARIABLES} primes")));
        }
        Ok(ExponentPattern(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `p, q, r, s` for up to four primes, `p1 … pk` beyond.
    pub fn variables(&self) -> Vec<String> {
        const NAMES: [&str; 4] = ["p", "q", "r", "s"];
        if self.0.len() <= NAMES.len() {
            NAMES[..self.0.len()].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=self.0.len()).map(|i| format!("p{i}")).collect()
        }
    }

    pub fn divisor_count(&self) -> usize {
        self.0.iter().map(|&e| e as usize + 1).product()
    }

    /// The monomial `n = ∏ p_i^{e_i}`.
    pub fn n_monomial(&self) -> SparsePoly {
        SparsePoly::monomial(&self.variables(), self.0.clone(), 1)
    }

    /// Every pattern with `k ≤ max_k` primes and exponents in `1..=max_e`.
    pub fn all_up_to(max_k: usize, max_e: u32) -> Vec<ExponentPattern> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(cur: &mut Vec<u32>, k: usize, max_e: u32, out: &mut Vec<ExponentPattern>) {
            if cur.len() == k {
                out.push(ExponentPattern(cur.clone()));
                return;
            }
            for e in 1..=max_e {
                cur.push(e);
                rec(cur, k, max_e, out);
                cur.pop();
            }
        }
        for k in 1..=max_k {
            rec(&mut cur, k, max_e, &mut out);
        }
        out
    }
}

impl std::str::FromStr for ExponentPattern {
    type Err = Error;

    /// Comma-separated exponents, e.g. `2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let e = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::InvalidPattern(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        ExponentPattern::new(e)
    }
}

/// The monomials `∏ p_i^{f_i}`, `0 ≤ f_i ≤ e_i`, ordered by exponent vector.
pub fn divisor_monomials(pattern: &ExponentPattern) -> Vec<SparsePoly> {
    let vars = pattern.variables();
    let mut exps: Vec<Exponents> = vec![vec![]];
    for &e in pattern.exponents() {
        exps = exps
            .into_iter()
            .flat_map(|prefix| {
                (0..=e).map(move |f| {
                    let mut v = prefix.clone();
                    v.push(f);
                    v
                })
            })
            .collect();
    }
    exps.into_iter().map(|e| SparsePoly::monomial(&vars, e, 1)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalReport {
    pub pattern: ExponentPattern,
    pub divisors: usize,
    /// `{n/d}` equals `{d}` as a multiset.
    pub self_reciprocal: bool,
    /// `ℋ·𝒜 = n` as rational functions.
    pub harmonic_times_arithmetic: bool,
    /// `(∏ d)² = n^t`.
    pub product_power: bool,
}

impl FormalReport {
    pub fn holds(&self) -> bool {
        self.self_reciprocal && self.harmonic_times_arithmetic && self.product_power
    }
}

pub fn verify_geo2_formal(pattern: &ExponentPattern) -> Result<FormalReport> {
    let vars = pattern.variables();
    let divs = divisor_monomials(pattern);
    let t = divs.len();
    let n = pattern.n_monomial();

    let mut cofactors = divs.iter().map(|d| n.exact_div(d)).collect::<Result<Vec<_>>>()?;
    let mut sorted = divs.clone();
    let key = |p: &SparsePoly| p.terms().keys().next().cloned();
    cofactors.sort_by_key(key);
    sorted.sort_by_key(key);
    let self_reciprocal = cofactors == sorted;

    let t_poly = SparsePoly::constant(&vars, t as u64);
    let mut recip_sum = RationalFunction::new(SparsePoly::zero(&vars), SparsePoly::constant(&vars, 1))?;
    let mut sigma1 = SparsePoly::zero(&vars);
    for d in &divs {
        recip_sum = recip_sum.add(&RationalFunction::new(SparsePoly::constant(&vars, 1), d.clone())?)?;
        sigma1 = sigma1.add(d)?;
    }
    let harmonic = RationalFunction::from_poly(t_poly.clone()).mul(&recip_sum.recip()?)?;
    let arithmetic = RationalFunction::new(sigma1, t_poly)?;
    let product = harmonic.mul(&arithmetic)?;
    let harmonic_times_arithmetic = product.same_as(&RationalFunction::from_poly(n.clone()))?;

    let mut prod = SparsePoly::constant(&vars, 1);
    for d in &divs {
        prod = prod.mul(d)?;
    }
    let product_power = prod.pow(2) == n.pow(t as u32);

    Ok(FormalReport {
        pattern: pattern.clone(),
        divisors: t,
        self_reciprocal,
        harmonic_times_arithmetic,
        product_power,
    })
}

/// `𝒢(xs)² = ℋ(xs)·𝒜(xs)`, checked as `∏x² = (ℋ·𝒜)^t`.
pub fn geo2_holds(xs: &[Rational]) -> Result<bool> {
    let prod: Rational = xs.iter().product();
    let ha = means::harmonic_mean(xs)? * means::arithmetic_mean(xs)?;
    Ok(prod.pow(2) == ha.pow(xs.len() as u32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericReport {
    pub pattern: ExponentPattern,
    pub seed: u64,
    pub trials: usize,
    /// Divisor-structured lists where the identity held exactly.
    pub structured_passed: usize,
    /// Random unstructured lists (same length) where it failed.
    pub unstructured_failed: usize,
    /// False when the lists have two entries: then `∏x² = (ℋ·𝒜)²` holds for
    /// every list, so no control can fail.
    pub control_applicable: bool,
    pub first_failure: Option<String>,
}

impl NumericReport {
    /// Every structured trial held and, where it can, the control failed at
    /// least once.
    pub fn holds(&self) -> bool {
        self.structured_passed == self.trials && (!self.control_applicable || self.unstructured_failed >= 1)
    }
}

/// Pairwise-distinct positive rationals with numerator and denominator in `1..=100`.
pub fn random_distinct_rationals(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let x = Rational::new(rng.gen_range(1..=100i64), rng.gen_range(1..=100i64)).expect("nonzero");
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Evaluates the divisor monomials at random rational points and checks the
/// identity exactly; a same-length random list serves as negative control.
pub fn verify_geo2_numeric(pattern: &ExponentPattern, trials: usize, seed: u64) -> Result<NumericReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let divs = divisor_monomials(pattern);
    let mut report = NumericReport {
        pattern: pattern.clone(),
        seed,
        trials,
        structured_passed: 0,
        unstructured_failed: 0,
        control_applicable: divs.len() > 2,
        first_failure: None,
    };
    for _ in 0..trials {
        let point = random_distinct_rationals(&mut rng, pattern.len());
        let list: Vec<Rational> = divs.iter().map(|d| d.eval(&point)).collect();
        if geo2_holds(&list)? {
            report.structured_passed += 1;
        } else if report.first_failure.is_none() {
            let shown: Vec<String> = point.iter().map(|x| x.to_string()).collect();
            report.first_failure = Some(format!("pattern {:?} at ({})", pattern.exponents(), shown.join(", ")));
        }
        let mut control = random_distinct_rationals(&mut rng, list.len());
        control.shuffle(&mut rng);
        if !geo2_holds(&control)? {
            report.unstructured_failed += 1;
        }
    }
    Ok(report)
}
