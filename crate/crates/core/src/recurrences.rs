//! The sequences `u_n(w)` and `a_n(w)`, the map `θ(x) = 2x² − 1`, and
//! exact membership tests for the conics
//!
//! ```text
//! C(w):  x² + y² − √w·xy = 1
//! C₂(w): (x + y − 1)² = wxy
//! C₃(w): (x + y)² = w(x + 1)(y + 1)
//! ```
//!
//! `a_n(w)` alternates between integers and integer multiples of `√w`, so it
//! is stored as a [`QuadraticInt`] and `√w` is never evaluated numerically.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::Rational;
use crate::par;
use crate::{Error, Result};

/// `coeff · (√w)^parity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticInt {
    w: u64,
    coeff: BigInt,
    parity: u8,
}

impl QuadraticInt {
    pub fn new(w: u64, coeff: impl Into<BigInt>, parity: u8) -> Self {
        assert!(parity <= 1, "parity must be 0 or 1");
        let coeff = coeff.into();
        // zero has a single representation
        let parity = if coeff.is_zero() { 0 } else { parity };
        QuadraticInt { w, coeff, parity }
    }

    pub fn integer(w: u64, coeff: impl Into<BigInt>) -> Self {
        Self::new(w, coeff, 0)
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn coeff(&self) -> &BigInt {
        &self.coeff
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// `self · √w`.
    pub fn mul_sqrt_w(&self) -> Self {
        match self.parity {
            0 => QuadraticInt::new(self.w, self.coeff.clone(), 1),
            _ => QuadraticInt::new(self.w, &self.coeff * self.w, 0),
        }
    }

    /// Difference of two elements of the same parity. Zero is compatible
    /// with either parity.
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.w != other.w {
            return Err(Error::ParameterMismatch { conic: self.w, point: other.w });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(QuadraticInt::new(self.w, -&other.coeff, other.parity));
        }
        if self.parity != other.parity {
            return Err(Error::ParityMismatch(self.to_string(), other.to_string()));
        }
        Ok(QuadraticInt::new(self.w, &self.coeff - &other.coeff, self.parity))
    }

    /// `self²`, always an integer: `coeff² · w^parity`.
    pub fn square(&self) -> BigInt {
        let c2 = &self.coeff * &self.coeff;
        if self.parity == 1 {
            c2 * self.w
        } else {
            c2
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        if self.parity == 1 {
            c * (self.w as f64).sqrt()
        } else {
            c
        }
    }

    fn to_surd(&self) -> Surd {
        match self.parity {
            0 => Surd::int(self.coeff.clone()),
            _ => Surd { int: BigInt::zero(), root: self.coeff.clone() },
        }
    }
}

impl fmt::Display for QuadraticInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.parity, self.coeff.is_one()) {
            (0, _) => write!(f, "{}", self.coeff),
            (_, true) => write!(f, "√{}", self.w),
            _ => write!(f, "{}√{}", self.coeff, self.w),
        }
    }
}

impl Serialize for QuadraticInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticInt", 4)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("coeff", &self.coeff.to_string())?;
        st.serialize_field("parity", &self.parity)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// `int + root·√w`, the ring the conic equations are evaluated in.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Surd {
    int: BigInt,
    root: BigInt,
}

impl Surd {
    fn int(v: impl Into<BigInt>) -> Self {
        Surd { int: v.into(), root: BigInt::zero() }
    }

    fn add(&self, o: &Surd) -> Surd {
        Surd { int: &self.int + &o.int, root: &self.root + &o.root }
    }

    fn sub(&self, o: &Surd) -> Surd {
        Surd { int: &self.int - &o.int, root: &self.root - &o.root }
    }

    fn mul(&self, o: &Surd, w: u64) -> Surd {
        Surd { int: &self.int * &o.int + &self.root * &o.root * w, root: &self.int * &o.root + &self.root * &o.int }
    }

    fn mul_sqrt_w(&self, w: u64) -> Surd {
        Surd { int: &self.root * w, root: self.int.clone() }
    }

    /// Exact zero test of the real number `int + root·√w`.
    fn is_zero(&self, w: u64) -> bool {
        let s = w.sqrt();
        if s * s == w {
            (&self.int + &self.root * s).is_zero()
        } else {
            self.int.is_zero() && self.root.is_zero()
        }
    }
}

/// `θ(x) = 2x² − 1`.
pub trait Theta {
    fn theta(&self) -> Self;
}

impl Theta for Rational {
    fn theta(&self) -> Rational {
        Rational::from(2) * self * self - Rational::one()
    }
}

impl Theta for QuadraticInt {
    fn theta(&self) -> QuadraticInt {
        QuadraticInt::integer(self.w, 2 * self.square() - 1)
    }
}

/// `u_0 = 0, u_1 = 1, u_{n+1} = (w − 2)u_n − u_{n−1} + 2`.
pub fn u_seq(w: u64, n_max: usize) -> Vec<BigInt> {
    let mut u = vec![BigInt::zero(), BigInt::one()];
    let k = BigInt::from(w) - 2;
    while u.len() <= n_max {
        let n = u.len() - 1;
        u.push(&k * &u[n] - &u[n - 1] + 2);
    }
    u.truncate(n_max + 1);
    u
}

/// `u_0 = 0, u_1 = 1, u_2 = w, u_{n+2} = (w − 1)(u_{n+1} − u_n) + u_{n−1}`.
pub fn u_seq_order3(w: u64, n_max: usize) -> Vec<BigInt> {
    let mut u = vec![BigInt::zero(), BigInt::one(), BigInt::from(w)];
    let k = BigInt::from(w) - 1;
    while u.len() <= n_max {
        let n = u.len() - 2;
        u.push(&k * (&u[n + 1] - &u[n]) + &u[n - 1]);
    }
    u.truncate(n_max + 1);
    u
}

/// `a_0 = 0, a_1 = 1, a_n = √w·a_{n−1} − a_{n−2}`.
///
/// A parity mismatch error would mean the alternation invariant broke,
/// which is a bug here rather than bad input.
pub fn a_seq(w: u64, n_max: usize) -> Result<Vec<QuadraticInt>> {
    let mut a = vec![QuadraticInt::integer(w, 0), QuadraticInt::integer(w, 1)];
    while a.len() <= n_max {
        let n = a.len();
        let next = a[n - 1].mul_sqrt_w().checked_sub(&a[n - 2])?;
        a.push(next);
    }
    a.truncate(n_max + 1);
    Ok(a)
}

/// `θ(a_n) = 2u_n − 1` for every `n ≤ n_max`.
pub fn theta_u_link(w: u64, n_max: usize) -> Result<bool> {
    let a = a_seq(w, n_max)?;
    let u = u_seq(w, n_max);
    Ok(a.iter().zip(&u).all(|(a, u)| a.theta().coeff == 2 * u - 1 && a.square() == *u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Conic {
    C,
    C2,
    C3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConicId {
    pub which: Conic,
    pub w: u64,
}

impl ConicId {
    pub fn new(which: Conic, w: u64) -> Self {
        ConicId { which, w }
    }

    /// Membership of a point whose coordinates live in `ℤ[√w]`.
    pub fn contains_quadratic(&self, x: &QuadraticInt, y: &QuadraticInt) -> Result<bool> {
        for p in [x, y] {
            if p.w != self.w {
                return Err(Error::ParameterMismatch { conic: self.w, point: p.w });
            }
        }
        let w = self.w;
        let (x, y) = (x.to_surd(), y.to_surd());
        let one = Surd::int(1);
        let residual = match self.which {
            Conic::C => x.mul(&x, w).add(&y.mul(&y, w)).sub(&x.mul(&y, w).mul_sqrt_w(w)).sub(&one),
            Conic::C2 => {
                let s = x.add(&y).sub(&one);
                s.mul(&s, w).sub(&x.mul(&y, w).mul(&Surd::int(w), w))
            }
            Conic::C3 => {
                let s = x.add(&y);
                let rhs = x.add(&one).mul(&y.add(&one), w).mul(&Surd::int(w), w);
                s.mul(&s, w).sub(&rhs)
            }
        };
        Ok(residual.is_zero(w))
    }

    /// Membership of a rational point.
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let w = Rational::from(self.w);
        let one = Rational::one();
        match self.which {
            Conic::C => {
                // x² + y² − 1 = √w·xy  ⇔  both sides share a sign and their squares agree
                let lhs = x * x + y * y - &one;
                let xy = x * y;
                lhs.pow(2) == &w * &xy.pow(2)
                    && (lhs.is_positive() == xy.is_positive())
                    && (lhs.is_zero() == xy.is_zero())
            }
            Conic::C2 => {
                let s = x + y - one;
                &s * &s == w * x * y
            }
            Conic::C3 => {
                let s = x + y;
                &s * &s == w * (x + &one) * (y + &one)
            }
        }
    }
}

/// Consecutive points used to exercise the conic correspondences.
#[derive(Clone, Debug)]
pub struct ConicSamples {
    pub w: u64,
    /// `(a_n, a_{n−1})`, on `C(w)`.
    pub on_c: Vec<(QuadraticInt, QuadraticInt)>,
    /// `(u_n, u_{n−1})`, on `C₂(w)`.
    pub on_c2: Vec<(BigInt, BigInt)>,
}

impl ConicSamples {
    pub fn consecutive(w: u64, n_max: usize) -> Result<Self> {
        let a = a_seq(w, n_max)?;
        let u = u_seq(w, n_max);
        Ok(ConicSamples {
            w,
            on_c: a.windows(2).map(|p| (p[1].clone(), p[0].clone())).collect(),
            on_c2: u.windows(2).map(|p| (p[1].clone(), p[0].clone())).collect(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub first_failure: Option<String>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }
}

/// Checks the three conic correspondences on every sample:
///
/// - `(x, y) ∈ C ⇔ (θx, θy) ∈ C₃` and `(x, y) ∈ C ⇔ (x², y²) ∈ C₂`,
/// - `(x, y) ∈ C₂ ⇔ (2x − 1, 2y − 1) ∈ C₃`.
///
/// Positive samples are also perturbed off the conic to exercise the
/// reverse directions.
pub fn conic_maps_check(samples: &ConicSamples) -> Result<CheckReport> {
    let w = samples.w;
    let c = ConicId::new(Conic::C, w);
    let c2 = ConicId::new(Conic::C2, w);
    let c3 = ConicId::new(Conic::C3, w);
    let mut report = CheckReport::default();

    let mut points = Vec::new();
    for (x, y) in &samples.on_c {
        points.push((x.clone(), y.clone()));
        if x.coeff.is_positive() && y.coeff.is_positive() {
            points.push((QuadraticInt::new(w, &x.coeff * 2, x.parity), y.clone()));
        }
    }
    for (x, y) in &points {
        let on_c = c.contains_quadratic(x, y)?;
        let on_c3 = c3.contains_quadratic(&x.theta(), &y.theta())?;
        let squares = (QuadraticInt::integer(w, x.square()), QuadraticInt::integer(w, y.square()));
        let on_c2 = c2.contains_quadratic(&squares.0, &squares.1)?;
        report.record(on_c == on_c3, || format!("w={w}: ({x}, {y}) on C is {on_c}, θ-image on C3 is {on_c3}"));
        report.record(on_c == on_c2, || format!("w={w}: ({x}, {y}) on C is {on_c}, squared image on C2 is {on_c2}"));
    }
    for (x, y) in &samples.on_c2 {
        for (px, py) in [(x.clone(), y.clone()), (x + 1, y.clone())] {
            let (rx, ry) = (Rational::from(px.clone()), Rational::from(py.clone()));
            let on_c2 = c2.contains(&rx, &ry);
            let two = Rational::from(2);
            let on_c3 = c3.contains(&(&two * &rx - Rational::one()), &(&two * &ry - Rational::one()));
            report.record(on_c2 == on_c3, || {
                format!("w={w}: ({px}, {py}) on C2 is {on_c2}, affine image on C3 is {on_c3}")
            });
        }
    }
    Ok(report)
}

/// `(a_n, a_{n−1}) ∈ C(w)` and `a_n² − a_{n−1}a_{n+1} = 1` for all `1 ≤ n ≤ n_max`.
pub fn a_on_conic_check(w: u64, n_max: usize) -> Result<CheckReport> {
    let a = a_seq(w, n_max + 1)?;
    let c = ConicId::new(Conic::C, w);
    let mut report = CheckReport::default();
    for n in 1..=n_max {
        let on = c.contains_quadratic(&a[n], &a[n - 1])?;
        report.record(on, || format!("w={w}: (a_{n}, a_{}) = ({}, {}) not on C", n - 1, a[n], a[n - 1]));
        let det = a[n].to_surd().mul(&a[n].to_surd(), w).sub(&a[n - 1].to_surd().mul(&a[n + 1].to_surd(), w));
        report.record(det.sub(&Surd::int(1)).is_zero(w), || format!("w={w}: a_{n}² − a_{}a_{} ≠ 1", n - 1, n + 1));
    }
    Ok(report)
}

/// Every positive solution `(x, y)` with `x, y ≤ bound` of
/// `(x + y − 1)² = wxy`, in ascending order.
///
/// For each `x` the equation is a monic quadratic in `y`, solved exactly
/// through its integer discriminant.
pub fn solve_c2_bruteforce(w: u64, bound: u64) -> Vec<(u64, u64)> {
    assert!(bound < 1 << 40 && w < 1 << 20, "scan parameters out of range");
    let chunks = par::chunks(1, bound.max(1), 4096);
    let parts = par::map_collect(chunks, |(lo, hi)| {
        let mut out = Vec::new();
        for x in lo..=hi {
            let xm1 = x as i128 - 1;
            let b = 2 * xm1 - w as i128 * x as i128;
            let disc = b * b - 4 * xm1 * xm1;
            if disc < 0 {
                continue;
            }
            let s = disc.sqrt();
            if s * s != disc {
                continue;
            }
            let mut ys = [(-b - s), (-b + s)];
            ys.sort_unstable();
            let mut last = None;
            for twice_y in ys {
                if twice_y % 2 != 0 || Some(twice_y) == last {
                    continue;
                }
                last = Some(twice_y);
                let y = twice_y / 2;
                if y >= 1 && y <= bound as i128 {
                    out.push((x, y as u64));
                }
            }
        }
        out
    });
    parts.into_iter().flatten().collect()
}

/// Naive `O(bound²)` grid scan, kept as an independent check on
/// [`solve_c2_bruteforce`] for small bounds.
pub fn solve_c2_grid(w: u64, bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for x in 1..=bound as i128 {
        for y in 1..=bound as i128 {
            let s = x + y - 1;
            if s * s == w as i128 * x * y {
                out.push((x as u64, y as u64));
            }
        }
    }
    out
}

pub type PairSet = BTreeSet<(u64, u64)>;

/// Canonical (`x ≥ y`) consecutive pairs `(u_n, u_{n−1})`, `n ≥ 1`, with
/// both coordinates in `[1, bound]`, plus the boundary pairs where a
/// coordinate is zero.
pub fn consecutive_u_pairs(w: u64, bound: u64) -> (PairSet, PairSet) {
    // w ≤ 3 gives periods 3, 4, 6; larger w gives a strictly increasing sequence
    let periodic = w <= 3;
    let mut interior = BTreeSet::new();
    let mut boundary = BTreeSet::new();
    let k = w as i128 - 2;
    let (mut prev, mut cur) = (0i128, 1i128);
    let mut n = 1usize;
    loop {
        if periodic && n > 12 || !periodic && prev > bound as i128 {
            break;
        }
        if cur <= bound as i128 && prev <= bound as i128 {
            let pair = (cur.max(prev) as u64, cur.min(prev) as u64);
            if pair.1 == 0 {
                boundary.insert(pair);
            } else {
                interior.insert(pair);
            }
        }
        let next = k.checked_mul(cur).and_then(|v| v.checked_sub(prev)).and_then(|v| v.checked_add(2));
        match next {
            Some(v) => (prev, cur) = (cur, v),
            None => break,
        }
        n += 1;
    }
    (interior, boundary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiophantineReport {
    pub w: u64,
    pub bound: u64,
    pub solutions: usize,
    pub recurrence_pairs: usize,
    /// Scan solutions (canonical) that no consecutive pair explains.
    pub unexplained: Vec<(u64, u64)>,
    /// Consecutive pairs the scan did not find.
    pub missed: Vec<(u64, u64)>,
    /// Consecutive pairs with a zero coordinate, outside the positive scan.
    pub boundary_pairs: Vec<(u64, u64)>,
}

impl DiophantineReport {
    pub fn holds(&self) -> bool {
        self.unexplained.is_empty() && self.missed.is_empty()
    }
}

/// Compares the exhaustive solution set with the consecutive `u`-pairs.
pub fn diophantine_completeness(w: u64, bound: u64) -> DiophantineReport {
    let scan: BTreeSet<(u64, u64)> =
        solve_c2_bruteforce(w, bound).into_iter().map(|(x, y)| (x.max(y), x.min(y))).collect();
    let (pairs, boundary) = consecutive_u_pairs(w, bound);
    DiophantineReport {
        w,
        bound,
        solutions: scan.len(),
        recurrence_pairs: pairs.len(),
        unexplained: scan.difference(&pairs).copied().collect(),
        missed: pairs.difference(&scan).copied().collect(),
        boundary_pairs: boundary.into_iter().collect(),
    }
}
