//! The classical means of a finite list of positive rationals, plus the
//! biharmonic mean `(H + C) / 2`.
//!
//! Everything is exact. The geometric mean is usually irrational, so it is
//! returned as a [`GeometricValue`] and compared against rationals through
//! t-th powers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{exact_root, Rational};
use crate::{Error, Result};

/// The t-th root of a positive rational: exact when the radicand is a
/// perfect t-th power, otherwise kept as a radical with an approximation.
///
/// `approx` is for display only; it carries a relative error below 1e-12
/// and is never used in comparisons.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeometricValue {
    Exact { value: Rational },
    Radical { radicand: Rational, index: u32, approx: f64 },
}

impl GeometricValue {
    /// `radicand^(1/index)`, reduced to an exact rational when possible.
    pub fn root(radicand: Rational, index: u32) -> Self {
        debug_assert!(radicand.is_positive() && index >= 1);
        let num = radicand.numer().magnitude();
        let den = radicand.denom().magnitude();
        if let (Some(a), Some(b)) = (exact_root(num, index), exact_root(den, index)) {
            let value = Rational::new(BigInt::from(a), BigInt::from(b)).expect("nonzero root");
            return GeometricValue::Exact { value };
        }
        let approx = (radicand.ln() / index as f64).exp();
        GeometricValue::Radical { radicand, index, approx }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            GeometricValue::Exact { value } => Some(value),
            GeometricValue::Radical { .. } => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            GeometricValue::Exact { value } => value.to_f64(),
            GeometricValue::Radical { approx, .. } => *approx,
        }
    }

    /// `(radicand, index)` with `self = radicand^(1/index)`.
    pub fn as_power(&self) -> (Rational, u32) {
        match self {
            GeometricValue::Exact { value } => (value.clone(), 1),
            GeometricValue::Radical { radicand, index, .. } => (radicand.clone(), *index),
        }
    }

    /// Exact comparison with a nonnegative rational, via `index`-th powers.
    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        let (radicand, index) = self.as_power();
        radicand.cmp(&other.pow(index))
    }

    /// `self^2`, which is rational whenever the index divides 2.
    pub fn squared(&self) -> GeometricValue {
        match self {
            GeometricValue::Exact { value } => GeometricValue::Exact { value: value.pow(2) },
            GeometricValue::Radical { radicand, index, .. } if index % 2 == 0 => {
                GeometricValue::root(radicand.clone(), index / 2)
            }
            GeometricValue::Radical { radicand, index, .. } => GeometricValue::root(radicand.pow(2), *index),
        }
    }
}

fn validate(xs: &[Rational]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(bad) = xs.iter().find(|x| !x.is_positive()) {
        return Err(Error::NonPositiveEntry(bad.to_string()));
    }
    Ok(())
}

fn len(xs: &[Rational]) -> Rational {
    Rational::from(xs.len() as u64)
}

pub fn arithmetic_mean(xs: &[Rational]) -> Result<Rational> {
    validate(xs)?;
    Ok(xs.iter().sum::<Rational>() / len(xs))
}

pub fn geometric_mean(xs: &[Rational]) -> Result<GeometricValue> {
    validate(xs)?;
    let product: Rational = xs.iter().product();
    Ok(GeometricValue::root(product, xs.len() as u32))
}

pub fn harmonic_mean(xs: &[Rational]) -> Result<Rational> {
    validate(xs)?;
    let inv: Rational = xs.iter().map(|x| x.recip().expect("positive")).sum();
    Ok(len(xs) / inv)
}

pub fn contraharmonic_mean(xs: &[Rational]) -> Result<Rational> {
    validate(xs)?;
    let squares: Rational = xs.iter().map(|x| x * x).sum();
    let sum: Rational = xs.iter().sum();
    Ok(squares / sum)
}

pub fn biharmonic_mean(xs: &[Rational]) -> Result<Rational> {
    let h = harmonic_mean(xs)?;
    let c = contraharmonic_mean(xs)?;
    Ok((h + c) / Rational::from(2u32))
}
