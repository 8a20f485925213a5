//! Which truncation orders an experiment looks at.
//!
//! The limit theorems only speak about subsequences along which
//! `|a_n|^(1/n)` tends to `1/R`. The cutoff is never guessed: the filter
//! and its tolerance are part of the experiment input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{is_prime, ln_abs, val_p_i64, Prime, Rational};
use crate::series::SeriesSpec;

/// Inclusive range of truncation orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderRange {
    pub min: usize,
    pub max: usize,
    #[serde(default = "one")]
    pub step: usize,
}

fn one() -> usize {
    1
}

impl OrderRange {
    pub fn new(min: usize, max: usize) -> Self {
        OrderRange { min, max, step: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.step == 0 {
            return Err(Error::validation("n.step must be positive"));
        }
        if self.min == 0 {
            return Err(Error::validation("n.min must be at least 1 (f_0 has no zeros)"));
        }
        if self.min > self.max {
            return Err(Error::validation(format!("empty range: n.min = {} > n.max = {}", self.min, self.max)));
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.min..=self.max).step_by(self.step.max(1))
    }
}

/// Where `|a_n|^(1/n) R` is measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    /// Archimedean, `R` given as a float.
    Complex { radius: f64 },
    /// `p`-adic, `R = p^(-v_R)`.
    Padic { p: Prime, r_exponent: Rational },
}

/// Predicate on `n`, keyed by `filter` in configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "filter", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Subsequence {
    All,
    Primes,
    PowersOfTwo,
    /// Explicit orders; those outside the range are dropped.
    List { orders: Vec<usize> },
    /// Keep `n` with `a_n != 0` and `| |a_n|^(1/n) R - 1 | <= delta`.
    LeadingRatio { delta: f64 },
}

impl Default for Subsequence {
    fn default() -> Self {
        Subsequence::All
    }
}

/// `|a_n|^(1/n) R` as a float, `None` when `a_n = 0`.
pub fn leading_ratio(spec: &SeriesSpec, n: usize, place: &Place) -> Option<f64> {
    if n == 0 {
        return None;
    }
    let a = spec.coefficient(n as u64);
    match place {
        Place::Complex { radius } => ln_abs(&a).map(|l| (l / n as f64 + radius.ln()).exp()),
        Place::Padic { p, r_exponent } => {
            let v = val_p_i64(&a, *p)?;
            let e = -(Rational::new(v.into(), (n as i64).into()) + r_exponent);
            Some((crate::exact::rational_to_f64(&e) * (p.get() as f64).ln()).exp())
        }
    }
}

impl Subsequence {
    pub fn validate(&self) -> Result<()> {
        if let Subsequence::LeadingRatio { delta } = self {
            if !(delta.is_finite() && *delta >= 0.0) {
                return Err(Error::validation(format!("leading-ratio delta must be a finite non-negative number, got {delta}")));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &'static str {
        match self {
            Subsequence::All => "all",
            Subsequence::Primes => "primes",
            Subsequence::PowersOfTwo => "powers-of-two",
            Subsequence::List { .. } => "list",
            Subsequence::LeadingRatio { .. } => "leading-ratio",
        }
    }

    /// Orders in `range` that pass the filter, ascending.
    pub fn select(&self, spec: &SeriesSpec, range: &OrderRange, place: &Place) -> Result<Vec<usize>> {
        range.validate()?;
        self.validate()?;
        let keep = |n: usize| match self {
            Subsequence::All => true,
            Subsequence::Primes => is_prime(n as u64),
            Subsequence::PowersOfTwo => n.is_power_of_two(),
            Subsequence::List { orders } => orders.contains(&n),
            Subsequence::LeadingRatio { delta } => {
                leading_ratio(spec, n, place).is_some_and(|r| (r - 1.0).abs() <= *delta)
            }
        };
        Ok(range.iter().filter(|&n| keep(n)).collect())
    }
}
