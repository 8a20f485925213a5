//! Finite-sample diagnostics for the three hypotheses of the convergence
//! theorem, on a disk `E = E(0, R)` with the pole at infinity:
//!
//! 1. `limsup (1/k_n) log ||f_n||_E <= 0`
//! 2. `nu(f_n)(C) -> 0` for compact `C` inside `E`
//! 3. `liminf (1/k_n) log |a_{k_n}| + log R >= 0` (the `S = {inf}` form)
//!
//! A limit statement cannot be decided from finitely many terms, so each
//! verdict compares the second half of the rows (tail) with the first
//! half (head); see [`trend_verdict`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{complex_roots, log_sup_norm_on_circle};
use crate::error::{Error, Result};
use crate::exact::{ln_abs, val_p_i64, ExtRational, Prime, Rational};
use crate::padic::{gauss_seminorm, newton_polygon, root_valuations, BerkovichPoint};
use crate::poly::QPoly;

/// Three-valued verdict for one hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionVerdict {
    Consistent,
    /// The tail row whose value is furthest on the wrong side.
    ViolatedAt(usize),
    Inconclusive,
}

impl fmt::Display for ConditionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionVerdict::Consistent => write!(f, "consistent"),
            ConditionVerdict::ViolatedAt(n) => write!(f, "violated-at-{n}"),
            ConditionVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

impl Serialize for ConditionVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `bad_n >= 0` should tend to 0. With fewer than four rows the answer is
/// inconclusive. Otherwise it is consistent when the tail is identically
/// zero or its maximum is strictly below the head maximum, and violated at
/// the tail argmax otherwise.
pub fn trend_verdict<T: PartialOrd + Zero + Clone>(ns: &[usize], bad: &[T]) -> ConditionVerdict {
    if bad.len() < 4 {
        return ConditionVerdict::Inconclusive;
    }
    let split = (bad.len() + 1) / 2;
    let max_of = |r: std::ops::Range<usize>| {
        r.fold(None::<(usize, T)>, |acc, i| match acc {
            Some((j, m)) if !(bad[i] > m) => Some((j, m)),
            _ => Some((i, bad[i].clone())),
        })
        .expect("non-empty half")
    };
    let (_, head) = max_of(0..split);
    let (arg, tail) = max_of(split..bad.len());
    if tail.is_zero() || tail < head {
        ConditionVerdict::Consistent
    } else {
        ConditionVerdict::ViolatedAt(ns[arg])
    }
}

/// A real number, exact when it comes from valuations.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// Exact multiple of `log p`, or an exact mass.
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => crate::exact::rational_to_f64(r),
            Value::Float(x) => *x,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x:.12e}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionRow {
    pub n: usize,
    /// `k_n = deg f_n`
    pub degree: usize,
    /// `(1/k_n) log ||f_n||_E`; in units of `log p` over `Q_p`.
    pub log_norm: Value,
    /// `log(|a_{k_n}|^(1/k_n) R)`; in units of `log p` over `Q_p`.
    pub log_leading: Value,
    /// `|a_{k_n}|^(1/k_n) R`
    pub leading_ratio: f64,
    /// `nu(f_n)(E(0, R))` over `Q_p` (every classical point of the closed
    /// disk is interior), `nu(f_n)(|z| <= R - eps)` over `C`.
    pub interior_mass: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    /// `"p-adic"` or `"complex"`
    pub place: String,
    pub rows: Vec<ConditionRow>,
    pub norm_growth: ConditionVerdict,
    pub interior_mass: ConditionVerdict,
    pub leading_coefficient: ConditionVerdict,
}

pub const CONDITION_CSV_HEADER: [&str; 6] =
    ["n", "deg", "log_norm", "log_leading", "leading_ratio", "interior_mass"];

impl ConditionReport {
    pub fn csv_records(&self) -> Vec<[String; 6]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.degree.to_string(),
                    r.log_norm.to_string(),
                    r.log_leading.to_string(),
                    format!("{:.12e}", r.leading_ratio),
                    r.interior_mass.to_string(),
                ]
            })
            .collect()
    }
}

fn degree_of(n: usize, f: &QPoly) -> Result<usize> {
    match f.degree() {
        Some(k) if k > 0 => Ok(k),
        _ => Err(Error::validation(format!("truncation {n} has no zeros"))),
    }
}

/// Exact report over `Q_p` at `R = p^(-v_R)`.
pub fn padic_conditions(fs: &[(usize, QPoly)], p: Prime, r_exponent: &Rational) -> Result<ConditionReport> {
    let gauss = BerkovichPoint::gauss(r_exponent.clone());
    let rows = fs
        .par_iter()
        .map(|(n, f)| {
            let k = degree_of(*n, f)?;
            let kq = BigInt::from(k);
            let norm = gauss_seminorm(f, &gauss, p);
            let log_norm = norm.exponent().expect("nonzero polynomial") / &kq;
            let lead = f.leading().expect("nonzero polynomial");
            let v = val_p_i64(lead, p).expect("nonzero leading coefficient");
            let log_leading = -(Rational::from_integer(v.into()) / &kq) - r_exponent;
            let measure = root_valuations(&newton_polygon(f, p)?, k);
            let inside = measure.count_where(|x| match x {
                ExtRational::Infinity => true,
                ExtRational::Finite(x) => x >= r_exponent,
            });
            Ok(ConditionRow {
                n: *n,
                degree: k,
                leading_ratio: (crate::exact::rational_to_f64(&log_leading) * (p.get() as f64).ln()).exp(),
                log_norm: Value::Exact(log_norm),
                log_leading: Value::Exact(log_leading),
                interior_mass: Value::Exact(Rational::new(inside.into(), kq)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let exact = |v: &Value| match v {
        Value::Exact(r) => r.clone(),
        Value::Float(_) => unreachable!("p-adic rows are exact"),
    };
    let pos: Vec<Rational> = rows.iter().map(|r| exact(&r.log_norm).max(Rational::zero())).collect();
    let neg: Vec<Rational> = rows.iter().map(|r| (-exact(&r.log_leading)).max(Rational::zero())).collect();
    let mass: Vec<Rational> = rows.iter().map(|r| exact(&r.interior_mass)).collect();
    Ok(ConditionReport {
        place: "p-adic".into(),
        norm_growth: trend_verdict(&ns, &pos),
        leading_coefficient: trend_verdict(&ns, &neg),
        interior_mass: trend_verdict(&ns, &mass),
        rows,
    })
}

/// Report over `C`: the norm is the circle-grid estimate, the interior
/// mass counts computed roots with `|z| <= R - eps`.
pub fn complex_conditions(
    fs: &[(usize, QPoly)],
    radius: f64,
    epsilon: f64,
    tol: f64,
    seed: u64,
) -> Result<ConditionReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::validation("radius must be a positive number"));
    }
    let rows = fs
        .par_iter()
        .map(|(n, f)| {
            let k = degree_of(*n, f)?;
            let log_norm = log_sup_norm_on_circle(f, radius)? / k as f64;
            let lead = f.leading().expect("nonzero polynomial");
            let log_leading = ln_abs(lead).expect("nonzero leading coefficient") / k as f64 + radius.ln();
            let rs = complex_roots(f, tol, seed.wrapping_add(*n as u64))?;
            let inside: usize = rs
                .roots
                .iter()
                .filter(|c| c.z.norm() <= radius - epsilon)
                .map(|c| c.multiplicity)
                .sum();
            Ok(ConditionRow {
                n: *n,
                degree: k,
                log_norm: Value::Float(log_norm),
                log_leading: Value::Float(log_leading),
                leading_ratio: log_leading.exp(),
                interior_mass: Value::Float(inside as f64 / k as f64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let pos: Vec<f64> = rows.iter().map(|r| r.log_norm.to_f64().max(0.0)).collect();
    let neg: Vec<f64> = rows.iter().map(|r| (-r.log_leading.to_f64()).max(0.0)).collect();
    let mass: Vec<f64> = rows.iter().map(|r| r.interior_mass.to_f64()).collect();
    Ok(ConditionReport {
        place: "complex".into(),
        norm_growth: trend_verdict(&ns, &pos),
        leading_coefficient: trend_verdict(&ns, &neg),
        interior_mass: trend_verdict(&ns, &mass),
        rows,
    })
}
