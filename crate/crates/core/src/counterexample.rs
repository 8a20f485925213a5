//! Integer power series whose truncations keep half of their zeros at `T = 1`.
//!
//! Given `f in Z[T]` of degree `m` and `n > m + 1`, there is a unique monic
//! `F` of degree `n` with `F = f (mod T^(m+1))` and `(T-1)^(n-m-1) | F`.
//! Iterating with degrees `2, 6, 14, ..., 2^(k+2) - 2` gives a sequence of
//! truncations of one power series; each has at least half its roots at 1.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::poly::{taylor_shift_int, QPoly};

/// Polynomial in `Z[T]`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial(Vec<BigInt>);

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntegerPolynomial(coeffs)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        IntegerPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.0.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(One::is_one)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::from_bigints(&self.0)
    }

    /// `f(T + 1)`
    pub fn shift_by_one(&self) -> Vec<BigInt> {
        let mut c = self.0.clone();
        taylor_shift_int(&mut c, &BigInt::one());
        c
    }

    /// Order of vanishing at `T = 1`, by repeated exact division by `T - 1`.
    pub fn vanishing_order_at_one(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut cur = self.0.clone();
        let mut order = 0;
        loop {
            // synthetic division by (T - 1)
            let n = cur.len();
            if n < 2 {
                return order;
            }
            let mut quot = vec![BigInt::zero(); n - 1];
            let mut carry = BigInt::zero();
            for i in (0..n).rev() {
                carry += &cur[i];
                if i > 0 {
                    quot[i - 1] = carry.clone();
                }
            }
            // carry is now f(1)
            if !carry.is_zero() {
                return order;
            }
            order += 1;
            cur = quot;
        }
    }

    /// Coefficients as decimal strings, low to high.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qpoly())
    }
}

fn binomial_row_prefix(n: usize, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigInt::one();
    for i in 0..len {
        if i > n {
            out.push(BigInt::zero());
            continue;
        }
        out.push(c.clone());
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Unique monic `F` of degree `n` with `F = f (mod T^(m+1))` and
/// `(T-1)^(n-m-1) | F`, where `m = deg f`.
///
/// `F = f + T^(m+1) g(T-1) + T^n` with `g` the truncation mod `T^(n-m-1)` of
/// `-(f(1+T) + (1+T)^n) / (1+T)^(m+1)`, expanded over `Z`.
pub fn interpolation_step(f: &IntegerPolynomial, n: usize) -> Result<IntegerPolynomial> {
    let m = f
        .degree()
        .ok_or_else(|| Error::validation("interpolation_step needs a nonzero polynomial"))?;
    if n <= m + 1 {
        return Err(Error::validation(format!(
            "interpolation_step needs n > deg f + 1 (n = {n}, deg f = {m})"
        )));
    }
    let k = n - m - 1;

    let shifted = f.shift_by_one();
    let binom_n = binomial_row_prefix(n, k);
    let s: Vec<BigInt> = (0..k)
        .map(|i| shifted.get(i).cloned().unwrap_or_default() + &binom_n[i])
        .collect();

    // 1/(1+T)^(m+1) = sum (-1)^i C(m+i, i) T^i
    let mut inv = Vec::with_capacity(k);
    let mut c = BigInt::one();
    for i in 0..k {
        inv.push(if i % 2 == 0 { c.clone() } else { -c.clone() });
        c = c * BigInt::from(m + 1 + i) / BigInt::from(i + 1);
    }

    let mut g = vec![BigInt::zero(); k];
    for (i, si) in s.iter().enumerate() {
        if si.is_zero() {
            continue;
        }
        for (j, ij) in inv.iter().enumerate().take(k - i) {
            g[i + j] -= si * ij;
        }
    }
    taylor_shift_int(&mut g, &-BigInt::one());

    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (i, a) in f.coeffs().iter().enumerate() {
        coeffs[i] += a;
    }
    for (i, a) in g.into_iter().enumerate() {
        coeffs[m + 1 + i] += a;
    }
    coeffs[n] += BigInt::one();
    let big = IntegerPolynomial::new(coeffs);

    if big.degree() != Some(n) || !big.is_monic() {
        return Err(Error::invariant(format!("interpolation_step: result is not monic of degree {n}")));
    }
    if (0..=m).any(|i| big.coeff(i) != f.coeff(i)) {
        return Err(Error::invariant("interpolation_step: low-order congruence failed"));
    }
    let at_one = big.shift_by_one();
    if at_one.iter().take(k).any(|c| !c.is_zero()) {
        return Err(Error::invariant(format!(
            "interpolation_step: (T-1)^{k} does not divide the result"
        )));
    }
    Ok(big)
}

/// Degree of the `n`-th member of the sequence: `2^(n+2) - 2`.
pub fn sequence_degree(n: usize) -> usize {
    (1usize << (n + 2)) - 2
}

/// The sequence `F_0, ..., F_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleSequence {
    pub polys: Vec<IntegerPolynomial>,
}

impl CounterexampleSequence {
    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|f| f.degree().unwrap_or(0)).collect()
    }
}

/// `F_0 = (T-1)^2`, the only monic quadratic that is `1 (mod T)` and vanishes
/// at 1; then `F_{n+1} = interpolation_step(F_n, 2^(n+3) - 2)`.
pub fn build_sequence(n_max: usize) -> Result<CounterexampleSequence> {
    let seed = IntegerPolynomial::from_ints(&[1]);
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(interpolation_step(&seed, sequence_degree(0))?);
    for n in 0..n_max {
        let next = interpolation_step(&polys[n], sequence_degree(n + 1))?;
        polys.push(next);
    }
    Ok(CounterexampleSequence { polys })
}

static LIMIT_CACHE: Mutex<Vec<IntegerPolynomial>> = Mutex::new(Vec::new());

/// `a_0, ..., a_n` of the limit power series.
pub fn limit_prefix(n: usize) -> Vec<BigInt> {
    let mut cache = LIMIT_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        let seed = IntegerPolynomial::from_ints(&[1]);
        cache.push(interpolation_step(&seed, sequence_degree(0)).expect("base step"));
    }
    while cache.last().and_then(IntegerPolynomial::degree).unwrap_or(0) < n {
        let k = cache.len();
        let next = interpolation_step(&cache[k - 1], sequence_degree(k)).expect("construction step");
        cache.push(next);
    }
    let last = cache.last().unwrap();
    (0..=n).map(|j| last.coeff(j)).collect()
}

/// Coefficient `j` of the limit series (stable across all `F_n` of degree >= j).
pub fn limit_coefficient(j: u64) -> BigInt {
    limit_prefix(j as usize).pop().unwrap()
}

/// `ord_{T=1}(F) / deg F`.
pub fn mass_at_one(f: &IntegerPolynomial) -> Result<Rational> {
    let d = f.degree().ok_or_else(|| Error::validation("mass_at_one of the zero polynomial"))?;
    if d == 0 {
        return Err(Error::validation("mass_at_one of a constant: no roots"));
    }
    let order = f.vanishing_order_at_one();
    Ok(Rational::new(BigInt::from(order), BigInt::from(d)))
}

/// Per-member verification record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub n: usize,
    pub degree: usize,
    pub expected_degree: usize,
    pub monic: bool,
    pub vanishing_order: usize,
    /// `2^n - 1`
    pub required_order: usize,
    pub mass_at_one: String,
    pub half_mass: bool,
    /// `F_{n+1} = F_n (mod T^(d_n + 1))`, when a successor exists.
    pub congruent_to_next: Option<bool>,
}

impl VerificationRow {
    pub fn ok(&self) -> bool {
        self.monic
            && self.degree == self.expected_degree
            && self.vanishing_order >= self.required_order
            && self.half_mass
            && self.congruent_to_next.unwrap_or(true)
    }
}

pub fn verify(seq: &CounterexampleSequence) -> Result<Vec<VerificationRow>> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut rows = Vec::with_capacity(seq.polys.len());
    for (n, f) in seq.polys.iter().enumerate() {
        let degree = f.degree().unwrap_or(0);
        let mass = mass_at_one(f)?;
        let congruent_to_next = seq
            .polys
            .get(n + 1)
            .map(|next| (0..=degree).all(|j| next.coeff(j) == f.coeff(j)));
        rows.push(VerificationRow {
            n,
            degree,
            expected_degree: sequence_degree(n),
            monic: f.is_monic(),
            vanishing_order: f.vanishing_order_at_one(),
            required_order: (1usize << n) - 1,
            half_mass: mass >= half,
            mass_at_one: mass.to_string(),
            congruent_to_next,
        });
    }
    Ok(rows)
}

/// `a_{d_n} = 1` for every member, read off the last (longest) truncation.
/// Together with integrality of all coefficients (`|a_j|_p <= 1`) this pins
/// the `p`-adic radius of convergence to 1.
pub fn radius_one_witness(seq: &CounterexampleSequence) -> bool {
    let Some(last) = seq.polys.last() else {
        return false;
    };
    seq.degrees().into_iter().all(|d| last.coeff(d).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntegerPolynomial {
        IntegerPolynomial::from_ints(c)
    }

    #[test]
    fn interpolation_examples() {
        assert_eq!(interpolation_step(&ip(&[1]), 2).unwrap(), ip(&[1, -2, 1]));
        assert_eq!(interpolation_step(&ip(&[1]), 3).unwrap(), ip(&[1, -1, -1, 1]));
        assert_eq!(
            interpolation_step(&ip(&[0, 0, 1]), 6).unwrap(),
            ip(&[0, 0, 1, -4, 6, -4, 1])
        );
    }

    #[test]
    fn interpolation_rejects_small_degree() {
        assert!(matches!(interpolation_step(&ip(&[0, 0, 1]), 3), Err(Error::Validation(_))));
        assert!(matches!(interpolation_step(&ip(&[]), 3), Err(Error::Validation(_))));
    }

    #[test]
    fn sequence_start() {
        let s = build_sequence(0).unwrap();
        assert_eq!(s.polys, vec![ip(&[1, -2, 1])]);
        let s = build_sequence(2).unwrap();
        // (T-1)^3 (T^3 - T^2 - T - 1)
        assert_eq!(s.polys[1], ip(&[1, -2, 1, -2, 5, -4, 1]));
        assert_eq!(s.degrees(), vec![2, 6, 14]);
        assert!((0..=6).all(|j| s.polys[2].coeff(j) == s.polys[1].coeff(j)));
        assert!(s.polys[2].vanishing_order_at_one() >= 7);
    }

    #[test]
    fn limit_coefficients() {
        assert_eq!(limit_coefficient(2), BigInt::from(1));
        assert_eq!(limit_coefficient(5), BigInt::from(-4));
        assert_eq!(limit_coefficient(0), BigInt::from(1));
    }

    #[test]
    fn mass_examples() {
        let f1 = ip(&[0, 0, 1, -4, 6, -4, 1]);
        assert_eq!(mass_at_one(&f1).unwrap(), Rational::new(2.into(), 3.into()));
        assert_eq!(mass_at_one(&ip(&[1, -2, 1])).unwrap(), Rational::one());
        assert_eq!(mass_at_one(&ip(&[0, 0, 1])).unwrap(), Rational::zero());
        assert!(mass_at_one(&ip(&[5])).is_err());
    }

    #[test]
    fn output_is_unique_under_perturbation() {
        // Changing any single coefficient of the output breaks one of the
        // two congruences (or monicity).
        let f = ip(&[3, -1, 2]);
        let n = 9;
        let big = interpolation_step(&f, n).unwrap();
        let k = n - 2 - 1;
        for j in 0..=n {
            let mut c = big.coeffs().to_vec();
            c[j] += BigInt::one();
            let pert = IntegerPolynomial::new(c);
            let low_ok = (0..=2).all(|i| pert.coeff(i) == f.coeff(i));
            let div_ok = pert.vanishing_order_at_one() >= k;
            let monic_ok = pert.is_monic() && pert.degree() == Some(n);
            assert!(!(low_ok && div_ok && monic_ok), "perturbing T^{j} kept all constraints");
        }
    }

    #[test]
    fn verification_passes() {
        let s = build_sequence(4).unwrap();
        let rows = verify(&s).unwrap();
        assert!(rows.iter().all(VerificationRow::ok), "{rows:?}");
        assert!(radius_one_witness(&s));
    }
}
