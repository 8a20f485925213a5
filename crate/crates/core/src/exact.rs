//! Exact integers, rationals and p-adic valuations.
//!
//! Valuations are exact rationals extended by `+inf`; absolute values are
//! kept in exponent form `p^e` and only turned into floats when reported.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator (guaranteed by `num_rational`).
pub type Rational = BigRational;

/// Largest prime accepted; keeps residue arithmetic inside `u128` products.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// A validated prime number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(Error::validation(format!("{p} is not a prime in [2, {MAX_PRIME}]")));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A rational number or `+inf`, used for valuations (`v_p(0) = +inf`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn from_int(n: i64) -> Self {
        ExtRational::Finite(Rational::from_integer(BigInt::from(n)))
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
            (ExtRational::Infinity, _) => Ordering::Greater,
            (_, ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl<'a> Add<&'a ExtRational> for &'a ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn val_int(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mag = n.magnitude();
    if p.get() == 2 {
        return mag.trailing_zeros();
    }
    let pb = BigUint::from(p.get());
    let mut count = 0u64;
    let mut cur = mag.clone();
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            return Some(count);
        }
        count += 1;
        cur = q;
    }
}

/// `v_p(x)`, with `v_p(0) = +inf`.
pub fn val_p(x: &Rational, p: Prime) -> ExtRational {
    match val_p_i64(x, p) {
        Some(v) => ExtRational::from_int(v),
        None => ExtRational::Infinity,
    }
}

/// Integer-valued `v_p(x)` or `None` for zero.
pub fn val_p_i64(x: &Rational, p: Prime) -> Option<i64> {
    let num = val_int(x.numer(), p)?;
    let den = val_int(x.denom(), p).expect("denominator is nonzero");
    Some(num as i64 - den as i64)
}

/// Base-`p` digit sum of `j`.
pub fn digit_sum(mut j: u64, p: Prime) -> u64 {
    let mut s = 0;
    while j > 0 {
        s += j % p.get();
        j /= p.get();
    }
    s
}

/// Legendre's formula: `v_p(j!) = (j - s_p(j)) / (p - 1)`.
pub fn factorial_val(j: u64, p: Prime) -> Rational {
    Rational::from_integer(BigInt::from(factorial_val_u64(j, p)))
}

pub fn factorial_val_u64(j: u64, p: Prime) -> u64 {
    (j - digit_sum(j, p)) / (p.get() - 1)
}

/// `|x|_p` in exponent form: either `0` or `p^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadicAbs {
    Zero,
    Power { p: Prime, exponent: Rational },
}

impl PadicAbs {
    pub fn one(p: Prime) -> Self {
        PadicAbs::Power { p, exponent: Rational::zero() }
    }

    pub fn pow(p: Prime, exponent: Rational) -> Self {
        PadicAbs::Power { p, exponent }
    }

    /// The exponent `e` in `p^e`, or `None` for zero.
    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            PadicAbs::Zero => None,
            PadicAbs::Power { exponent, .. } => Some(exponent),
        }
    }

    /// Floating point value; for reports only.
    pub fn to_f64(&self) -> f64 {
        match self {
            PadicAbs::Zero => 0.0,
            PadicAbs::Power { p, exponent } => (p.get() as f64).powf(rational_to_f64(exponent)),
        }
    }
}

impl Ord for PadicAbs {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PadicAbs::Zero, PadicAbs::Zero) => Ordering::Equal,
            (PadicAbs::Zero, _) => Ordering::Less,
            (_, PadicAbs::Zero) => Ordering::Greater,
            (PadicAbs::Power { p: p1, exponent: a }, PadicAbs::Power { p: p2, exponent: b }) => {
                debug_assert_eq!(p1, p2, "comparing absolute values for different primes");
                a.cmp(b)
            }
        }
    }
}

impl PartialOrd for PadicAbs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for PadicAbs {
    type Output = PadicAbs;
    fn mul(self, rhs: PadicAbs) -> PadicAbs {
        match (self, rhs) {
            (PadicAbs::Power { p, exponent: a }, PadicAbs::Power { exponent: b, .. }) => {
                PadicAbs::Power { p, exponent: a + b }
            }
            _ => PadicAbs::Zero,
        }
    }
}

impl fmt::Display for PadicAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicAbs::Zero => write!(f, "0"),
            PadicAbs::Power { p, exponent } => write!(f, "{p}^({exponent})"),
        }
    }
}

/// `|x|_p = p^(-v_p(x))`, exactly.
pub fn ultrametric_abs(x: &Rational, p: Prime) -> PadicAbs {
    match val_p(x, p) {
        ExtRational::Infinity => PadicAbs::Zero,
        ExtRational::Finite(v) => PadicAbs::Power { p, exponent: -v },
    }
}

/// Reduction modulo `p` of a `p`-integral rational.
pub fn reduce_mod_p(x: &Rational, p: Prime) -> Result<u64> {
    let pb = p.as_bigint();
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::validation(format!("{x} is not {p}-integral")));
    }
    let num = x.numer().mod_floor(&pb).to_u64().expect("residue fits u64");
    let den = den.to_u64().expect("residue fits u64");
    Ok(mul_mod(num, inv_mod(den, p.get()), p.get()))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// `p^e` as a rational, for any signed exponent.
pub fn p_power(p: Prime, e: i64) -> Rational {
    let base = p.as_bigint();
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // `to_f64` only fails on overflow; fall back to a log-scale estimate.
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let bits = r.numer().bits() as f64 - r.denom().bits() as f64;
        sign * 2f64.powf(bits)
    })
}

/// `ln |x|` without overflow for huge numerators or denominators.
pub fn ln_abs(x: &Rational) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let ln = |v: &BigInt| -> f64 {
        let bits = v.bits();
        if bits < 1000 {
            v.to_f64().expect("small integer converts").ln()
        } else {
            let shift = bits - 900;
            (v >> shift).to_f64().expect("shifted integer converts").ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    Some(ln(&x.numer().abs()) - ln(x.denom()))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::validation(format!("cannot parse {s:?} as a rational"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn is_integer_sign(r: &Rational) -> Option<Sign> {
    r.is_integer().then(|| r.numer().sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_p(&int(24), p(2)), ExtRational::from_int(3));
        assert_eq!(val_p(&ratio(1, 9), p(3)), ExtRational::from_int(-2));
        assert_eq!(val_p(&int(0), p(5)), ExtRational::Infinity);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(0).is_err());
        assert!(Prime::new(97).is_ok());
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial_val(4, p(2)), int(3));
        assert_eq!(factorial_val(9, p(3)), int(4));
        assert_eq!(factorial_val(1, p(7)), int(0));
    }

    #[test]
    fn factorial_val_matches_factorisation() {
        for &q in &[2u64, 3, 5, 7] {
            let mut fact = BigInt::one();
            for j in 0..=40u64 {
                if j > 0 {
                    fact *= BigInt::from(j);
                }
                let brute = val_int(&fact, p(q)).unwrap();
                assert_eq!(factorial_val_u64(j, p(q)), brute, "j={j} p={q}");
            }
        }
    }

    #[test]
    fn abs_examples() {
        assert_eq!(ultrametric_abs(&int(24), p(2)), PadicAbs::pow(p(2), int(-3)));
        assert_eq!(ultrametric_abs(&ratio(1, 9), p(3)), PadicAbs::pow(p(3), int(2)));
        assert_eq!(ultrametric_abs(&int(0), p(5)), PadicAbs::Zero);
    }

    #[test]
    fn infinity_ordering() {
        assert!(ExtRational::Infinity > ExtRational::from_int(1_000_000));
        assert_eq!(ExtRational::Infinity + ExtRational::from_int(-5), ExtRational::Infinity);
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce_mod_p(&ratio(1, 2), p(3)).unwrap(), 2);
        assert_eq!(reduce_mod_p(&ratio(-1, 1), p(5)).unwrap(), 4);
        assert!(reduce_mod_p(&ratio(1, 3), p(3)).is_err());
        assert_eq!(parse_rational(" -6/4 ").unwrap(), ratio(-3, 2));
    }

    const PRIMES: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    ];

    fn rat() -> impl Strategy<Value = Rational> {
        (-100_000i64..100_000, 1i64..100_000).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_additive_and_ultrametric(x in rat(), y in rat(), i in 0usize..25) {
            let q = p(PRIMES[i]);
            prop_assert_eq!(val_p(&(&x * &y), q), val_p(&x, q) + val_p(&y, q));
            let vx = val_p(&x, q);
            let vy = val_p(&y, q);
            let vs = val_p(&(&x + &y), q);
            let m = vx.clone().min(vy.clone());
            prop_assert!(vs >= m);
            if vx != vy {
                prop_assert_eq!(vs, m);
            }
            // strong triangle inequality in exponent form
            let s = ultrametric_abs(&(&x + &y), q);
            let bound = ultrametric_abs(&x, q).max(ultrametric_abs(&y, q));
            prop_assert!(s <= bound);
        }

        #[test]
        fn rationals_stay_reduced(x in rat(), y in rat()) {
            for r in [&x + &y, &x * &y, &x - &y] {
                prop_assert!(r.numer().gcd(r.denom()).is_one());
                prop_assert!(r.denom().is_positive());
            }
        }
    }
}
