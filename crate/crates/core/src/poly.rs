//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{is_prime, mul_mod, pow_mod, Rational};
use crate::fp::FpPoly;

/// Polynomial over `Q`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::from_ints(&[1])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().cloned().map(Rational::from_integer).collect())
    }

    /// `T - c`
    pub fn linear(c: Rational) -> Self {
        QPoly::new(vec![-c, Rational::one()])
    }

    pub fn monomial(coef: Rational, deg: usize) -> Self {
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = coef;
        QPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order of vanishing at 0 (index of first nonzero coefficient).
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `f(c T)`.
    pub fn scale_var(&self, c: &Rational) -> QPoly {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        QPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * b;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Taylor shift `f(T + c)`.
    ///
    /// Done over `Z`: with `c = a/b` and `L` the lcm of the denominators,
    /// `P(S) = sum L a_j b^(d-j) S^j` is integral and `f(T + c)` has
    /// coefficients `P(S + a)_j b^(j-d) / L`.
    pub fn taylor_shift(&self, c: &Rational) -> QPoly {
        let Some(d) = self.degree() else {
            return QPoly::zero();
        };
        if c.is_zero() {
            return self.clone();
        }
        let (l, ints) = self.clear_denominators();
        let a = c.numer();
        let b = c.denom();
        let mut work: Vec<BigInt> = if b.is_one() {
            ints
        } else {
            let mut pow = BigInt::one();
            let mut w = vec![BigInt::zero(); d + 1];
            for j in (0..=d).rev() {
                w[j] = &ints[j] * &pow;
                pow *= b;
            }
            w
        };
        taylor_shift_int(&mut work, a);
        let mut out = Vec::with_capacity(d + 1);
        let mut bpow = num_traits::pow(b.clone(), d);
        let one = BigInt::one();
        for k in work.into_iter() {
            out.push(Rational::new(k, &bpow * &l));
            if b != &one {
                bpow /= b;
            }
        }
        QPoly::new(out)
    }

    /// `(L, ints)` with `L > 0` the lcm of denominators and `ints = L * f`.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        (l, ints)
    }

    /// Primitive integer polynomial with positive leading coefficient,
    /// equal to `f` up to a rational scalar.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        let (_, ints) = self.clear_denominators();
        zprimitive(ints)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::exact::rational_to_f64).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})T")?,
                _ => write!(f, "({a})T^{i}")?,
            }
        }
        Ok(())
    }
}

/// In-place `c(T) <- c(T + a)` on integer coefficients.
pub fn taylor_shift_int(c: &mut [BigInt], a: &BigInt) {
    let n = c.len();
    if n < 2 || a.is_zero() {
        return;
    }
    let unit = a.abs().is_one();
    let neg = a.is_negative();
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let (lo, hi) = c.split_at_mut(j + 1);
            if unit {
                if neg {
                    lo[j] -= &hi[0];
                } else {
                    lo[j] += &hi[0];
                }
            } else {
                lo[j] += a * &hi[0];
            }
        }
    }
}

/// Primitive part with positive leading coefficient; trailing zeros dropped.
pub fn zprimitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.is_empty() {
        return c;
    }
    let g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if c.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    c.iter().map(|x| x / &g).collect()
}

/// Exact division in `Z[T]`; `None` when `b` does not divide `a`.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len().checked_sub(1)?;
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() <= db {
        return None;
    }
    let lead = &b[db];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let (q, r) = rem[i + db].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &q * bj;
            }
        }
        quot[i] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

fn reduce_mod(c: &[BigInt], q: u64) -> FpPoly {
    let qb = BigInt::from(q);
    FpPoly::new(q, c.iter().map(|x| x.mod_floor(&qb).to_u64().unwrap()).collect())
}

/// Primitive gcd of two integer polynomials (positive leading coefficient),
/// by the small-primes modular algorithm with trial-division verification.
pub fn zgcd(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let f = zprimitive(f.to_vec());
    let g = zprimitive(g.to_vec());
    if f.is_empty() {
        return g;
    }
    if g.is_empty() {
        return f;
    }
    if f.len() == 1 || g.len() == 1 {
        return vec![BigInt::one()];
    }
    let lcg = f.last().unwrap().gcd(g.last().unwrap());
    let mut best_deg = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut q: u64 = (1 << 31) - 1;
    loop {
        while !is_prime(q) {
            q -= 2;
        }
        let cur = q;
        q -= 2;
        let qb = BigInt::from(cur);
        if (f.last().unwrap() % &qb).is_zero() || (g.last().unwrap() % &qb).is_zero() {
            continue;
        }
        let h = reduce_mod(&f, cur).gcd(&reduce_mod(&g, cur));
        let dh = h.degree().unwrap_or(0);
        if dh == 0 {
            return vec![BigInt::one()];
        }
        if dh > best_deg {
            continue;
        }
        let scale = lcg.mod_floor(&qb).to_u64().unwrap();
        let h = h.scale(scale);
        if dh < best_deg {
            best_deg = dh;
            acc = h.coeffs().iter().map(|&x| BigInt::from(x)).collect();
            acc.resize(dh + 1, BigInt::zero());
            modulus = qb;
        } else {
            // CRT: x = acc mod M, x = h mod q
            let inv = crate::exact::inv_mod((&modulus % &qb).to_u64().unwrap(), cur);
            for (i, a) in acc.iter_mut().enumerate() {
                let hi = BigInt::from(h.coeff(i));
                let diff = (hi - &*a).mod_floor(&qb);
                let t = (diff * BigInt::from(inv)).mod_floor(&qb);
                *a += &modulus * t;
            }
            modulus *= qb;
        }
        let half = &modulus >> 1;
        let cand: Vec<BigInt> = acc
            .iter()
            .map(|a| if a > &half { a - &modulus } else { a.clone() })
            .collect();
        let cand = zprimitive(cand);
        if zdiv_exact(&f, &cand).is_some() && zdiv_exact(&g, &cand).is_some() {
            return cand;
        }
    }
}

/// Resultant over `F_q` by the Euclidean recurrence
/// `res(a, b) = (-1)^(deg a deg b) lc(b)^(deg a - deg r) res(b, r)`.
fn resultant_mod(a: &FpPoly, b: &FpPoly) -> u64 {
    let q = a.modulus();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = 1u64;
    loop {
        let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
            return 0;
        };
        if n == 0 {
            return mul_mod(acc, pow_mod(b.leading(), m as u64, q), q);
        }
        let r = a.rem(&b);
        let Some(k) = r.degree() else {
            return 0;
        };
        if (m * n) % 2 == 1 {
            acc = (q - acc) % q;
        }
        acc = mul_mod(acc, pow_mod(b.leading(), (m - k) as u64, q), q);
        a = b;
        b = r;
    }
}

/// Resultant of two nonzero integer polynomials, by CRT over word-size
/// primes up to the Hadamard bound.
pub fn zresultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    let norm_bits = |c: &[BigInt]| {
        let max = c.iter().map(|x| x.bits()).max().unwrap_or(0) as f64;
        max + 0.5 * ((c.len() as f64).log2()) + 1.0
    };
    let bound_bits = n as f64 * norm_bits(&a) + m as f64 * norm_bits(&b) + 2.0;
    let lead = a[m].clone() * &b[n];
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    let mut q: u64 = (1 << 31) - 1;
    while (modulus.bits() as f64) < bound_bits {
        while !is_prime(q) {
            q -= 2;
        }
        let cur = q;
        q -= 2;
        let qb = BigInt::from(cur);
        if (&lead % &qb).is_zero() {
            continue;
        }
        let r = resultant_mod(&reduce_mod(&a, cur), &reduce_mod(&b, cur));
        let inv = crate::exact::inv_mod((&modulus % &qb).to_u64().unwrap(), cur);
        let diff = (BigInt::from(r) - &acc).mod_floor(&qb);
        acc += &modulus * (diff * BigInt::from(inv)).mod_floor(&qb);
        modulus *= qb;
    }
    let half = &modulus >> 1;
    if acc > half {
        acc - modulus
    } else {
        acc
    }
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// Squarefree decomposition over `Q` (Yun): primitive integer polynomials
/// `s_i` with multiplicities `i`, such that `f = c * prod s_i^i`.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(Vec<BigInt>, usize)> {
    let mut out = Vec::new();
    let Some(d) = f.degree() else {
        return out;
    };
    if d == 0 {
        return out;
    }
    let fz = f.primitive_part();
    let df = QPoly::from_bigints(&fz).derivative().primitive_part();
    let a0 = zgcd(&fz, &df);
    if a0.len() == 1 {
        out.push((fz, 1));
        return out;
    }
    let fq = QPoly::from_bigints(&fz);
    let a0q = QPoly::from_bigints(&a0);
    let mut b = fq.div_rem(&a0q).0;
    let c = fq.derivative().div_rem(&a0q).0;
    let mut dpoly = c.sub(&b.derivative());
    let mut i = 1usize;
    while b.degree().unwrap_or(0) > 0 {
        let a = zgcd(&b.primitive_part(), &dpoly.primitive_part());
        let aq = QPoly::from_bigints(&a);
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        let nb = b.div_rem(&aq).0;
        let c = dpoly.div_rem(&aq).0;
        dpoly = c.sub(&nb.derivative());
        b = nb;
        i += 1;
    }
    out
}
