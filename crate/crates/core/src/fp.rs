//! Dense polynomials over a prime field `F_p`.
//!
//! Factorisation is the usual three-stage pipeline: squarefree
//! decomposition, distinct-degree factorisation, then seeded randomised
//! equal-degree splitting (Cantor–Zassenhaus for odd `p`, trace map for
//! `p = 2`). Results are deterministic for a given RNG state.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::exact::{inv_mod, mul_mod};

/// Polynomial over `F_p`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, k, self.p)).collect())
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p).collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.c.len() - 1;
        if self.c.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(divisor.leading(), p);
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let coef = mul_mod(rem[i + dd], inv, p);
            quot[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in divisor.c.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mul_mod(coef, b, p)) % p;
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (mul_mod(acc, x, self.p) + a) % self.p)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// True when `gcd(f, f') = 1`; constants count as separable.
    pub fn is_separable(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).is_one()
            }
        }
    }

    /// Squarefree decomposition: monic `(g_i, i)` with `f = lc · Π g_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        self.squarefree_into(1, &mut out);
        out.sort_by(|a, b| (a.1, &a.0.c).cmp(&(b.1, &b.0.c)));
        out
    }

    fn squarefree_into(&self, mult: usize, out: &mut Vec<(FpPoly, usize)>) {
        let p = self.p;
        let f = self.monic();
        let d = f.derivative();
        if d.is_zero() {
            // f = g(x^p) = g(x)^p over F_p
            let root = f.pth_root();
            root.squarefree_into(mult * p as usize, out);
            return;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_rem(&c).0;
        let mut i = 1usize;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if fac.degree().unwrap_or(0) > 0 {
                out.push((fac, i * mult));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if c.degree().unwrap_or(0) > 0 {
            c.pth_root().squarefree_into(mult * p as usize, out);
        }
    }

    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let c = self.c.iter().step_by(p).copied().collect();
        FpPoly::new(self.p, c)
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial:
    /// pairs `(d, g_d)` where `g_d` is the product of all irreducible
    /// factors of degree `d`.
    pub fn distinct_degree(&self) -> Vec<(usize, FpPoly)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = FpPoly::x(p);
        let mut h = x.rem(&f);
        let pe = BigUint::from(p);
        let mut d = 0usize;
        while let Some(deg) = f.degree() {
            if deg == 0 {
                break;
            }
            d += 1;
            if 2 * d > deg {
                out.push((deg, f.clone()));
                break;
            }
            h = h.pow_mod(&pe, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_one() {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((d, g));
            }
        }
        out
    }

    /// Splits a monic product of distinct irreducibles of common degree `d`.
    pub fn equal_degree<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<FpPoly> {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Vec::new();
        }
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        loop {
            let a = self.random_below(rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let g = self.gcd(&a);
            let candidate = if !g.is_one() {
                g
            } else if p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                self.gcd(&acc)
            } else {
                let e = (num_traits::pow(BigUint::from(p), d) - BigUint::one()) >> 1;
                let b = a.pow_mod(&e, self).sub(&FpPoly::one(p));
                self.gcd(&b)
            };
            let cd = candidate.degree().unwrap_or(0);
            if cd > 0 && cd < n {
                let other = self.div_rem(&candidate).0;
                let mut out = candidate.equal_degree(d, rng);
                out.extend(other.monic().equal_degree(d, rng));
                return out;
            }
        }
    }

    fn random_below<R: Rng>(&self, rng: &mut R) -> FpPoly {
        let n = self.degree().unwrap_or(0);
        let c = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
        FpPoly::new(self.p, c)
    }

    /// Full factorisation into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor<R: Rng>(&self, rng: &mut R) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        for (sq, mult) in self.squarefree_decomposition() {
            for (d, g) in sq.distinct_degree() {
                for irr in g.equal_degree(d, rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.c.len(), &a.0.c, a.1).cmp(&(b.0.c.len(), &b.0.c, b.1)));
        out
    }

    /// Roots in `F_p` with multiplicity, ascending.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<(u64, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out: Vec<(u64, usize)> = self
            .factor(rng)
            .into_iter()
            .filter(|(f, _)| f.degree() == Some(1))
            .map(|(f, m)| ((self.p - f.coeff(0)) % self.p, m))
            .collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "y")?,
                (1, _) => write!(f, "{a}y")?,
                (_, 1) => write!(f, "y^{i}")?,
                _ => write!(f, "{a}y^{i}")?,
            }
        }
        Ok(())
    }
}
