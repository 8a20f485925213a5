//! Type-II points, disks, and the counting and norm operations built on
//! shifted Newton polygons.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{val_p, val_p_i64, ExtRational, PadicAbs, Prime, Rational};
use crate::padic::newton::{polygon_from_points, valuation_points};
use crate::poly::QPoly;

/// The point `xi(c, r)` with `r = p^(-radius_exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BerkovichPoint {
    pub center: Rational,
    pub radius_exponent: Rational,
}

impl BerkovichPoint {
    pub fn new(center: Rational, radius_exponent: Rational) -> Self {
        BerkovichPoint { center, radius_exponent }
    }

    /// Gauss point of `E(0, p^(-v))`.
    pub fn gauss(radius_exponent: Rational) -> Self {
        BerkovichPoint { center: Rational::zero(), radius_exponent }
    }
}

impl fmt::Display for BerkovichPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi({}, p^-({}))", self.center, self.radius_exponent)
    }
}

/// `E(c, r)` is `{v(z - c) >= radius_exponent}`, `D(c, r)` the strict version.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub center: Rational,
    pub radius_exponent: Rational,
    pub closed: bool,
}

impl Disk {
    pub fn closed(center: Rational, radius_exponent: Rational) -> Self {
        Disk { center, radius_exponent, closed: true }
    }

    pub fn open(center: Rational, radius_exponent: Rational) -> Self {
        Disk { center, radius_exponent, closed: false }
    }

    pub fn contains_valuation(&self, v: &ExtRational) -> bool {
        match v {
            ExtRational::Infinity => true,
            ExtRational::Finite(v) => {
                if self.closed {
                    v >= &self.radius_exponent
                } else {
                    v > &self.radius_exponent
                }
            }
        }
    }

    /// Whether the rational point `z` lies in the disk.
    pub fn contains_point(&self, z: &Rational, p: Prime) -> bool {
        self.contains_valuation(&val_p(&(z - &self.center), p))
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.closed { "E" } else { "D" };
        write!(f, "{kind}({},p^-({}))", self.center, self.radius_exponent)
    }
}

/// `min_j v(g_j) + j * rho` for `g = f(T + c)`; `+inf` only for `f = 0`.
fn shifted_gauss_valuation(f: &QPoly, pt: &BerkovichPoint, p: Prime) -> Option<Rational> {
    let g = f.taylor_shift(&pt.center);
    g.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, a)| {
            val_p_i64(a, p).map(|v| Rational::from_integer(BigInt::from(v)) + &pt.radius_exponent * BigInt::from(j))
        })
        .min()
}

/// `|f|(xi(c, r)) = max_j |g_j| r^j` with `g = f(T + c)`, in exponent form.
pub fn gauss_seminorm(f: &QPoly, pt: &BerkovichPoint, p: Prime) -> PadicAbs {
    match shifted_gauss_valuation(f, pt, p) {
        None => PadicAbs::Zero,
        Some(v) => PadicAbs::pow(p, -v),
    }
}

/// `log_p |T|(xi)`: `max(-v(c), -rho)`.
pub fn log_abs_t(pt: &BerkovichPoint, p: Prime) -> Rational {
    let r = -pt.radius_exponent.clone();
    match val_p(&pt.center, p) {
        ExtRational::Infinity => r,
        ExtRational::Finite(vc) => r.max(-vc),
    }
}

/// Green function of `E(0, R)` at `xi`, in units of `log p`:
/// `max(log_p |T|(xi) + v_R, 0)`.
pub fn green_disk(pt: &BerkovichPoint, r_exponent: &Rational, p: Prime) -> Rational {
    (log_abs_t(pt, p) + r_exponent).max(Rational::zero())
}

/// Roots (with multiplicity, in an algebraic closure) lying in `d`.
pub fn root_count_in_disk(f: &QPoly, p: Prime, d: &Disk) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::validation("root count of the zero polynomial"));
    }
    let g = f.taylor_shift(&d.center);
    let pts = valuation_points(&g, p);
    let np = polygon_from_points(&pts, p);
    let mut count = np.origin_order;
    for s in &np.segments {
        if d.contains_valuation(&ExtRational::Finite(s.root_valuation())) {
            count += s.h_length;
        }
    }
    Ok(count)
}

/// Largest index minimising `v(a_j) + j v`, i.e. the degree of the reduction
/// of the Gauss-normalised `f(p^v T)`.
pub fn reduction_degree(f: &QPoly, p: Prime, v: i64) -> Result<usize> {
    let mut best: Option<(i64, usize)> = None;
    for (j, a) in f.coeffs().iter().enumerate() {
        if let Some(va) = val_p_i64(a, p) {
            let w = va + v * j as i64;
            if best.map_or(true, |(bw, _)| w <= bw) {
                best = Some((w, j));
            }
        }
    }
    best.map(|(_, j)| j).ok_or_else(|| Error::validation("reduction degree of the zero polynomial"))
}

/// One sample of the exact Bernstein-Walsh comparison, all in `log_p` units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinWalshSample {
    pub point: BerkovichPoint,
    /// `log_p |f|(xi)`
    pub lhs: Rational,
    /// `log_p ||f||_{xi(0,R)} + deg f * G(xi)`
    pub rhs: Rational,
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinWalshReport {
    pub norm_exponent: Rational,
    pub degree: usize,
    pub samples: Vec<BernsteinWalshSample>,
}

impl BernsteinWalshReport {
    pub fn tight_count(&self) -> usize {
        self.samples.iter().filter(|s| s.slack.is_zero()).count()
    }
}

/// Checks `|f|(xi) <= ||f||_{xi(0,R)} p^(deg f * G(xi))` exactly at every
/// sample. A violation is an invariant error.
pub fn bernstein_walsh_check(
    f: &QPoly,
    p: Prime,
    r_exponent: &Rational,
    samples: &[BerkovichPoint],
) -> Result<BernsteinWalshReport> {
    let degree = f
        .degree()
        .ok_or_else(|| Error::validation("Bernstein-Walsh check of the zero polynomial"))?;
    let norm = -shifted_gauss_valuation(f, &BerkovichPoint::gauss(r_exponent.clone()), p)
        .expect("nonzero polynomial has finite Gauss valuation");
    let k = Rational::from_integer(BigInt::from(degree));
    let mut out = Vec::with_capacity(samples.len());
    for pt in samples {
        let lhs = -shifted_gauss_valuation(f, pt, p).expect("nonzero");
        let rhs = &norm + &k * green_disk(pt, r_exponent, p);
        let slack = &rhs - &lhs;
        if slack.is_negative() {
            return Err(Error::invariant(format!(
                "Bernstein-Walsh violated at {pt}: log|f| = {lhs} > {rhs}"
            )));
        }
        out.push(BernsteinWalshSample { point: pt.clone(), lhs, rhs, slack });
    }
    Ok(BernsteinWalshReport { norm_exponent: norm, degree, samples: out })
}
