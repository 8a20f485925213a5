//! Power series catalog, truncations, Tate algebra membership and radii.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::counterexample;
use crate::error::{Error, Result};
use crate::exact::{
    digit_sum, factorial_val, int, p_power, parse_rational, val_p, ExtRational, Prime, Rational,
};
use crate::poly::QPoly;

/// `ceil(sqrt(j))`.
pub fn ceil_sqrt(j: u64) -> u64 {
    let s = j.sqrt();
    if s * s == j {
        s
    } else {
        s + 1
    }
}

/// Coefficient rule of a catalogued series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesRule {
    /// `a_j = 1/j!`
    Exp,
    /// `a_j = 1`
    Geometric,
    /// `a_j = c^j`
    ScaledGeometric { c: Rational },
    /// `a_j = p^(j + ceil(sqrt(j)))`
    SqrtGap { p: Prime },
    /// `a_j = 1` if `j` is a power of two, else 0
    Lacunary,
    /// Limit of the half-mass-at-one counterexample sequence.
    CounterexampleLimit,
    /// Finite coefficient list, zero afterwards.
    Finite { coeffs: Vec<Rational> },
}

/// A named power series given by a closed-form coefficient rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    name: String,
    rule: SeriesRule,
}

/// Limit inferior of `v_p(a_j)/j` over nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Growth {
    Finite(Rational),
    PlusInfinity,
    Unknown,
}

/// Exponent `v_R` of the radius of convergence `R = p^(-v_R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusExponent {
    Finite(Rational),
    /// `R = +inf` (entire series)
    Infinite,
    Unknown,
}

impl fmt::Display for RadiusExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusExponent::Finite(r) => write!(f, "{r}"),
            RadiusExponent::Infinite => write!(f, "-inf (R = inf)"),
            RadiusExponent::Unknown => write!(f, "unknown"),
        }
    }
}

/// Radius of convergence over `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexRadius {
    Finite(f64),
    Infinite,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TateStatus {
    Member,
    NonMember,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateVerdict {
    pub status: TateStatus,
    pub witness: String,
}

/// Degree-`n` truncation `f_n = sum_{j<=n} a_j T^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationPolynomial {
    pub poly: QPoly,
    pub n: usize,
    pub origin: String,
}

impl TruncationPolynomial {
    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// All stored coefficients `a_0..a_n`, including trailing zeros.
    pub fn coefficients(&self) -> Vec<Rational> {
        (0..=self.n).map(|j| self.poly.coeff(j)).collect()
    }
}

const SPOT_CHECK_PRIMES: [u64; 4] = [2, 3, 5, 7];
const SPOT_CHECK_TERMS: u64 = 64;

impl SeriesSpec {
    /// Builds a spec, checking the closed-form valuation rule (when one
    /// exists) against the coefficients for `j <= 64`.
    pub fn new(name: impl Into<String>, rule: SeriesRule) -> Result<Self> {
        let spec = SeriesSpec { name: name.into(), rule };
        let mut primes: Vec<Prime> =
            SPOT_CHECK_PRIMES.iter().map(|&p| Prime::new(p).unwrap()).collect();
        if let SeriesRule::SqrtGap { p } = spec.rule {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        for p in primes {
            for j in 0..=SPOT_CHECK_TERMS {
                if let Some(rule_val) = spec.valuation_rule(j, p) {
                    let actual = val_p(&spec.coefficient(j), p);
                    if actual != rule_val {
                        return Err(Error::invariant(format!(
                            "series {}: valuation rule gives {rule_val} at j={j}, p={p}, coefficient has {actual}",
                            spec.name
                        )));
                    }
                }
            }
        }
        Ok(spec)
    }

    pub fn exp() -> Self {
        SeriesSpec::new("exp", SeriesRule::Exp).unwrap()
    }

    pub fn geometric() -> Self {
        SeriesSpec::new("geometric", SeriesRule::Geometric).unwrap()
    }

    pub fn scaled_geometric(c: Rational) -> Self {
        SeriesSpec::new("scaled-geometric", SeriesRule::ScaledGeometric { c }).unwrap()
    }

    pub fn sqrt_gap(p: Prime) -> Self {
        SeriesSpec::new("sqrt-gap", SeriesRule::SqrtGap { p }).unwrap()
    }

    pub fn lacunary() -> Self {
        SeriesSpec::new("lacunary", SeriesRule::Lacunary).unwrap()
    }

    pub fn counterexample_limit() -> Self {
        SeriesSpec::new("counterexample-limit", SeriesRule::CounterexampleLimit).unwrap()
    }

    pub fn finite(name: impl Into<String>, coeffs: Vec<Rational>) -> Result<Self> {
        SeriesSpec::new(name, SeriesRule::Finite { coeffs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule(&self) -> &SeriesRule {
        &self.rule
    }

    /// `a_j`, exactly.
    pub fn coefficient(&self, j: u64) -> Rational {
        match &self.rule {
            SeriesRule::Exp => {
                let fact = (1..=j).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
                Rational::new(BigInt::one(), fact)
            }
            SeriesRule::Geometric => Rational::one(),
            SeriesRule::ScaledGeometric { c } => num_traits::pow(c.clone(), j as usize),
            SeriesRule::SqrtGap { p } => p_power(*p, (j + ceil_sqrt(j)) as i64),
            SeriesRule::Lacunary => {
                if j.is_power_of_two() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            SeriesRule::CounterexampleLimit => {
                Rational::from_integer(counterexample::limit_coefficient(j))
            }
            SeriesRule::Finite { coeffs } => {
                coeffs.get(j as usize).cloned().unwrap_or_else(Rational::zero)
            }
        }
    }

    /// Truncation in degree `n`.
    pub fn truncate(&self, n: usize) -> TruncationPolynomial {
        let coeffs: Vec<Rational> = match &self.rule {
            SeriesRule::Exp => {
                let mut out = Vec::with_capacity(n + 1);
                let mut fact = BigInt::one();
                for j in 0..=n {
                    if j > 0 {
                        fact *= BigInt::from(j);
                    }
                    out.push(Rational::new(BigInt::one(), fact.clone()));
                }
                out
            }
            SeriesRule::CounterexampleLimit => counterexample::limit_prefix(n)
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
            _ => (0..=n as u64).map(|j| self.coefficient(j)).collect(),
        };
        TruncationPolynomial { poly: QPoly::new(coeffs), n, origin: self.name.clone() }
    }

    /// Closed-form `v_p(a_j)`, when the rule has one.
    pub fn valuation_rule(&self, j: u64, p: Prime) -> Option<ExtRational> {
        match &self.rule {
            SeriesRule::Exp => Some(ExtRational::Finite(-factorial_val(j, p))),
            SeriesRule::Geometric => Some(ExtRational::from_int(0)),
            SeriesRule::ScaledGeometric { c } => {
                if j == 0 {
                    return Some(ExtRational::from_int(0));
                }
                Some(match val_p(c, p) {
                    ExtRational::Finite(v) => ExtRational::Finite(v * int(j as i64)),
                    ExtRational::Infinity => ExtRational::Infinity,
                })
            }
            SeriesRule::SqrtGap { p: q } => {
                let v = if *q == p { (j + ceil_sqrt(j)) as i64 } else { 0 };
                Some(ExtRational::from_int(v))
            }
            SeriesRule::Lacunary => Some(if j.is_power_of_two() {
                ExtRational::from_int(0)
            } else {
                ExtRational::Infinity
            }),
            SeriesRule::CounterexampleLimit => None,
            SeriesRule::Finite { coeffs } => Some(
                coeffs
                    .get(j as usize)
                    .map(|c| val_p(c, p))
                    .unwrap_or(ExtRational::Infinity),
            ),
        }
    }

    /// `liminf v_p(a_j)/j` over nonzero coefficients.
    pub fn valuation_growth(&self, p: Prime) -> Growth {
        match &self.rule {
            SeriesRule::Exp => Growth::Finite(Rational::new(
                BigInt::from(-1),
                BigInt::from(p.get() - 1),
            )),
            SeriesRule::Geometric | SeriesRule::Lacunary => Growth::Finite(Rational::zero()),
            SeriesRule::ScaledGeometric { c } => match val_p(c, p) {
                ExtRational::Finite(v) => Growth::Finite(v),
                ExtRational::Infinity => Growth::PlusInfinity,
            },
            SeriesRule::SqrtGap { p: q } => {
                Growth::Finite(if *q == p { Rational::one() } else { Rational::zero() })
            }
            // Integer coefficients (v >= 0) and a_{d_n} = 1 infinitely often.
            SeriesRule::CounterexampleLimit => Growth::Finite(Rational::zero()),
            SeriesRule::Finite { .. } => Growth::PlusInfinity,
        }
    }

    /// `v_R = -liminf v_p(a_j)/j`, so that `R = p^(-v_R)`.
    pub fn radius_exponent(&self, p: Prime) -> RadiusExponent {
        match self.valuation_growth(p) {
            Growth::Finite(g) => RadiusExponent::Finite(-g),
            Growth::PlusInfinity => RadiusExponent::Infinite,
            Growth::Unknown => RadiusExponent::Unknown,
        }
    }

    pub fn complex_radius(&self) -> ComplexRadius {
        match &self.rule {
            SeriesRule::Exp | SeriesRule::Finite { .. } => ComplexRadius::Infinite,
            SeriesRule::Geometric | SeriesRule::Lacunary => ComplexRadius::Finite(1.0),
            SeriesRule::ScaledGeometric { c } => {
                if c.is_zero() {
                    ComplexRadius::Infinite
                } else {
                    ComplexRadius::Finite(1.0 / crate::exact::rational_to_f64(&c.abs()))
                }
            }
            SeriesRule::SqrtGap { p } => ComplexRadius::Finite(1.0 / p.get() as f64),
            SeriesRule::CounterexampleLimit => ComplexRadius::Unknown,
        }
    }

    /// Membership of the series in the Tate algebra of the closed disk of
    /// radius `p^(-r_exponent)`, i.e. whether `v_p(a_j) + j r_exponent -> +inf`.
    ///
    /// Never decided from a finite prefix: the answer comes from the
    /// asymptotic growth rate, and on the critical radius from the closed
    /// form of the valuations.
    pub fn tate_membership(&self, p: Prime, r_exponent: &Rational) -> TateVerdict {
        let growth = match self.valuation_growth(p) {
            Growth::Unknown => {
                return TateVerdict {
                    status: TateStatus::Undetermined,
                    witness: "no closed-form valuation growth".into(),
                }
            }
            Growth::PlusInfinity => {
                return TateVerdict {
                    status: TateStatus::Member,
                    witness: "coefficients vanish from some index on".into(),
                }
            }
            Growth::Finite(g) => g,
        };
        let drift = &growth + r_exponent;
        if drift.is_positive() {
            return TateVerdict {
                status: TateStatus::Member,
                witness: format!("v_p(a_j) + j*({r_exponent}) grows like j*{drift}"),
            };
        }
        if drift.is_negative() {
            return TateVerdict {
                status: TateStatus::NonMember,
                witness: format!(
                    "v_p(a_j) + j*({r_exponent}) decreases like j*{drift} along a subsequence"
                ),
            };
        }
        self.critical_radius_verdict(p)
    }

    /// Behaviour exactly on the radius of convergence.
    fn critical_radius_verdict(&self, p: Prime) -> TateVerdict {
        let (status, witness) = match &self.rule {
            SeriesRule::Exp => (
                TateStatus::NonMember,
                format!(
                    "v_p(a_j) + j/(p-1) = s_p(j)/(p-1), which equals {}/(p-1) at every j = p^k",
                    digit_sum(p.get(), p)
                ),
            ),
            SeriesRule::Geometric => (TateStatus::NonMember, "|a_j| R^j = 1 for all j".into()),
            SeriesRule::ScaledGeometric { .. } => {
                (TateStatus::NonMember, "|a_j| R^j = 1 for all j".into())
            }
            SeriesRule::SqrtGap { p: q } if *q == p => (
                TateStatus::Member,
                "v_p(a_j) - j = ceil(sqrt(j)) -> +inf".into(),
            ),
            SeriesRule::SqrtGap { .. } => {
                (TateStatus::NonMember, "|a_j| R^j = 1 for all j".into())
            }
            SeriesRule::Lacunary => {
                (TateStatus::NonMember, "|a_j| R^j = 1 at every j = 2^k".into())
            }
            SeriesRule::CounterexampleLimit => (
                TateStatus::NonMember,
                "a_j = 1 at every j = d_n (monic construction)".into(),
            ),
            SeriesRule::Finite { .. } => {
                (TateStatus::Member, "coefficients vanish from some index on".into())
            }
        };
        TateVerdict { status, witness }
    }

    /// One catalog line, e.g. `exp: a_j = 1/j! ...`.
    pub fn describe(&self) -> String {
        let (formula, val, radius) = match &self.rule {
            SeriesRule::Exp => (
                "a_j = 1/j!".to_string(),
                "v_p(a_j) = -(j - s_p(j))/(p-1)".to_string(),
                "v_R = 1/(p-1) over Q_p; entire over C".to_string(),
            ),
            SeriesRule::Geometric => (
                "a_j = 1".into(),
                "v_p(a_j) = 0".into(),
                "v_R = 0 over Q_p; R = 1 over C".into(),
            ),
            SeriesRule::ScaledGeometric { c } => (
                format!("a_j = c^j (c = {c})"),
                "v_p(a_j) = j v_p(c)".into(),
                "v_R = -v_p(c) over Q_p; R = 1/|c| over C".into(),
            ),
            SeriesRule::SqrtGap { p } => (
                format!("a_j = {p}^(j + ceil(sqrt(j)))"),
                format!("v_{p}(a_j) = j + ceil(sqrt(j)); 0 at other primes"),
                format!("v_R = -1 over Q_{p} (R = {p}), in the Tate algebra of that disk; R = 1/{p} over C"),
            ),
            SeriesRule::Lacunary => (
                "a_j = 1 if j is a power of 2, else 0".into(),
                "v_p(a_j) = 0 or +inf".into(),
                "v_R = 0 over Q_p; R = 1 over C".into(),
            ),
            SeriesRule::CounterexampleLimit => (
                "limit of the monic half-mass-at-one sequence F_n (integer coefficients)".into(),
                "no closed form".into(),
                "v_R = 0 over Q_p (R = 1), not in the Tate algebra".into(),
            ),
            SeriesRule::Finite { coeffs } => (
                format!("finite list of {} coefficients", coeffs.len()),
                "v_p of the listed values".into(),
                "polynomial (R = inf)".into(),
            ),
        };
        format!("{}: {formula}; {val}; {radius}", self.name)
    }
}

/// JSON description of a series, as used in experiment configs:
/// `{"rule": "scaled-geometric", "c": "3"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDescription {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Ratio for `scaled-geometric`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// Prime for `sqrt-gap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Coefficients for `finite`, as decimal or `a/b` strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
}

pub const RULE_IDS: [&str; 7] = [
    "exp",
    "geometric",
    "scaled-geometric",
    "sqrt-gap",
    "lacunary",
    "counterexample-limit",
    "finite",
];

impl SeriesDescription {
    pub fn build(&self) -> Result<SeriesSpec> {
        let name = self.name.clone().unwrap_or_else(|| self.rule.clone());
        let rule = match self.rule.as_str() {
            "exp" => SeriesRule::Exp,
            "geometric" => SeriesRule::Geometric,
            "scaled-geometric" => {
                let c = self
                    .c
                    .as_deref()
                    .ok_or_else(|| Error::validation("scaled-geometric needs parameter \"c\""))?;
                SeriesRule::ScaledGeometric { c: parse_rational(c)? }
            }
            "sqrt-gap" => {
                let p = self
                    .p
                    .ok_or_else(|| Error::validation("sqrt-gap needs parameter \"p\""))?;
                SeriesRule::SqrtGap { p: Prime::new(p)? }
            }
            "lacunary" => SeriesRule::Lacunary,
            "counterexample-limit" => SeriesRule::CounterexampleLimit,
            "finite" => {
                let list = self.coefficients.as_ref().ok_or_else(|| {
                    Error::validation("finite needs parameter \"coefficients\"")
                })?;
                let coeffs = list.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                SeriesRule::Finite { coeffs }
            }
            other => {
                return Err(Error::validation(format!(
                    "unknown series rule {other:?}; expected one of {}",
                    RULE_IDS.join(", ")
                )))
            }
        };
        SeriesSpec::new(name, rule)
    }
}

/// Built-in series, one line each.
pub fn list_catalog() -> String {
    let p2 = Prime::new(2).unwrap();
    let specs = [
        SeriesSpec::exp(),
        SeriesSpec::geometric(),
        SeriesSpec::scaled_geometric(int(3)),
        SeriesSpec::sqrt_gap(p2),
        SeriesSpec::lacunary(),
        SeriesSpec::counterexample_limit(),
        SeriesSpec::finite("finite", vec![int(1), int(0), int(-2)]).unwrap(),
    ];
    let mut out = String::from("built-in series (rule id: coefficients; valuations; radius)\n");
    for s in &specs {
        out.push_str("  ");
        out.push_str(&s.describe());
        out.push('\n');
    }
    out.push_str(
        "parameters: scaled-geometric {\"c\": \"a/b\"}, sqrt-gap {\"p\": prime}, \
         finite {\"coefficients\": [\"a/b\", ...]}\n",
    );
    out
}

/// Float value of `|a_n|^(1/n)` over `C`, computed in log space.
pub fn complex_root_abs(a: &Rational, n: usize) -> Option<f64> {
    if n == 0 {
        return None;
    }
    crate::exact::ln_abs(a).map(|l| (l / n as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(SeriesSpec::exp().coefficient(3), ratio(1, 6));
        assert_eq!(SeriesSpec::geometric().coefficient(17), int(1));
        assert_eq!(SeriesSpec::counterexample_limit().coefficient(5), int(-4));
    }

    #[test]
    fn truncate_examples() {
        let e = SeriesSpec::exp().truncate(2);
        assert_eq!(e.poly, QPoly::new(vec![int(1), int(1), ratio(1, 2)]));
        assert_eq!(e.origin, "exp");
        assert_eq!(SeriesSpec::geometric().truncate(4).poly, QPoly::from_ints(&[1, 1, 1, 1, 1]));
        let s = SeriesSpec::scaled_geometric(int(3)).truncate(2);
        assert_eq!(s.poly, QPoly::from_ints(&[1, 3, 9]));
    }

    #[test]
    fn truncation_keeps_trailing_zero_slot() {
        let t = SeriesSpec::lacunary().truncate(3);
        assert_eq!(t.n, 3);
        assert_eq!(t.degree(), Some(2));
        assert_eq!(t.coefficients().len(), 4);
    }

    #[test]
    fn tate_examples() {
        for q in [2u64, 3, 5, 7] {
            let r = Rational::new(BigInt::from(1), BigInt::from(q - 1));
            let v = SeriesSpec::exp().tate_membership(p(q), &r);
            assert_eq!(v.status, TateStatus::NonMember, "{}", v.witness);
        }
        let v = SeriesSpec::sqrt_gap(p(3)).tate_membership(p(3), &int(-1));
        assert_eq!(v.status, TateStatus::Member);
        let v = SeriesSpec::geometric().tate_membership(p(5), &int(0));
        assert_eq!(v.status, TateStatus::NonMember);
    }

    #[test]
    fn tate_membership_is_monotone_in_radius() {
        let specs = [
            SeriesSpec::exp(),
            SeriesSpec::geometric(),
            SeriesSpec::sqrt_gap(p(2)),
            SeriesSpec::lacunary(),
            SeriesSpec::scaled_geometric(ratio(9, 2)),
            SeriesSpec::counterexample_limit(),
        ];
        let radii: Vec<Rational> = (-8..=8).map(|k| ratio(k, 4)).collect();
        for s in &specs {
            for q in [2u64, 3, 5, 7] {
                let mut seen_member = false;
                for r in &radii {
                    let st = s.tate_membership(p(q), r).status;
                    if seen_member {
                        assert_eq!(st, TateStatus::Member, "{} p={q} r={r}", s.name());
                    }
                    seen_member |= st == TateStatus::Member;
                }
            }
        }
    }

    #[test]
    fn radius_examples() {
        for q in [2u64, 3, 5, 7] {
            assert_eq!(
                SeriesSpec::exp().radius_exponent(p(q)),
                RadiusExponent::Finite(Rational::new(BigInt::from(1), BigInt::from(q - 1)))
            );
            let s = SeriesSpec::scaled_geometric(int(q as i64));
            assert_eq!(s.radius_exponent(p(q)), RadiusExponent::Finite(int(-1)));
        }
        assert_eq!(
            SeriesSpec::geometric().radius_exponent(p(5)),
            RadiusExponent::Finite(int(0))
        );
    }

    #[test]
    fn valuation_rules_hold_to_200() {
        let specs = [
            SeriesSpec::exp(),
            SeriesSpec::geometric(),
            SeriesSpec::scaled_geometric(ratio(12, 5)),
            SeriesSpec::sqrt_gap(p(3)),
            SeriesSpec::lacunary(),
        ];
        for s in &specs {
            let t = s.truncate(200);
            for q in [2u64, 3, 5, 7] {
                for j in 0..=200u64 {
                    let rule = s.valuation_rule(j, p(q)).unwrap();
                    assert_eq!(val_p(&t.poly.coeff(j as usize), p(q)), rule, "{} j={j}", s.name());
                }
            }
        }
    }

    #[test]
    fn truncations_are_nested() {
        for s in [SeriesSpec::exp(), SeriesSpec::counterexample_limit(), SeriesSpec::lacunary()] {
            let a = s.truncate(20);
            let b = s.truncate(33);
            for j in 0..=20 {
                assert_eq!(a.poly.coeff(j), b.poly.coeff(j));
            }
        }
    }

    #[test]
    fn bad_descriptions() {
        let d = SeriesDescription {
            rule: "bessel".into(),
            name: None,
            c: None,
            p: None,
            coefficients: None,
        };
        assert!(matches!(d.build(), Err(Error::Validation(_))));
        let d = SeriesDescription { rule: "sqrt-gap".into(), p: Some(4), ..d };
        assert!(matches!(d.build(), Err(Error::Validation(_))));
    }

    #[test]
    fn catalog_lists_builtins() {
        let c = list_catalog();
        assert!(c.contains("exp: a_j = 1/j!"));
        assert!(c.contains("geometric: a_j = 1"));
        assert!(c.contains("counterexample-limit"));
    }
}
