//! Factor-degree certificates over `Q_p` from Newton polygons and residual
//! polynomials, `Q_p`-rational root counts, and sequence statistics.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{reduce_mod_p, val_int, val_p_i64, Prime, Rational};
use crate::fp::FpPoly;
use crate::padic::newton::{newton_polygon, NewtonPolygon, Segment};
use crate::poly::{squarefree_decomposition, taylor_shift_int, zprimitive, zresultant, QPoly};
use crate::series::SeriesSpec;

/// Slope data of one polygon edge. The slope is `-h/e` in lowest terms and
/// every `Q_p`-irreducible factor attached to the edge has degree divisible
/// by `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactor {
    pub slope: Rational,
    pub h_length: usize,
    pub ram_index: usize,
    pub start: (usize, i64),
    pub residual: Option<FpPoly>,
}

impl SlopeFactor {
    pub fn residual_degree(&self) -> usize {
        self.h_length / self.ram_index
    }
}

pub fn slope_decomposition(np: &NewtonPolygon) -> Vec<SlopeFactor> {
    np.segments
        .iter()
        .map(|s| SlopeFactor {
            slope: s.slope.clone(),
            h_length: s.h_length,
            ram_index: s.ram_index,
            start: s.start,
            residual: None,
        })
        .collect()
}

/// `R(y) = sum_t red(a_{i0 + t e} p^-(u0 - t h)) y^t` along the edge.
pub fn residual_polynomial(f: &QPoly, p: Prime, seg: &SlopeFactor) -> Result<FpPoly> {
    let e = seg.ram_index;
    if e == 0 || seg.h_length % e != 0 || seg.slope.denom().to_usize() != Some(e) {
        return Err(Error::validation("malformed segment"));
    }
    let m = seg.h_length / e;
    let num = seg.slope.numer().to_i64().ok_or_else(|| Error::validation("slope out of range"))?;
    let (i0, u0) = seg.start;
    let mut coeffs = Vec::with_capacity(m + 1);
    for t in 0..=m {
        let a = f.coeff(i0 + t * e);
        let line = u0 + t as i64 * num;
        let c = match val_p_i64(&a, p) {
            None => 0,
            Some(v) if v < line => {
                return Err(Error::validation(format!("coefficient {} lies below the segment", i0 + t * e)))
            }
            Some(v) if v > line => 0,
            Some(_) => reduce_mod_p(&(a * crate::exact::p_power(p, -line)), p)?,
        };
        coeffs.push(c);
    }
    let r = FpPoly::new(p.get(), coeffs);
    if r.degree() != Some(m) || r.coeff(0) == 0 {
        return Err(Error::validation("segment endpoints are not hull vertices"));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentStatus {
    /// Separable residual: these are the degrees of the irreducible factors.
    Exact(Vec<usize>),
    /// Only `e | deg` is known for every factor on this edge.
    DivisibilityOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentCertificate {
    pub slope: Rational,
    pub ram_index: usize,
    pub h_length: usize,
    pub residual: FpPoly,
    pub status: SegmentStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCertificate {
    pub prime: Prime,
    pub degree: usize,
    /// Roots at 0; each is a certified factor `T` of degree 1.
    pub ord: usize,
    pub segments: Vec<SegmentCertificate>,
    pub seed: u64,
}

impl FactorCertificate {
    /// Certified degrees with counts, including the factors `T`.
    pub fn exact_degrees(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        if self.ord > 0 {
            *out.entry(1).or_insert(0) += self.ord;
        }
        for s in &self.segments {
            if let SegmentStatus::Exact(ds) = &s.status {
                for &d in ds {
                    *out.entry(d).or_insert(0) += 1;
                }
            }
        }
        out
    }

    /// `(e, total degree)` of each divisibility-only edge.
    pub fn constraints(&self) -> Vec<(usize, usize)> {
        self.segments
            .iter()
            .filter(|s| s.status == SegmentStatus::DivisibilityOnly)
            .map(|s| (s.ram_index, s.h_length))
            .collect()
    }

    pub fn is_fully_exact(&self) -> bool {
        self.constraints().is_empty()
    }

    /// Largest certified lower bound on the degree of some irreducible factor.
    pub fn max_degree_lower_bound(&self) -> usize {
        let mut best = if self.ord > 0 { 1 } else { 0 };
        for s in &self.segments {
            let b = match &s.status {
                SegmentStatus::Exact(ds) => ds.iter().copied().max().unwrap_or(0),
                SegmentStatus::DivisibilityOnly => s.ram_index,
            };
            best = best.max(b);
        }
        best
    }
}

/// Exact factor degrees on every edge with a separable residual, and the
/// divisibility constraint `e | deg` elsewhere.
pub fn certified_factor_degrees(f: &QPoly, p: Prime, seed: u64) -> Result<FactorCertificate> {
    let np = newton_polygon(f, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut segments = Vec::with_capacity(np.segments.len());
    for sf in slope_decomposition(&np) {
        let residual = residual_polynomial(f, p, &sf)?;
        let status = if residual.is_separable() {
            let mut ds: Vec<usize> = residual
                .factor(&mut rng)
                .into_iter()
                .map(|(g, _)| sf.ram_index * g.degree().unwrap_or(0))
                .collect();
            ds.sort_unstable();
            SegmentStatus::Exact(ds)
        } else {
            SegmentStatus::DivisibilityOnly
        };
        segments.push(SegmentCertificate {
            slope: sf.slope,
            ram_index: sf.ram_index,
            h_length: sf.h_length,
            residual,
            status,
        });
    }
    Ok(FactorCertificate { prime: p, degree: np.degree, ord: np.origin_order, segments, seed })
}

/// Bounds `(lower, upper)` on the number of irreducible factors of degree
/// at most `d`.
pub fn count_factors_leq(cert: &FactorCertificate, d: usize) -> (usize, usize) {
    let lower: usize = cert.exact_degrees().iter().filter(|(&k, _)| k <= d).map(|(_, c)| c).sum();
    let extra: usize = cert.constraints().iter().filter(|(e, _)| *e <= d).map(|(e, total)| total / e).sum();
    (lower, lower + extra)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certainty {
    Certified,
    Undecided,
}

impl Certainty {
    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::Certified => "certified",
            Certainty::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QpRootCount {
    pub count: usize,
    pub certainty: Certainty,
}

pub const MAX_HENSEL_DEPTH: usize = 40;

struct HenselCtx<'a> {
    p: Prime,
    top: &'a [BigInt],
    depth_bound: Option<usize>,
    undecided: bool,
    rng: ChaCha8Rng,
}

impl HenselCtx<'_> {
    /// `min(40, 2 (1 + v_p(disc)))`, computed on first use.
    fn bound(&mut self) -> usize {
        if let Some(b) = self.depth_bound {
            return b;
        }
        let deriv: Vec<BigInt> =
            self.top.iter().enumerate().skip(1).map(|(j, c)| c * BigInt::from(j)).collect();
        let res = zresultant(self.top, &deriv);
        let b = match val_int(&res, self.p) {
            None => MAX_HENSEL_DEPTH,
            Some(v) => {
                let vl = val_int(self.top.last().unwrap(), self.p).unwrap_or(0);
                let disc = v.saturating_sub(vl) as usize;
                (2 * (1 + disc)).min(MAX_HENSEL_DEPTH)
            }
        };
        self.depth_bound = Some(b);
        b
    }
}

fn reduce(c: &[BigInt], p: Prime) -> FpPoly {
    let pb = p.as_bigint();
    FpPoly::new(p.get(), c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Roots in `Z_p` (units only when `units_only`) of a primitive integer
/// polynomial, counting each root once.
fn zp_roots(h: &[BigInt], units_only: bool, depth: usize, ctx: &mut HenselCtx) -> usize {
    let hbar = reduce(h, ctx.p);
    if hbar.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut count = 0;
    for (r, mult) in hbar.roots(&mut ctx.rng) {
        if units_only && r == 0 {
            continue;
        }
        if mult == 1 {
            count += 1;
            continue;
        }
        if depth + 1 > ctx.bound() {
            ctx.undecided = true;
            continue;
        }
        let mut g = h.to_vec();
        taylor_shift_int(&mut g, &BigInt::from(r));
        let pb = ctx.p.as_bigint();
        let mut pj = BigInt::one();
        for c in g.iter_mut() {
            *c *= &pj;
            pj *= &pb;
        }
        count += zp_roots(&zprimitive(g), false, depth + 1, ctx);
    }
    count
}

/// `s(p^l U)` made primitive over `Z`.
fn substitute(s: &[BigInt], p: Prime, l: i64) -> Vec<BigInt> {
    let n = s.len() as i64 - 1;
    // multiply through by p^(n * max(-l, 0)) to stay integral
    let shift = if l < 0 { -l * n } else { 0 };
    let pb = p.as_bigint();
    let out: Vec<BigInt> = s
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let e = (l * j as i64 + shift) as u32;
            c * num_traits::pow(pb.clone(), e as usize)
        })
        .collect();
    zprimitive(out)
}

/// Number of roots in `Q_p`, with multiplicity. Roots of valuation `l`
/// exist only on edges of integral slope `-l`; on each such edge the
/// substitution `T = p^l U` turns them into unit roots, which are counted
/// by reduction and Hensel lifting, branching on multiple residual roots.
pub fn qp_root_count(f: &QPoly, p: Prime) -> Result<QpRootCount> {
    let np = newton_polygon(f, p)?;
    let ord = np.origin_order;
    if !np.segments.iter().any(|s| s.slope.is_integer()) {
        return Ok(QpRootCount { count: ord, certainty: Certainty::Certified });
    }
    let stripped = QPoly::new(f.coeffs()[ord..].to_vec());
    let mut count = ord;
    let mut undecided = false;
    for (s, mult) in squarefree_decomposition(&stripped) {
        let sq = QPoly::from_bigints(&s);
        let snp = newton_polygon(&sq, p)?;
        for seg in snp.segments.iter().filter(|s: &&Segment| s.slope.is_integer()) {
            let l: i64 = seg.root_valuation().to_integer().to_i64().expect("valuation fits i64");
            let h = substitute(&s, p, l);
            let mut ctx = HenselCtx {
                p,
                top: &h,
                depth_bound: None,
                undecided: false,
                rng: ChaCha8Rng::seed_from_u64(0),
            };
            count += mult * zp_roots(&h, true, 0, &mut ctx);
            undecided |= ctx.undecided;
        }
    }
    let certainty = if undecided { Certainty::Undecided } else { Certainty::Certified };
    Ok(QpRootCount { count, certainty })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceRow {
    pub n: usize,
    pub degree: usize,
    pub qp_roots: QpRootCount,
    pub leq_d_lower: usize,
    pub leq_d_upper: usize,
    pub ratio_upper_over_n: f64,
    pub max_degree_lower_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceStats {
    pub series: String,
    pub prime: Prime,
    pub d: usize,
    pub rows: Vec<SequenceRow>,
}

pub const SEQUENCE_CSV_HEADER: [&str; 8] = [
    "n",
    "deg",
    "qp_roots",
    "qp_certainty",
    "leq_d_lower",
    "leq_d_upper",
    "ratio_upper_over_n",
    "max_degree_lower_bound",
];

impl SequenceStats {
    pub fn csv_records(&self) -> Vec<[String; 8]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.degree.to_string(),
                    r.qp_roots.count.to_string(),
                    r.qp_roots.certainty.as_str().to_string(),
                    r.leq_d_lower.to_string(),
                    r.leq_d_upper.to_string(),
                    format!("{:.6}", r.ratio_upper_over_n),
                    r.max_degree_lower_bound.to_string(),
                ]
            })
            .collect()
    }
}

fn sequence_row(f: &QPoly, n: usize, p: Prime, d: usize, seed: u64) -> Result<SequenceRow> {
    let degree = f.degree().ok_or_else(|| Error::validation(format!("truncation {n} is zero")))?;
    let cert = certified_factor_degrees(f, p, seed)?;
    let (lower, upper) = count_factors_leq(&cert, d);
    let qp = qp_root_count(f, p)?;
    let (_, linear_upper) = count_factors_leq(&cert, 1);
    if qp.certainty == Certainty::Certified && qp.count > linear_upper {
        return Err(Error::invariant(format!(
            "n = {n}: {} roots in Q_p but at most {linear_upper} linear factors",
            qp.count
        )));
    }
    Ok(SequenceRow {
        n,
        degree,
        qp_roots: qp,
        leq_d_lower: lower,
        leq_d_upper: upper,
        ratio_upper_over_n: if n == 0 { 0.0 } else { upper as f64 / n as f64 },
        max_degree_lower_bound: cert.max_degree_lower_bound(),
    })
}

/// One row per selected `n`, computed in parallel and returned in the
/// order of `ns`.
pub fn sequence_stats(spec: &SeriesSpec, p: Prime, ns: &[usize], d: usize, seed: u64) -> Result<SequenceStats> {
    if d == 0 {
        return Err(Error::validation("degree cutoff d must be positive"));
    }
    let rows = ns
        .par_iter()
        .map(|&n| sequence_row(&spec.truncate(n).poly, n, p, d, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceStats { series: spec.name().to_string(), prime: p, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, p_power, ratio};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn cert(f: &QPoly, q: u64) -> FactorCertificate {
        certified_factor_degrees(f, p(q), 7).unwrap()
    }

    fn degrees(c: &FactorCertificate) -> Vec<(usize, usize)> {
        c.exact_degrees().into_iter().collect()
    }

    #[test]
    fn slope_examples() {
        let f = QPoly::from_ints(&[-3, 0, 1]);
        let sd = slope_decomposition(&newton_polygon(&f, p(3)).unwrap());
        assert_eq!(sd.len(), 1);
        assert_eq!((sd[0].slope.clone(), sd[0].h_length, sd[0].ram_index), (ratio(-1, 2), 2, 2));

        for q in [2u64, 3, 5, 7] {
            let f = SeriesSpec::exp().truncate(q as usize).poly;
            let sd = slope_decomposition(&newton_polygon(&f, p(q)).unwrap());
            assert_eq!(sd.len(), 1);
            assert_eq!(sd[0].slope, ratio(-1, q as i64));
            assert_eq!((sd[0].h_length, sd[0].ram_index), (q as usize, q as usize));
        }

        let f = QPoly::from_ints(&[-5, 0, 1]).mul(&QPoly::from_ints(&[-1, 1]));
        let sd = slope_decomposition(&newton_polygon(&f, p(5)).unwrap());
        let got: Vec<_> = sd.iter().map(|s| (s.slope.clone(), s.h_length, s.ram_index)).collect();
        assert_eq!(got, vec![(ratio(-1, 2), 2, 2), (int(0), 1, 1)]);
    }

    #[test]
    fn residual_examples() {
        let f = QPoly::from_ints(&[-9, 0, 1]);
        let sd = slope_decomposition(&newton_polygon(&f, p(3)).unwrap());
        assert_eq!(residual_polynomial(&f, p(3), &sd[0]).unwrap(), FpPoly::new(3, vec![2, 0, 1]));

        let f = QPoly::from_ints(&[-3, 0, 1]);
        let sd = slope_decomposition(&newton_polygon(&f, p(3)).unwrap());
        assert_eq!(residual_polynomial(&f, p(3), &sd[0]).unwrap(), FpPoly::new(3, vec![2, 1]));

        let f = SeriesSpec::exp().truncate(2).poly;
        let sd = slope_decomposition(&newton_polygon(&f, p(2)).unwrap());
        assert_eq!(residual_polynomial(&f, p(2), &sd[0]).unwrap(), FpPoly::new(2, vec![1, 1]));

        let mut bad = sd[0].clone();
        bad.ram_index = 3;
        assert!(residual_polynomial(&f, p(2), &bad).is_err());
    }

    #[test]
    fn certificate_examples() {
        for q in [2u64, 3, 5, 7] {
            let qq = q as i64;
            let c = cert(&QPoly::from_ints(&[-qq, 0, 1]), q);
            assert_eq!(degrees(&c), vec![(2, 1)]);
            assert!(c.is_fully_exact());

            let c = cert(&SeriesSpec::exp().truncate(q as usize).poly, q);
            assert_eq!(degrees(&c), vec![(q as usize, 1)]);
        }
        let c = cert(&QPoly::from_ints(&[-9, 0, 1]), 3);
        assert_eq!(degrees(&c), vec![(1, 2)]);
    }

    #[test]
    fn exp_truncations_are_single_edges() {
        // n = 4 over Q_2 and n = 9 over Q_3: one edge, hence irreducible
        let c = cert(&SeriesSpec::exp().truncate(4).poly, 2);
        assert_eq!(c.segments.len(), 1);
        assert_eq!(c.segments[0].slope, ratio(-3, 4));
        assert_eq!(degrees(&c), vec![(4, 1)]);
        let c = cert(&SeriesSpec::exp().truncate(9).poly, 3);
        assert_eq!(c.segments.len(), 1);
        assert_eq!(c.segments[0].slope, ratio(-4, 9));
        assert_eq!(degrees(&c), vec![(9, 1)]);
    }

    #[test]
    fn count_examples() {
        let c = cert(&QPoly::from_ints(&[-3, 0, 1]), 3);
        assert_eq!(count_factors_leq(&c, 1), (0, 0));
        let c = cert(&QPoly::from_ints(&[-9, 0, 1]), 3);
        assert_eq!(count_factors_leq(&c, 1), (2, 2));
        let f = QPoly::from_ints(&[-5, 0, 1]).mul(&QPoly::from_ints(&[-1, 1]));
        assert_eq!(count_factors_leq(&cert(&f, 5), 1), (1, 1));
        // (T - 1)^2 (T - 2) over Q_5: slope-0 edge of length 3, residual
        // (y - 1)^2 (y - 2) is not separable
        let f = QPoly::from_ints(&[-1, 1]).mul(&QPoly::from_ints(&[-1, 1])).mul(&QPoly::from_ints(&[-2, 1]));
        let c = cert(&f, 5);
        assert_eq!(c.constraints(), vec![(1, 3)]);
        assert_eq!(count_factors_leq(&c, 1), (0, 3));
    }

    #[test]
    fn qp_root_examples() {
        let r = |c: &[i64], q: u64| qp_root_count(&QPoly::from_ints(c), p(q)).unwrap();
        assert_eq!(r(&[-1, 0, 1], 5), QpRootCount { count: 2, certainty: Certainty::Certified });
        assert_eq!(r(&[1, 0, 1], 5), QpRootCount { count: 2, certainty: Certainty::Certified });
        assert_eq!(r(&[-2, 0, 1], 2), QpRootCount { count: 0, certainty: Certainty::Certified });
        assert_eq!(r(&[1, 0, 1], 3).count, 0);
        // (T - 1)^2 (T + 7) (T^2 - 17) over Q_2: 1, -7 and the two roots of 17
        let f = QPoly::from_ints(&[-1, 1])
            .mul(&QPoly::from_ints(&[-1, 1]))
            .mul(&QPoly::from_ints(&[7, 1]))
            .mul(&QPoly::from_ints(&[-17, 0, 1]));
        assert_eq!(qp_root_count(&f, p(2)).unwrap(), QpRootCount { count: 5, certainty: Certainty::Certified });
        // T^2 (T^2 - 2): zero roots count, sqrt 2 does not
        let f = QPoly::from_ints(&[0, 0, -2, 0, 1]);
        assert_eq!(qp_root_count(&f, p(2)).unwrap().count, 2);
        // T^2 - 1/9 over Q_3: roots of valuation -1
        let f = QPoly::new(vec![ratio(-1, 9), int(0), int(1)]);
        assert_eq!(qp_root_count(&f, p(3)).unwrap().count, 2);
    }

    /// Roots of the geometric truncation are the `(n+1)`-th roots of unity
    /// other than 1, and the roots of unity in `Q_3` are `+-1`.
    fn geometric_q3_roots(n: usize) -> usize {
        if (n + 1) % 2 == 0 {
            1
        } else {
            0
        }
    }

    #[test]
    fn geometric_over_q3() {
        for n in 1..=60 {
            let f = SeriesSpec::geometric().truncate(n).poly;
            let r = qp_root_count(&f, p(3)).unwrap();
            assert_eq!(r.count, geometric_q3_roots(n), "n = {n}");
            assert_eq!(r.certainty, Certainty::Certified, "n = {n}");
        }
    }

    #[derive(Clone, Debug)]
    enum Piece {
        Linear(i64, i64),      // T - u p^e
        Eisenstein(usize, i64), // T^k - p u
    }

    fn build(pieces: &[Piece], q: u64) -> QPoly {
        let pr = p(q);
        pieces.iter().fold(QPoly::one(), |acc, pc| match pc {
            Piece::Linear(u, e) => acc.mul(&QPoly::linear(p_power(pr, *e) * int(*u))),
            Piece::Eisenstein(k, u) => {
                let mut c = vec![int(0); k + 1];
                c[0] = -int(q as i64 * u);
                c[*k] = int(1);
                acc.mul(&QPoly::new(c))
            }
        })
    }

    fn unit(q: u64) -> impl Strategy<Value = i64> {
        (1i64..40).prop_map(move |u| if u as u64 % q == 0 { u + 1 } else { u })
    }

    /// Products with pairwise distinct slopes: linear factors at distinct
    /// integral valuations, Eisenstein factors of distinct degrees >= 2.
    fn product_strategy() -> impl Strategy<Value = (u64, Vec<Piece>)> {
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_flat_map(|q| {
            let lin = proptest::collection::btree_set(-3i64..=3, 0..=3)
                .prop_flat_map(move |es| {
                    let es: Vec<i64> = es.into_iter().collect();
                    let k = es.len();
                    (Just(es), proptest::collection::vec(unit(q), k))
                })
                .prop_map(|(es, us)| es.into_iter().zip(us).map(|(e, u)| Piece::Linear(u, e)).collect::<Vec<_>>());
            let eis = proptest::collection::btree_set(2usize..=5, 0..=2)
                .prop_flat_map(move |ks| {
                    let ks: Vec<usize> = ks.into_iter().collect();
                    let k = ks.len();
                    (Just(ks), proptest::collection::vec(unit(q), k))
                })
                .prop_map(|(ks, us)| ks.into_iter().zip(us).map(|(k, u)| Piece::Eisenstein(k, u)).collect::<Vec<_>>());
            (Just(q), lin, eis).prop_map(|(q, mut a, b)| {
                a.extend(b);
                a.truncate(4);
                if a.is_empty() {
                    a.push(Piece::Linear(1, 0));
                }
                (q, a)
            })
        })
    }

    fn true_degrees(pieces: &[Piece]) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for pc in pieces {
            let d = match pc {
                Piece::Linear(..) => 1,
                Piece::Eisenstein(k, _) => *k,
            };
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Roots in `Q_p` of `prod (T - c_i) * g`: the `c_i`, plus the roots of
    /// the Eisenstein part (none unless it has degree 1).
    fn enumerate_roots(cs: &[Rational], eis_degree: usize) -> usize {
        cs.len() + usize::from(eis_degree == 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn product_recovery((q, pieces) in product_strategy(), seed in 0u64..1000) {
            let f = build(&pieces, q);
            let c = certified_factor_degrees(&f, p(q), seed).unwrap();
            prop_assert_eq!(c.exact_degrees(), true_degrees(&pieces));
            let total: usize = c.exact_degrees().iter().map(|(d, k)| d * k).sum::<usize>()
                + c.constraints().iter().map(|(_, t)| t).sum::<usize>();
            prop_assert_eq!(total, f.degree().unwrap());
            let truth = true_degrees(&pieces);
            let mut prev = (0, 0);
            for d in 1..=6 {
                let (lo, hi) = count_factors_leq(&c, d);
                let t: usize = truth.iter().filter(|(&k, _)| k <= d).map(|(_, c)| c).sum();
                prop_assert!(lo <= t && t <= hi);
                prop_assert!(lo >= prev.0 && hi >= prev.1);
                prev = (lo, hi);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(250))]

        /// Rational roots with pairwise distinct residues (after scaling to
        /// a common valuation class) times an Eisenstein polynomial.
        #[test]
        fn qp_roots_match_enumeration(
            q in prop::sample::select(vec![3u64, 5, 7, 11]),
            raw in proptest::collection::vec((0u64..100, -2i64..=2), 0..=4),
            eis_k in 1usize..=4,
            eis_u in 1i64..30,
        ) {
            let pr = p(q);
            let mut seen = std::collections::BTreeSet::new();
            let mut cs = Vec::new();
            for (r, e) in raw {
                let r = 1 + r % (q - 1);
                if seen.insert((r, e)) {
                    cs.push(p_power(pr, e) * int(r as i64));
                }
            }
            let u = if eis_u as u64 % q == 0 { eis_u + 1 } else { eis_u };
            let mut g = vec![int(0); eis_k + 1];
            g[0] = -int(q as i64 * u);
            g[eis_k] = int(1);
            let f = cs.iter().fold(QPoly::new(g), |acc, c| acc.mul(&QPoly::linear(c.clone())));
            let r = qp_root_count(&f, pr).unwrap();
            prop_assert_eq!(r.certainty, Certainty::Certified);
            prop_assert_eq!(r.count, enumerate_roots(&cs, eis_k));
        }
    }
}
