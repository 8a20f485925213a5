//! Newton polygons and the slope-to-valuation dictionary.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{val_p_i64, ExtRational, Prime, Rational};
use crate::poly::QPoly;

/// One edge of the lower hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: (usize, i64),
    pub end: (usize, i64),
    /// Slope in lowest terms; roots on this edge have valuation `-slope`.
    pub slope: Rational,
    pub h_length: usize,
    /// Denominator of the slope.
    pub ram_index: usize,
}

impl Segment {
    /// Valuation shared by the `h_length` roots attached to this edge.
    pub fn root_valuation(&self) -> Rational {
        -self.slope.clone()
    }
}

/// Lower convex hull of `{(j, v_p(a_j)) : a_j != 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: Prime,
    /// Hull vertices with strictly increasing abscissa; collinear points dropped.
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
    /// Index of the first nonzero coefficient.
    pub origin_order: usize,
    pub degree: usize,
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Points `(j, v_p(a_j))` for the nonzero coefficients.
pub fn valuation_points(f: &QPoly, p: Prime) -> Vec<(usize, i64)> {
    f.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, a)| val_p_i64(a, p).map(|v| (j, v)))
        .collect()
}

/// Newton polygon of a nonzero polynomial, by the monotone chain in exact
/// integer arithmetic.
pub fn newton_polygon(f: &QPoly, p: Prime) -> Result<NewtonPolygon> {
    let points = valuation_points(f, p);
    if points.is_empty() {
        return Err(Error::validation("Newton polygon of the zero polynomial"));
    }
    Ok(polygon_from_points(&points, p))
}

/// Hull of already-computed valuation points (sorted by abscissa).
pub fn polygon_from_points(points: &[(usize, i64)], p: Prime) -> NewtonPolygon {
    let mut hull: Vec<(usize, i64)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let len = b.0 - a.0;
            let slope = Rational::new(BigInt::from(b.1 - a.1), BigInt::from(len));
            let ram_index = slope.denom().to_usize().expect("slope denominator fits usize");
            Segment { start: a, end: b, slope, h_length: len, ram_index }
        })
        .collect();
    NewtonPolygon {
        prime: p,
        origin_order: points[0].0,
        degree: points[points.len() - 1].0,
        vertices: hull,
        segments,
    }
}

/// Zero measure of a polynomial seen through its valuations: a multiset
/// of root valuations, `+inf` for the roots at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicRootMeasure {
    pub entries: Vec<(ExtRational, usize)>,
    pub total: usize,
}

impl PadicRootMeasure {
    /// Mass `multiplicity / total` of entry `i`.
    pub fn mass(&self, i: usize) -> Rational {
        Rational::new(BigInt::from(self.entries[i].1), BigInt::from(self.total))
    }

    pub fn total_mass(&self) -> Rational {
        (0..self.entries.len()).fold(Rational::zero(), |acc, i| acc + self.mass(i))
    }

    /// Sum of the finite root valuations, with multiplicity.
    pub fn finite_valuation_sum(&self) -> Rational {
        self.entries
            .iter()
            .filter_map(|(v, m)| v.finite().map(|v| v * Rational::from_integer(BigInt::from(*m))))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Number of roots whose valuation satisfies the predicate.
    pub fn count_where(&self, pred: impl Fn(&ExtRational) -> bool) -> usize {
        self.entries.iter().filter(|(v, _)| pred(v)).map(|(_, m)| m).sum()
    }
}

/// Each edge of slope `-l` and length `h` gives `h` roots of valuation `l`;
/// the origin order gives that many roots of valuation `+inf`.
pub fn root_valuations(np: &NewtonPolygon, deg_with_zeros: usize) -> PadicRootMeasure {
    let mut entries = Vec::with_capacity(np.segments.len() + 1);
    if np.origin_order > 0 {
        entries.push((ExtRational::Infinity, np.origin_order));
    }
    for s in &np.segments {
        entries.push((ExtRational::Finite(s.root_valuation()), s.h_length));
    }
    PadicRootMeasure { entries, total: deg_with_zeros }
}
