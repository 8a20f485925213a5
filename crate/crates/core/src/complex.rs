//! Complex zeros of truncations: simultaneous root finding, circle
//! statistics against the uniform measure, and the complex growth bound.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ln_abs, rational_to_f64};
use crate::poly::QPoly;
use crate::series::SeriesSpec;

pub const MAX_ABERTH_ITERATIONS: usize = 600;
const INITIAL_PERTURBATION: f64 = 1e-3;

/// A root with its estimated multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub z: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRootSet {
    pub roots: Vec<RootCluster>,
    /// Normwise backward error `max_i |f(z_i)| / sum_j |a_j| |z_i|^j`.
    pub residual_bound: f64,
    /// Bound on the relative error made converting the rescaled
    /// coefficients to double precision.
    pub conversion_error: f64,
    pub iterations: usize,
    pub scale: f64,
}

impl ComplexRootSet {
    /// All roots, each repeated by multiplicity.
    pub fn points(&self) -> Vec<Complex64> {
        self.roots.iter().flat_map(|c| std::iter::repeat(c.z).take(c.multiplicity)).collect()
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|c| c.multiplicity).sum()
    }
}

/// `f(sU)` rescaled so the largest coefficient has modulus 1, with the
/// zero roots stripped.
struct Working {
    ord: usize,
    scale: f64,
    coeffs: Vec<f64>,
    conversion_error: f64,
}

fn prepare(f: &QPoly) -> Result<Working> {
    let deg = f.degree().ok_or_else(|| Error::validation("root finding on the zero polynomial"))?;
    let ord = f.ord().unwrap_or(0);
    if deg == ord {
        return Ok(Working { ord, scale: 1.0, coeffs: vec![1.0], conversion_error: 0.0 });
    }
    let k = deg - ord;
    let logs: Vec<Option<f64>> = f.coeffs()[ord..].iter().map(ln_abs).collect();
    let l0 = logs[0].expect("nonzero");
    let lk = logs[k].expect("nonzero");
    let ln_s = (l0 - lk) / k as f64;
    let e: Vec<Option<f64>> = logs.iter().enumerate().map(|(j, l)| l.map(|l| l + j as f64 * ln_s)).collect();
    let m = e.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut conversion_error = 0f64;
    let coeffs = f.coeffs()[ord..]
        .iter()
        .zip(&e)
        .map(|(a, ej)| match ej {
            None => 0.0,
            Some(ej) => {
                conversion_error = conversion_error.max(f64::EPSILON * (2.0 + ej.abs() + m.abs()));
                let sign = if a.is_negative() { -1.0 } else { 1.0 };
                sign * (ej - m).exp()
            }
        })
        .collect();
    Ok(Working { ord, scale: ln_s.exp(), coeffs, conversion_error })
}

/// Newton correction `p(z)/p'(z)` and whether `z` is already a root to
/// working precision. Evaluates the reversed polynomial outside the unit
/// disk.
fn newton_ratio(b: &[f64], z: Complex64) -> (Complex64, bool) {
    let k = b.len() - 1;
    let r = z.norm();
    let (p, dp, mag) = if r <= 1.0 {
        horner(b.iter().rev(), z)
    } else {
        horner(b.iter(), z.inv())
    };
    let small = p.norm() <= 4.0 * (k as f64 + 1.0) * f64::EPSILON * mag;
    if r <= 1.0 {
        (p / dp, small)
    } else {
        let w = z.inv();
        (z * p / (p * k as f64 - w * dp), small)
    }
}

/// Value, derivative and `sum |c_j| |z|^j` of the polynomial whose
/// coefficients are produced from the highest degree down.
fn horner<'a>(coeffs_high_first: impl Iterator<Item = &'a f64>, z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut mag = 0.0;
    for &c in coeffs_high_first {
        dp = dp * z + p;
        p = p * z + c;
        mag = mag * az + c.abs();
    }
    (p, dp, mag)
}

fn eval(b: &[f64], z: Complex64) -> Complex64 {
    horner(b.iter().rev(), z).0
}

/// `|p(z)| / sum |b_j| |z|^j`, evaluated in reversed form outside the unit disk.
fn backward_error(b: &[f64], z: Complex64) -> f64 {
    let (p, _, mag) = if z.norm() <= 1.0 {
        horner(b.iter().rev(), z)
    } else {
        horner(b.iter(), z.inv())
    };
    if mag == 0.0 {
        0.0
    } else {
        p.norm() / mag
    }
}

fn derivative(b: &[f64]) -> Vec<f64> {
    b.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect()
}

/// The centre of an `m`-fold cluster is a simple root of `p^(m-1)`;
/// a few Newton steps on that derivative sharpen the mean.
fn refine_cluster(b: &[f64], z: Complex64, m: usize) -> Complex64 {
    let mut d = b.to_vec();
    for _ in 1..m {
        d = derivative(&d);
    }
    if d.len() < 2 {
        return z;
    }
    polish(&d, z)
}

/// Aberth iteration on a working polynomial of degree `k >= 1`.
fn aberth(b: &[f64], seed: u64) -> std::result::Result<(Vec<Complex64>, usize), (Vec<Complex64>, usize, f64)> {
    let k = b.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = PI / (2.0 * k as f64);
    let mut z: Vec<Complex64> = (0..k)
        .map(|i| {
            let jitter = INITIAL_PERTURBATION * rng.gen_range(-1.0..1.0);
            Complex64::from_polar(1.0, TAU * i as f64 / k as f64 + offset + jitter)
        })
        .collect();
    let mut done = vec![false; k];
    let mut max_step = f64::INFINITY;
    for it in 1..=MAX_ABERTH_ITERATIONS {
        max_step = 0.0;
        let mut all = true;
        for i in 0..k {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton_ratio(b, z[i]);
            if small {
                done[i] = true;
                continue;
            }
            let zi = z[i];
            let sum: Complex64 = z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, zj)| (zi - zj).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                all = false;
                continue;
            }
            z[i] = zi - w;
            let step = w.norm() / z[i].norm().max(1.0);
            max_step = max_step.max(step);
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok((z, it));
        }
    }
    Err((z, MAX_ABERTH_ITERATIONS, max_step))
}

/// Up to three Newton steps, each kept only if it lowers the residual.
fn polish(b: &[f64], z: Complex64) -> Complex64 {
    let mut best = z;
    let mut best_res = eval(b, z).norm();
    for _ in 0..3 {
        let (ratio, small) = newton_ratio(b, best);
        if small || !ratio.is_finite() {
            break;
        }
        let cand = best - ratio;
        let res = eval(b, cand).norm();
        if res < best_res {
            best = cand;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

/// Groups roots closer than `tol` (transitively) and replaces each group by
/// its mean.
fn merge_clusters(z: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += z[i];
                g.2 += 1;
            }
            None => groups.push((r, z[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, s, m)| RootCluster { z: s / m as f64, multiplicity: m })
        .collect()
}

/// Roots of `f` in double precision. Roots at the origin are exact;
/// the others come from an Aberth iteration on the rescaled polynomial
/// started from a jittered circle, followed by Newton polishing and
/// merging of clusters closer than `tol`.
pub fn complex_roots(f: &QPoly, tol: f64, seed: u64) -> Result<ComplexRootSet> {
    if !(tol > 0.0) {
        return Err(Error::validation("root tolerance must be positive"));
    }
    let w = prepare(f)?;
    if w.ord == f.degree().unwrap_or(0) && w.ord == 0 {
        return Err(Error::validation("root finding on a constant polynomial"));
    }
    let mut roots = Vec::new();
    if w.ord > 0 {
        roots.push(RootCluster { z: Complex64::zero(), multiplicity: w.ord });
    }
    let mut residual_bound = 0.0f64;
    let mut iterations = 0;
    if w.coeffs.len() > 1 {
        let b = &w.coeffs;
        let (raw, it) = match aberth(b, seed) {
            Ok(v) => v,
            Err((partial, iterations, max_step)) => {
                return Err(Error::NonConvergence {
                    iterations,
                    max_step,
                    partial: partial.into_iter().map(|u| u * w.scale).collect(),
                })
            }
        };
        iterations = it;
        let polished: Vec<Complex64> = raw.iter().map(|&u| polish(b, u)).collect();
        let scaled_tol = tol / w.scale;
        for c in merge_clusters(&polished, scaled_tol) {
            let z = if c.multiplicity > 1 { refine_cluster(b, c.z, c.multiplicity) } else { c.z };
            residual_bound = residual_bound.max(backward_error(b, z));
            roots.push(RootCluster { z: z * w.scale, multiplicity: c.multiplicity });
        }
    }
    Ok(ComplexRootSet { roots, residual_bound, conversion_error: w.conversion_error, iterations, scale: w.scale })
}

pub const ARC_LEVELS: u32 = 10;
/// Constant of the Erdős–Turán consistency check.
pub const ERDOS_TURAN_C: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CircleStats {
    pub radius: f64,
    pub epsilon: f64,
    /// Fraction of roots with `||z| - R| <= eps`.
    pub annulus_mass: f64,
    /// Fraction of roots with `|z| <= R - eps`.
    pub interior_mass: f64,
    /// `S_m = (1/k') sum (z/|z|)^m`, `m = 1..M`, over the `k'` nonzero roots.
    pub weyl: Vec<Complex64>,
    /// Largest deviation from uniform over dyadic arcs of levels 1..10.
    pub arc_discrepancy: f64,
    pub jentzsch_gap: f64,
}

impl CircleStats {
    /// `C (sum_m |S_m|/m + 1/M)`.
    pub fn erdos_turan_bound(&self) -> f64 {
        let m = self.weyl.len().max(1) as f64;
        let s: f64 = self.weyl.iter().enumerate().map(|(i, s)| s.norm() / (i + 1) as f64).sum();
        ERDOS_TURAN_C * (s + 1.0 / m)
    }
}

/// Discrepancy of the angles (as fractions of a turn in `[0, 1)`) over
/// all dyadic arcs of levels `1..=levels`.
pub fn dyadic_discrepancy(turns: &[f64], levels: u32) -> f64 {
    let k = turns.len() as f64;
    let mut worst = 0f64;
    for l in 1..=levels {
        let bins = 1usize << l;
        let mut counts = vec![0usize; bins];
        for &t in turns {
            let b = ((t * bins as f64) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let expected = 1.0 / bins as f64;
        for c in counts {
            worst = worst.max((c as f64 / k - expected).abs());
        }
    }
    worst
}

/// Circle statistics of a root set against the uniform measure on
/// `|z| = R`. The Erdős–Turán inequality (Selberg-polynomial form, which
/// gives `D <= 1/(M+1) + 3 sum |S_m|/m`) is checked with constant 4; a
/// violation is an invariant error.
pub fn circle_stats(rs: &ComplexRootSet, radius: f64, weyl_terms: usize, grid: usize, epsilon: f64) -> Result<CircleStats> {
    if !(radius > 0.0) || weyl_terms == 0 || grid == 0 {
        return Err(Error::validation("circle statistics need R > 0, M >= 1 and a nonempty grid"));
    }
    let pts = rs.points();
    if pts.is_empty() {
        return Err(Error::validation("circle statistics of an empty root set"));
    }
    let k = pts.len() as f64;
    let annulus_mass = pts.iter().filter(|z| (z.norm() - radius).abs() <= epsilon).count() as f64 / k;
    let interior_mass = pts.iter().filter(|z| z.norm() <= radius - epsilon).count() as f64 / k;
    let nonzero: Vec<Complex64> = pts.iter().copied().filter(|z| !z.is_zero()).collect();
    let (weyl, arc_discrepancy) = if nonzero.is_empty() {
        (vec![Complex64::zero(); weyl_terms], 0.0)
    } else {
        let kk = nonzero.len() as f64;
        let units: Vec<Complex64> = nonzero.iter().map(|z| z / z.norm()).collect();
        let weyl = (1..=weyl_terms as i32).map(|m| units.iter().map(|u| u.powi(m)).sum::<Complex64>() / kk).collect();
        let turns: Vec<f64> = nonzero.iter().map(|z| z.arg().rem_euclid(TAU) / TAU).map(|t| if t >= 1.0 { 0.0 } else { t }).collect();
        (weyl, dyadic_discrepancy(&turns, ARC_LEVELS))
    };
    let jentzsch_gap = (0..grid)
        .map(|t| {
            let g = Complex64::from_polar(radius, TAU * t as f64 / grid as f64);
            pts.iter().map(|z| (g - z).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let stats = CircleStats { radius, epsilon, annulus_mass, interior_mass, weyl, arc_discrepancy, jentzsch_gap };
    if !nonzero.is_empty() && stats.arc_discrepancy > stats.erdos_turan_bound() + 1e-12 {
        return Err(Error::invariant(format!(
            "arc discrepancy {} exceeds the Erdős–Turán bound {}",
            stats.arc_discrepancy,
            stats.erdos_turan_bound()
        )));
    }
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JsParams {
    pub epsilon: f64,
    pub weyl_terms: usize,
    pub grid: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for JsParams {
    fn default() -> Self {
        JsParams { epsilon: 1e-8, weyl_terms: 8, grid: 256, tol: 1e-6, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsRow {
    pub n: usize,
    pub degree: usize,
    pub stats: CircleStats,
    pub residual_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trend {
    /// Last value strictly below the first.
    pub decreased: bool,
    /// Every step strictly decreasing.
    pub monotone: bool,
}

impl Trend {
    pub fn of(xs: &[f64]) -> Trend {
        let decreased = xs.len() >= 2 && xs[xs.len() - 1] < xs[0];
        let monotone = xs.len() >= 2 && xs.windows(2).all(|w| w[1] < w[0]);
        Trend { decreased, monotone }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsExperiment {
    pub series: String,
    pub radius: f64,
    pub rows: Vec<JsRow>,
    pub arc_discrepancy_trend: Trend,
    pub jentzsch_gap_trend: Trend,
}

impl JsExperiment {
    pub fn csv_header(&self) -> Vec<String> {
        let m = self.rows.first().map_or(0, |r| r.stats.weyl.len());
        let mut h = vec!["n".to_string(), "deg".into(), "annulus_mass_eps".into()];
        h.extend((1..=m).map(|i| format!("S_{i}")));
        h.extend(["arc_discrepancy".to_string(), "jentzsch_gap".into(), "residual_bound".into()]);
        h
    }

    pub fn csv_records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![r.n.to_string(), r.degree.to_string(), format!("{:.12e}", r.stats.annulus_mass)];
                v.extend(r.stats.weyl.iter().map(|s| format!("{:.12e}", s.norm())));
                v.push(format!("{:.12e}", r.stats.arc_discrepancy));
                v.push(format!("{:.12e}", r.stats.jentzsch_gap));
                v.push(format!("{:.6e}", r.residual_bound));
                v
            })
            .collect()
    }
}

/// Root statistics for each selected truncation, computed in parallel and
/// reported in the order of `ns`. The seed for `n` is `seed + n`.
pub fn jentzsch_szego_experiment(spec: &SeriesSpec, radius: f64, ns: &[usize], params: &JsParams) -> Result<JsExperiment> {
    let rows = ns
        .par_iter()
        .map(|&n| {
            let f = spec.truncate(n).poly;
            let degree = f.degree().unwrap_or(0);
            if degree == 0 {
                return Err(Error::validation(format!("truncation {n} of {} has no zeros", spec.name())));
            }
            let rs = complex_roots(&f, params.tol, params.seed.wrapping_add(n as u64))?;
            let stats = circle_stats(&rs, radius, params.weyl_terms, params.grid, params.epsilon)?;
            Ok(JsRow { n, degree, stats, residual_bound: rs.residual_bound })
        })
        .collect::<Result<Vec<_>>>()?;
    let disc: Vec<f64> = rows.iter().map(|r| r.stats.arc_discrepancy).collect();
    let gap: Vec<f64> = rows.iter().map(|r| r.stats.jentzsch_gap).collect();
    Ok(JsExperiment {
        series: spec.name().to_string(),
        radius,
        rows,
        arc_discrepancy_trend: Trend::of(&disc),
        jentzsch_gap_trend: Trend::of(&gap),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BwComplexSample {
    pub z: Complex64,
    /// `ln |f(z)|`
    pub lhs: f64,
    /// `ln ||f||_E + k ln max(|z|/R, 1)`
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BwComplexReport {
    pub log_norm: f64,
    pub grid_points: usize,
    pub refined: bool,
    pub samples: Vec<BwComplexSample>,
}

impl BwComplexReport {
    pub fn violations(&self) -> usize {
        self.samples.iter().filter(|s| !s.holds).count()
    }
}

/// `ln |p(z)|`, through the reversed polynomial outside the unit disk.
fn log_abs_eval(c: &[f64], z: Complex64) -> f64 {
    let k = c.len() - 1;
    let r = z.norm();
    if r <= 1.0 {
        horner(c.iter().rev(), z).0.norm().ln()
    } else {
        k as f64 * r.ln() + horner(c.iter(), z.inv()).0.norm().ln()
    }
}

/// Grid maximum of `ln |f|` on `|z| = R`, inflated by `1/(1 - pi k / N)`
/// (Bernstein's inequality bounds the variation between grid points).
fn log_sup_norm(c: &[f64], radius: f64, points: usize) -> f64 {
    let k = (c.len() - 1) as f64;
    let max = (0..points)
        .map(|t| log_abs_eval(c, Complex64::from_polar(radius, TAU * t as f64 / points as f64)))
        .fold(f64::NEG_INFINITY, f64::max);
    max - (1.0 - PI * k / points as f64).ln()
}

pub const BW_GRID: usize = 4096;

fn grid_size(k: usize) -> usize {
    let mut points = BW_GRID;
    while PI * k as f64 / points as f64 > 0.5 {
        points *= 2;
    }
    points
}

/// Upper estimate of `ln max_{|z| = R} |f(z)|` from the circle grid.
pub fn log_sup_norm_on_circle(f: &QPoly, radius: f64) -> Result<f64> {
    let k = f.degree().ok_or_else(|| Error::validation("sup norm of the zero polynomial"))?;
    if !(radius > 0.0) {
        return Err(Error::validation("radius must be positive"));
    }
    let c: Vec<f64> = f.coeffs().iter().map(rational_to_f64).collect();
    Ok(log_sup_norm(&c, radius, grid_size(k)))
}

/// Checks `|f(z)| <= ||f||_E max(|z|/R, 1)^deg` with relative tolerance
/// `rel_tol`. The sup norm comes from a circle grid of at least 4096
/// points; on a violation the grid is refined once by a factor of 8 and
/// the remaining violations are flagged in the report.
pub fn bernstein_walsh_complex(f: &QPoly, radius: f64, samples: &[Complex64], rel_tol: f64) -> Result<BwComplexReport> {
    let k = f.degree().ok_or_else(|| Error::validation("Bernstein-Walsh check of the zero polynomial"))?;
    if !(radius > 0.0) {
        return Err(Error::validation("radius must be positive"));
    }
    let c: Vec<f64> = f.coeffs().iter().map(rational_to_f64).collect();
    let points = grid_size(k);
    let tol = rel_tol.ln_1p();
    let run = |points: usize| {
        let log_norm = log_sup_norm(&c, radius, points);
        let samples: Vec<BwComplexSample> = samples
            .iter()
            .map(|&z| {
                let lhs = log_abs_eval(&c, z);
                let rhs = log_norm + k as f64 * (z.norm() / radius).ln().max(0.0);
                BwComplexSample { z, lhs, rhs, slack: rhs - lhs, holds: lhs <= rhs + tol }
            })
            .collect();
        BwComplexReport { log_norm, grid_points: points, refined: false, samples }
    };
    let first = run(points);
    if first.violations() == 0 {
        return Ok(first);
    }
    let mut second = run(points * 8);
    second.refined = true;
    Ok(second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use proptest::prelude::*;

    fn geometric(n: usize) -> QPoly {
        QPoly::from_ints(&vec![1; n + 1])
    }

    fn sorted_by_angle(mut z: Vec<Complex64>) -> Vec<Complex64> {
        z.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        z
    }

    #[test]
    fn root_examples() {
        let rs = complex_roots(&QPoly::from_ints(&[1, 0, 1]), 1e-8, 1).unwrap();
        let z = sorted_by_angle(rs.points());
        assert!((z[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((z[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);

        let rs = complex_roots(&geometric(4), 1e-8, 2).unwrap();
        assert_eq!(rs.degree(), 4);
        for z in rs.points() {
            assert!((z.powu(5) - 1.0).norm() < 1e-12);
            assert!((z - 1.0).norm() > 0.5);
        }

        let half = QPoly::linear(ratio(1, 2));
        let f = half.mul(&half).mul(&half);
        let rs = complex_roots(&f, 1e-3, 3).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!((rs.roots[0].z - 0.5).norm() < 1e-6);
    }

    #[test]
    fn zero_roots_are_exact() {
        let f = QPoly::from_ints(&[0, 0, -1, 0, 1]);
        let rs = complex_roots(&f, 1e-8, 0).unwrap();
        assert_eq!(rs.degree(), 4);
        assert_eq!(rs.roots[0], RootCluster { z: Complex64::zero(), multiplicity: 2 });
    }

    #[test]
    fn stats_examples() {
        for n in [8usize, 16, 33] {
            let rs = complex_roots(&geometric(n), 1e-9, 5).unwrap();
            let st = circle_stats(&rs, 1.0, 4, 64, 1e-8).unwrap();
            assert_eq!(st.annulus_mass, 1.0);
            assert!((st.weyl[0].norm() - 1.0 / n as f64).abs() < 1e-9);

            let mut c = vec![0i64; n + 1];
            c[0] = -1;
            c[n] = 1;
            let rs = complex_roots(&QPoly::from_ints(&c), 1e-9, 5).unwrap();
            let st = circle_stats(&rs, 1.0, 4, 64, 1e-8).unwrap();
            assert!(st.arc_discrepancy <= 1.0 / n as f64 + 1.0 / 1024.0 + 1e-12);

            let rs = ComplexRootSet {
                roots: vec![RootCluster { z: Complex64::new(3.0, 0.0), multiplicity: n }],
                residual_bound: 0.0,
                conversion_error: 0.0,
                iterations: 0,
                scale: 1.0,
            };
            let st = circle_stats(&rs, 1.0, 4, 64, 0.5).unwrap();
            assert_eq!(st.annulus_mass, 0.0);
        }
        let three = QPoly::linear(int(3));
        let f = (0..6).fold(QPoly::one(), |acc, _| acc.mul(&three));
        let rs = complex_roots(&f, 0.1, 5).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!((rs.roots[0].z - 3.0).norm() < 1e-8);
        assert_eq!(circle_stats(&rs, 1.0, 4, 64, 0.5).unwrap().annulus_mass, 0.0);
    }

    #[test]
    fn dyadic_discrepancy_examples() {
        assert_eq!(dyadic_discrepancy(&[0.0, 0.5], 1), 0.0);
        assert_eq!(dyadic_discrepancy(&[0.1, 0.2], 1), 0.5);
        let uniform: Vec<f64> = (0..1024).map(|i| i as f64 / 1024.0).collect();
        assert!(dyadic_discrepancy(&uniform, 10) < 1e-15);
    }

    #[test]
    fn bernstein_walsh_examples() {
        for k in [1usize, 3, 7] {
            let mut c = vec![0i64; k + 1];
            c[k] = 1;
            for r in [0.5, 1.0, 2.0] {
                let rep = bernstein_walsh_complex(&QPoly::from_ints(&c), r, &[Complex64::new(2.0 * r, 0.0)], 1e-9).unwrap();
                assert_eq!(rep.violations(), 0);
                assert!(rep.samples[0].slack < 1e-2);
            }
        }
        let rep = bernstein_walsh_complex(&geometric(8), 1.0, &[Complex64::new(2.0, 0.0)], 1e-9).unwrap();
        assert_eq!(rep.violations(), 0);
        let f = QPoly::from_ints(&[1, -2, 1]);
        let rep = bernstein_walsh_complex(&f, 1.0, &[Complex64::new(1.001, 0.0)], 1e-9).unwrap();
        assert_eq!(rep.violations(), 0);
    }

    /// Leja ordering keeps the partial products bounded.
    fn leja(mut pts: Vec<Complex64>) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(pts.len());
        let first = (0..pts.len()).max_by(|&i, &j| pts[i].norm().partial_cmp(&pts[j].norm()).unwrap()).unwrap();
        out.push(pts.swap_remove(first));
        while !pts.is_empty() {
            let score = |z: &Complex64| out.iter().map(|w| (z - w).norm().ln()).sum::<f64>();
            let best = (0..pts.len()).max_by(|&i, &j| score(&pts[i]).partial_cmp(&score(&pts[j])).unwrap()).unwrap();
            out.push(pts.swap_remove(best));
        }
        out
    }

    fn reconstruct(roots: &[Complex64]) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &z in &leja(roots.to_vec()) {
            let mut next = vec![Complex64::zero(); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * z;
            }
            c = next;
        }
        c
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn root_finder_contract(coeffs in proptest::collection::vec(-9i64..=9, 2..=40), seed in 0u64..100) {
            let mut coeffs = coeffs;
            let k = coeffs.len() - 1;
            coeffs[k] = if coeffs[k] == 0 { 1 } else { coeffs[k] };
            coeffs[0] = if coeffs[0] == 0 { 3 } else { coeffs[0] };
            let f = QPoly::from_ints(&coeffs);
            let tol = 1e-10;
            let rs = complex_roots(&f, tol, seed).unwrap();
            prop_assert_eq!(rs.degree(), k);
            prop_assert!(rs.residual_bound <= tol * 2.0 * k as f64);
            // conjugate pairing
            let pts = rs.points();
            for z in &pts {
                let best = pts.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best <= 1e-6 * (1.0 + z.norm()));
            }
        }
    }

    #[test]
    fn reconstruction_well_conditioned() {
        for n in [16usize, 64, 128] {
            let rs = complex_roots(&geometric(n), 1e-10, 9).unwrap();
            let c = reconstruct(&rs.points());
            for (j, a) in c.iter().enumerate() {
                assert!((a - 1.0).norm() <= 1e-6, "n = {n}, j = {j}: {a}");
            }
        }
    }

    proptest! {
        #[test]
        fn erdos_turan_holds_on_random_clouds(
            pts in proptest::collection::vec((0.1f64..3.0, 0.0f64..0.7), 1..200),
        ) {
            let roots: Vec<RootCluster> = pts
                .iter()
                .map(|&(r, t)| RootCluster { z: Complex64::from_polar(r, t), multiplicity: 1 })
                .collect();
            let rs = ComplexRootSet { roots, residual_bound: 0.0, conversion_error: 0.0, iterations: 0, scale: 1.0 };
            for m in [1usize, 2, 5, 20] {
                prop_assert!(circle_stats(&rs, 1.0, m, 32, 0.1).is_ok());
            }
        }
    }
}
