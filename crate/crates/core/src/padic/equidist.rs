//! Zero-mass diagnostics around the Gauss point of `E(0, R)`.
//!
//! Probes are proper subdisks of `E(0, R)`: either a disk of radius
//! strictly smaller than `R`, or an open residue disk `D(c, R)` with
//! `|c| <= R`. Weak convergence of the zero measures to the Dirac mass at
//! the Gauss point means every such probe eventually carries vanishing mass.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{p_power, val_p, ExtRational, Prime, Rational};
use crate::padic::disk::{root_count_in_disk, Disk};
use crate::padic::newton::{newton_polygon, root_valuations};
use crate::poly::QPoly;

/// Three-valued outcome of a finite-range diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub id: String,
    pub disk: Disk,
}

impl Probe {
    pub fn new(disk: Disk) -> Self {
        Probe { id: disk.to_string(), disk }
    }
}

/// Rejects probes that are not proper subdisks of `E(0, p^(-v_R))`.
pub fn validate_probe(disk: &Disk, r_exponent: &Rational, p: Prime) -> Result<()> {
    let inside = match val_p(&disk.center, p) {
        ExtRational::Infinity => true,
        ExtRational::Finite(vc) => &vc >= r_exponent,
    };
    if !inside {
        return Err(Error::validation(format!(
            "probe {disk} is centred outside E(0, p^-({r_exponent}))"
        )));
    }
    let proper = if disk.closed {
        &disk.radius_exponent > r_exponent
    } else {
        &disk.radius_exponent >= r_exponent
    };
    if !proper {
        return Err(Error::validation(format!(
            "probe {disk} is not a proper subdisk of E(0, p^-({r_exponent}))"
        )));
    }
    Ok(())
}

/// `D(0, R)` and the residue disks `D(c p^(v_R), R)`, `c = 1..min(p-1, 4)`.
/// For a non-integral `v_R` no nonzero rational has `|c| = R`, so only the
/// disk at the origin is returned.
pub fn default_probes(p: Prime, r_exponent: &Rational) -> Vec<Probe> {
    let mut out = vec![Probe::new(Disk::open(Rational::zero(), r_exponent.clone()))];
    if r_exponent.is_integer() {
        let e: i64 = r_exponent.to_integer().try_into().expect("radius exponent fits i64");
        let unit = p_power(p, e);
        for c in 1..=(p.get() - 1).min(4) {
            let center = &unit * Rational::from_integer(BigInt::from(c));
            out.push(Probe::new(Disk::open(center, r_exponent.clone())));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeMass {
    pub probe: String,
    pub count: usize,
    pub mass: Rational,
}

/// Per-`n` data of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidistributionRow {
    pub n: usize,
    pub degree: usize,
    pub probes: Vec<ProbeMass>,
    /// `nu(f_n)(E(0, R))`
    pub boundary_mass: Rational,
    /// Mean of `|lambda - v_R|` over the finite root valuations.
    pub spread: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeSummary {
    pub probe: String,
    pub head_max_count: usize,
    pub tail_max_count: usize,
    pub tail_stable: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidistributionReport {
    pub prime: Prime,
    pub r_exponent: Rational,
    pub rows: Vec<EquidistributionRow>,
    pub probes: Vec<ProbeSummary>,
    pub head_spread: Rational,
    pub tail_spread: Rational,
    pub verdict: Verdict,
}

impl EquidistributionReport {
    /// CSV records `n, deg, probe, mass_num, mass_den, boundary_mass, verdict`.
    pub fn csv_records(&self) -> Vec<[String; 7]> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (pm, ps) in row.probes.iter().zip(&self.probes) {
                out.push([
                    row.n.to_string(),
                    row.degree.to_string(),
                    pm.probe.clone(),
                    pm.mass.numer().to_string(),
                    pm.mass.denom().to_string(),
                    row.boundary_mass.to_string(),
                    ps.verdict.as_str().to_string(),
                ]);
            }
        }
        out
    }
}

pub const CSV_HEADER: [&str; 7] =
    ["n", "deg", "probe", "mass_num", "mass_den", "boundary_mass", "verdict"];

fn row_for(n: usize, f: &QPoly, p: Prime, r_exponent: &Rational, probes: &[Probe]) -> Result<EquidistributionRow> {
    let degree = f
        .degree()
        .ok_or_else(|| Error::validation(format!("truncation {n} is the zero polynomial")))?;
    if degree == 0 {
        return Err(Error::validation(format!("truncation {n} is constant")));
    }
    let total = Rational::from_integer(BigInt::from(degree));
    let mut masses = Vec::with_capacity(probes.len());
    for pr in probes {
        let count = root_count_in_disk(f, p, &pr.disk)?;
        masses.push(ProbeMass { probe: pr.id.clone(), count, mass: Rational::from_integer(BigInt::from(count)) / &total });
    }
    let measure = root_valuations(&newton_polygon(f, p)?, degree);
    let inside = measure.count_where(|v| match v {
        ExtRational::Infinity => true,
        ExtRational::Finite(v) => v >= r_exponent,
    });
    let finite: usize = measure.count_where(|v| !v.is_infinite());
    let spread = if finite == 0 {
        Rational::zero()
    } else {
        measure
            .entries
            .iter()
            .filter_map(|(v, m)| v.finite().map(|v| (v - r_exponent).abs() * BigInt::from(*m)))
            .fold(Rational::zero(), |a, b| a + b)
            / BigInt::from(finite)
    };
    Ok(EquidistributionRow {
        n,
        degree,
        probes: masses,
        boundary_mass: Rational::from_integer(BigInt::from(inside)) / total,
        spread,
    })
}

fn mean(xs: impl Iterator<Item = Rational>) -> Rational {
    let mut sum = Rational::zero();
    let mut k = 0usize;
    for x in xs {
        sum += x;
        k += 1;
    }
    if k == 0 {
        sum
    } else {
        sum / BigInt::from(k)
    }
}

/// Builds the report. Rows are computed in parallel and kept in input order.
///
/// The verdict reads the sequence in two halves (head, tail). It is
/// `consistent` when every probe count is constant on the tail (so probe
/// masses decay like `1/deg`) and the mean distance of root valuations to
/// `v_R` does not grow from head to tail; `inconsistent` otherwise;
/// `inconclusive` below four rows.
pub fn equidistribution_report(
    fs: &[(usize, QPoly)],
    p: Prime,
    r_exponent: &Rational,
    probes: &[Probe],
) -> Result<EquidistributionReport> {
    for pr in probes {
        validate_probe(&pr.disk, r_exponent, p)?;
    }
    let rows: Vec<EquidistributionRow> = fs
        .par_iter()
        .map(|(n, f)| row_for(*n, f, p, r_exponent, probes))
        .collect::<Result<_>>()?;
    let split = (rows.len() + 1) / 2;
    let (head, tail) = rows.split_at(split);
    let enough = rows.len() >= 4;
    let summaries: Vec<ProbeSummary> = probes
        .iter()
        .enumerate()
        .map(|(i, pr)| {
            let head_max_count = head.iter().map(|r| r.probes[i].count).max().unwrap_or(0);
            let tail_max_count = tail.iter().map(|r| r.probes[i].count).max().unwrap_or(0);
            let tail_stable = tail.windows(2).all(|w| w[0].probes[i].count == w[1].probes[i].count);
            let verdict = if !enough {
                Verdict::Inconclusive
            } else if tail_stable {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            };
            ProbeSummary { probe: pr.id.clone(), head_max_count, tail_max_count, tail_stable, verdict }
        })
        .collect();
    let head_spread = mean(head.iter().map(|r| r.spread.clone()));
    let tail_spread = mean(tail.iter().map(|r| r.spread.clone()));
    let verdict = if !enough {
        Verdict::Inconclusive
    } else if summaries.iter().all(|s| s.verdict == Verdict::Consistent) && tail_spread <= head_spread {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(EquidistributionReport {
        prime: p,
        r_exponent: r_exponent.clone(),
        rows,
        probes: summaries,
        head_spread,
        tail_spread,
        verdict,
    })
}
