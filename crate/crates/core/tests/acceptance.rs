//! Acceptance gate. Each test checks one criterion at its stated tolerance
//! and prints a single `PASS`/`FAIL` line before asserting.
//!
//! Run with `cargo test -p trunclab --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trunclab::complex::{bernstein_walsh_complex, circle_stats, complex_roots, jentzsch_szego_experiment, JsParams};
use trunclab::config::ExperimentConfig;
use trunclab::counterexample::{build_sequence, mass_at_one, IntegerPolynomial};
use trunclab::exact::{int, p_power, val_p, val_p_i64, ExtRational, Prime, Rational};
use trunclab::factor::{certified_factor_degrees, count_factors_leq};
use trunclab::padic::{
    bernstein_walsh_check, equidistribution_report, newton_polygon, reduction_degree, root_count_in_disk,
    root_valuations, valuation_points, BerkovichPoint, Disk, Probe,
};
use trunclab::poly::QPoly;
use trunclab::runner::run;
use trunclab::series::SeriesSpec;

fn verdict(name: &str, pass: bool, elapsed: Duration, limit: Option<Duration>, detail: &str) {
    let in_time = limit.map_or(true, |l| elapsed <= l);
    let ok = pass && in_time;
    let budget = limit.map_or(String::new(), |l| format!(" / limit {:.0} s", l.as_secs_f64()));
    // Written past the test harness capture so every line shows in a plain run.
    let line = format!(
        "ACCEPTANCE {} {name} ({:.2} s{budget}): {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "{name}: {detail}");
    assert!(in_time, "{name}: took {:.2} s", elapsed.as_secs_f64());
}

fn prime(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

/// `c p^e` with a random unit `c`, or 0.
fn random_coeff(rng: &mut ChaCha8Rng, q: u64) -> Rational {
    if rng.gen_ratio(1, 7) {
        return int(0);
    }
    let e = rng.gen_range(-6i64..=6);
    let mut unit = rng.gen_range(1i64..=6);
    if unit as u64 % q == 0 {
        unit = 1;
    }
    let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
    p_power(prime(q), e) * int(sign * unit)
}

fn random_poly(rng: &mut ChaCha8Rng, q: u64) -> QPoly {
    let deg = rng.gen_range(0..=12usize);
    let mut c: Vec<Rational> = (0..=deg).map(|_| random_coeff(rng, q)).collect();
    if c.iter().all(Zero::is_zero) {
        c[deg] = int(1);
    }
    QPoly::new(c)
}

/// Lower hull by the definition: a point is a vertex iff no chord between
/// a point on its left and one on its right passes on or below it.
fn hull_by_definition(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for k in 0..points.len() {
        let (xk, yk) = (points[k].0 as i128, points[k].1 as i128);
        let covered = (0..k).any(|i| {
            (k + 1..points.len()).any(|j| {
                let (xi, yi) = (points[i].0 as i128, points[i].1 as i128);
                let (xj, yj) = (points[j].0 as i128, points[j].1 as i128);
                yi * (xj - xi) + (yj - yi) * (xk - xi) <= yk * (xj - xi)
            })
        });
        if !covered {
            out.push(points[k]);
        }
    }
    out
}

#[test]
fn counterexample_suite() {
    let t = Instant::now();
    let seq = build_sequence(6).unwrap();
    let elapsed = t.elapsed();
    // the congruence for the last member needs its successor
    let next = build_sequence(7).unwrap();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut problems = Vec::new();
    let t_one = IntegerPolynomial::from_ints(&[-1, 1]).to_qpoly();
    for (n, f) in seq.polys.iter().enumerate() {
        // members are indexed from the (T - 1)^2 base, so member n is level n + 1
        let m = n + 1;
        let d = f.degree().unwrap();
        if !f.is_monic() {
            problems.push(format!("F_{m} not monic"));
        }
        if d != (1usize << (m + 1)) - 2 {
            problems.push(format!("deg F_{m} = {d}"));
        }
        // divisibility by exact division, independent of the library's order count
        let order = (1usize << m) - 1;
        let mut g = f.to_qpoly();
        for _ in 0..order {
            let (quo, rem) = g.div_rem(&t_one);
            if !rem.is_zero() {
                problems.push(format!("(T-1)^{order} does not divide F_{m}"));
                break;
            }
            g = quo;
        }
        if mass_at_one(f).unwrap() < half {
            problems.push(format!("mass_at_one(F_{m}) < 1/2"));
        }
        let succ = &next.polys[n + 1];
        if (0..=d).any(|j| succ.coeff(j) != f.coeff(j)) {
            problems.push(format!("F_{} != F_{m} mod T^{}", m + 1, d + 1));
        }
    }
    let max_deg = seq.degrees().into_iter().max().unwrap();
    if max_deg != 254 {
        problems.push(format!("largest degree {max_deg}"));
    }
    verdict(
        "counterexample suite",
        problems.is_empty(),
        elapsed,
        Some(Duration::from_secs(10)),
        &if problems.is_empty() {
            format!("7 members up to degree {max_deg}; monic, degree 2^(n+1)-2, (T-1)^(2^n-1) | F_n, mass >= 1/2, congruences mod T^(d_n+1)")
        } else {
            problems.join("; ")
        },
    );
}

#[test]
fn hull_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut bad = Vec::new();
    for case in 0..500 {
        let q = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let f = random_poly(&mut rng, q);
        let np = newton_polygon(&f, prime(q)).unwrap();
        let pts = valuation_points(&f, prime(q));
        if np.vertices != hull_by_definition(&pts) {
            bad.push(format!("case {case}: hull"));
        }
        // sum of root valuations = v(a_ord) - v(a_deg)
        let m = root_valuations(&np, np.degree);
        let lo = val_p_i64(&f.coeff(np.origin_order), prime(q)).unwrap();
        let hi = val_p_i64(&f.coeff(np.degree), prime(q)).unwrap();
        if m.finite_valuation_sum() != int(lo - hi) {
            bad.push(format!("case {case}: valuation sum"));
        }
    }
    verdict(
        "hull oracle",
        bad.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(5)),
        &if bad.is_empty() { "500/500 hulls and valuation sums agree".into() } else { bad.join("; ") },
    );
}

#[test]
fn reduction_polygon_identity() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut bad = Vec::new();
    for case in 0..500 {
        let q = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let f = random_poly(&mut rng, q);
        let v = rng.gen_range(-2i64..=2);
        let red = reduction_degree(&f, prime(q), v).unwrap();
        let cnt = root_count_in_disk(&f, prime(q), &Disk::closed(int(0), int(v))).unwrap();
        if red != cnt {
            bad.push(format!("case {case}: {red} != {cnt}"));
        }
    }
    verdict(
        "reduction/polygon identity",
        bad.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(5)),
        &if bad.is_empty() { "500/500 equal".into() } else { bad.join("; ") },
    );
}

/// `Phi_d` by exact division of `T^d - 1` by `Phi_e`, `e | d`, `e < d`.
fn cyclotomic(d: usize, cache: &mut BTreeMap<usize, QPoly>) -> QPoly {
    if let Some(f) = cache.get(&d) {
        return f.clone();
    }
    let mut c = vec![int(0); d + 1];
    c[0] = int(-1);
    c[d] = int(1);
    let mut f = QPoly::new(c);
    for e in (1..d).filter(|e| d % e == 0) {
        let (q, r) = f.div_rem(&cyclotomic(e, cache));
        assert!(r.is_zero());
        f = q;
    }
    cache.insert(d, f.clone());
    f
}

/// Roots of `(T^(n+1) - 1)/(T - 1)` with `|z - 1|_3 < 1`: those of the
/// `Phi_d` (d > 1, d | n+1) whose value at 1 is divisible by 3.
fn cyclotomic_cross_check(n: usize, cache: &mut BTreeMap<usize, QPoly>) -> usize {
    (2..=n + 1)
        .filter(|d| (n + 1) % d == 0)
        .map(|d| {
            let phi = cyclotomic(d, cache);
            let at_one = phi.eval(&int(1));
            if val_p(&at_one, prime(3)) > ExtRational::from_int(0) {
                phi.degree().unwrap()
            } else {
                0
            }
        })
        .sum()
}

#[test]
fn gauss_point_convergence() {
    let t = Instant::now();
    let p3 = prime(3);
    let spec = SeriesSpec::geometric();
    let fs: Vec<(usize, QPoly)> = (1..=200).map(|n| (n, spec.truncate(n).poly)).collect();
    let literal = Probe::new(Disk::closed(int(1), int(1)));
    let origin = Probe::new(Disk::closed(int(0), int(1)));
    let residue = Probe::new(Disk::open(int(1), int(0)));
    let rep = equidistribution_report(&fs, p3, &int(0), &[literal, origin, residue]).unwrap();
    let mut cache = BTreeMap::new();
    let (mut boundary, mut literal_bad, mut origin_bad, mut residue_bad) = (0, Vec::new(), 0, 0);
    for row in &rep.rows {
        let n = row.n;
        let mut pow = 1usize;
        while (n + 1) % (pow * 3) == 0 {
            pow *= 3;
        }
        let want = Rational::new(BigInt::from(pow - 1), BigInt::from(n));
        if row.boundary_mass != int(1) {
            boundary += 1;
        }
        if row.probes[0].mass != want {
            literal_bad.push(n);
        }
        if !row.probes[1].mass.is_zero() {
            origin_bad += 1;
        }
        if row.probes[2].mass != want {
            residue_bad += 1;
        }
    }
    let cross: Vec<(usize, usize, usize)> = [8usize, 26]
        .iter()
        .map(|&n| (n, cyclotomic_cross_check(n, &mut cache), rep.rows[n - 1].probes[2].count))
        .collect();
    let cross_ok = cross.iter().all(|&(n, c, r)| c == r && c == n);
    let pass = boundary == 0 && literal_bad.is_empty() && origin_bad == 0 && residue_bad == 0 && cross_ok;
    let detail = format!(
        "n <= 200: E(0,1) mass = 1 failures {boundary}; E(0,3^-1) mass = 0 failures {origin_bad}; \
         E(1,3^-1) mass = (3^v3(n+1) - 1)/n failures {} (first at n = {:?}; the closed disk of radius 1/3 \
         holds no root of unity, since |zeta - 1| = 3^(-1/phi(3^b)) > 1/3); residue disk D(1,1) reading: \
         failures {residue_bad}; cyclotomic cross-check (n, count, probe) {cross:?}",
        literal_bad.len(),
        literal_bad.first()
    );
    verdict("gauss-point convergence", pass, t.elapsed(), Some(Duration::from_secs(30)), &detail);
}

#[test]
fn factor_certification() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for q in [2u64, 3, 5, 7] {
        let f = QPoly::from_ints(&[-(q as i64), 0, 1]);
        let c = certified_factor_degrees(&f, prime(q), 0).unwrap();
        if !c.is_fully_exact() || c.exact_degrees().into_iter().collect::<Vec<_>>() != vec![(2, 1)] {
            bad.push(format!("T^2 - {q}: {:?}", c.exact_degrees()));
        }
        let e = SeriesSpec::exp().truncate(q as usize).poly;
        let c = certified_factor_degrees(&e, prime(q), 0).unwrap();
        if !c.is_fully_exact() || c.exact_degrees().into_iter().collect::<Vec<_>>() != vec![(q as usize, 1)] {
            bad.push(format!("exp_{q}: {:?}", c.exact_degrees()));
        }
    }
    let c = certified_factor_degrees(&QPoly::from_ints(&[-9, 0, 1]), prime(3), 0).unwrap();
    if !c.is_fully_exact() || c.exact_degrees().into_iter().collect::<Vec<_>>() != vec![(1, 2)] {
        bad.push(format!("T^2 - 9: {:?}", c.exact_degrees()));
    }
    verdict(
        "factor certification",
        bad.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(5)),
        &if bad.is_empty() {
            "T^2 - p irreducible; T^2 - 9 = two linear factors over Q_3; exp_p irreducible of degree p".into()
        } else {
            bad.join("; ")
        },
    );
}

#[test]
fn sqrt_gap_trend() {
    let t = Instant::now();
    let p2 = prime(2);
    let spec = SeriesSpec::sqrt_gap(p2);
    let mut short = Vec::new();
    let mut small = Vec::new();
    for n in (2..=199u64).filter(|&n| trunclab::exact::is_prime(n)) {
        let f = spec.truncate(n as usize).poly;
        let c = certified_factor_degrees(&f, p2, 0).unwrap();
        if c.max_degree_lower_bound() != n as usize {
            short.push((n, c.max_degree_lower_bound()));
        }
        let (_, upper) = count_factors_leq(&c, 5);
        if upper != 0 {
            small.push((n, upper));
        }
    }
    let detail = format!(
        "primes n <= 199: max certified degree bound != n at (n, bound) {short:?}; \
         degree<=5 upper count != 0 at (n, count) {small:?}"
    );
    verdict(
        "sqrt-gap factor-degree trend",
        short.is_empty() && small.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(30)),
        &detail,
    );
}

#[test]
fn complex_jentzsch_szego() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let geometric = SeriesSpec::geometric();
    for n in [64usize, 128, 256, 512] {
        let f = geometric.truncate(n).poly;
        let rs = complex_roots(&f, 1e-6, n as u64).unwrap();
        let worst = rs.points().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        if worst > 1e-8 {
            bad.push(format!("n = {n}: max ||z| - 1| = {worst:e}"));
        }
        let st = circle_stats(&rs, 1.0, 8, 256, 1e-8).unwrap();
        let s1 = st.weyl[0].norm();
        if (s1 - 1.0 / n as f64).abs() > 1e-6 {
            bad.push(format!("n = {n}: |S_1| = {s1}"));
        }
        let bound = 2.0 * std::f64::consts::PI * 2.0 / (n + 1) as f64 + 1e-6;
        if st.jentzsch_gap > bound {
            bad.push(format!("n = {n}: gap {} > {bound}", st.jentzsch_gap));
        }
    }
    let lac = SeriesSpec::lacunary();
    let ns: Vec<usize> = (4..=8).map(|k| 1usize << k).collect();
    let exp = jentzsch_szego_experiment(&lac, 1.0, &ns, &JsParams::default()).unwrap();
    let disc: Vec<f64> = exp.rows.iter().map(|r| r.stats.arc_discrepancy).collect();
    if !disc.windows(2).all(|w| w[1] < w[0]) {
        bad.push(format!("lacunary discrepancies not strictly decreasing: {disc:?}"));
    }
    let detail = if bad.is_empty() {
        format!("geometric n in {{64,128,256,512}} on the circle, |S_1| = 1/n, gaps within bound; lacunary discrepancy {disc:.4?}")
    } else {
        bad.join("; ")
    };
    verdict("complex Jentzsch-Szego", bad.is_empty(), t.elapsed(), Some(Duration::from_secs(60)), &detail);
}

/// `log_p |f|(xi(c, r))` from the roots: `log_p|lc| + sum log_p max(|c - a|, p^-r)`.
fn log_abs_from_roots(lc: &Rational, roots: &[Rational], c: &Rational, r: &Rational, p: Prime) -> Rational {
    let mut s = -val_p(lc, p).finite().unwrap().clone();
    for a in roots {
        let d = match val_p(&(c - a), p) {
            ExtRational::Infinity => -r.clone(),
            ExtRational::Finite(v) => (-v).max(-r.clone()),
        };
        s += d;
    }
    s
}

#[test]
fn bernstein_walsh_both_sides() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut bad = Vec::new();
    let mut samples_checked = 0usize;
    for case in 0..200 {
        let q = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let p = prime(q);
        let k = rng.gen_range(1..=8usize);
        let roots: Vec<Rational> = (0..k)
            .map(|_| p_power(p, rng.gen_range(-3i64..=3)) * int(rng.gen_range(-9i64..=9)))
            .collect();
        let lc = p_power(p, rng.gen_range(-2i64..=2)) * int(if rng.gen_bool(0.5) { 1 } else { -1 });
        let f = roots.iter().fold(QPoly::new(vec![lc.clone()]), |acc, a| acc.mul(&QPoly::linear(a.clone())));
        let r_exp = int(rng.gen_range(-2i64..=2));
        let pts: Vec<BerkovichPoint> = (0..10)
            .map(|_| {
                let c = p_power(p, rng.gen_range(-4i64..=4)) * int(rng.gen_range(-5i64..=5));
                BerkovichPoint::new(c, Rational::new(BigInt::from(rng.gen_range(-12i64..=12)), BigInt::from(rng.gen_range(1i64..=3))))
            })
            .collect();
        match bernstein_walsh_check(&f, p, &r_exp, &pts) {
            Err(e) => bad.push(format!("p-adic case {case}: {e}")),
            Ok(rep) => {
                let norm = log_abs_from_roots(&lc, &roots, &int(0), &r_exp, p);
                if rep.norm_exponent != norm {
                    bad.push(format!("p-adic case {case}: norm {} != {norm}", rep.norm_exponent));
                }
                for s in &rep.samples {
                    let want = log_abs_from_roots(&lc, &roots, &s.point.center, &s.point.radius_exponent, p);
                    if s.lhs != want || s.slack.is_negative() {
                        bad.push(format!("p-adic case {case}: sample {}", s.point));
                    }
                    samples_checked += 1;
                }
            }
        }
    }
    for case in 0..200 {
        let k = rng.gen_range(1..=40usize);
        let c: Vec<i64> = (0..=k).map(|_| rng.gen_range(-20i64..=20)).collect();
        let mut c = c;
        if c[k] == 0 {
            c[k] = 1;
        }
        let f = QPoly::from_ints(&c);
        let radius = rng.gen_range(0.5..2.0);
        let zs: Vec<Complex64> =
            (0..10).map(|_| Complex64::from_polar(rng.gen_range(0.0..3.0 * radius), rng.gen_range(0.0..6.3))).collect();
        let rep = bernstein_walsh_complex(&f, radius, &zs, 1e-9).unwrap();
        if rep.violations() > 0 {
            bad.push(format!("complex case {case}: {} violations", rep.violations()));
        }
        for s in &rep.samples {
            let direct = c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * s.z + a as f64).norm().ln();
            if (direct - s.lhs).abs() > 1e-9 * direct.abs().max(1.0) && direct.is_finite() {
                bad.push(format!("complex case {case}: ln|f(z)| {} vs direct {direct}", s.lhs));
            }
            samples_checked += 1;
        }
    }
    verdict(
        "Bernstein-Walsh inequality",
        bad.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(10)),
        &if bad.is_empty() {
            format!("200 + 200 instances, {samples_checked} samples, no violation")
        } else {
            bad.join("; ")
        },
    );
}

fn config_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

#[test]
fn determinism() {
    let t = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut compared = 0usize;
    let mut bad = Vec::new();
    let mut configs: Vec<_> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    configs.sort();
    for path in &configs {
        let cfg = ExperimentConfig::load(path).unwrap();
        let name = path.file_stem().unwrap();
        let ra = run(&cfg, Some(&a.path().join(name))).unwrap();
        let rb = run(&cfg, Some(&b.path().join(name))).unwrap();
        for (fa, fb) in ra.files.iter().zip(&rb.files) {
            if std::fs::read(fa).unwrap() != std::fs::read(fb).unwrap() {
                bad.push(fa.display().to_string());
            }
            compared += 1;
        }
    }
    verdict(
        "determinism",
        bad.is_empty() && compared > 0,
        t.elapsed(),
        None,
        &if bad.is_empty() {
            format!("{} configs run twice, {compared} output files byte-identical", configs.len())
        } else {
            format!("differing outputs: {}", bad.join(", "))
        },
    );
}
