//! Runs one experiment config and writes its CSV table and JSON summary.
//!
//! Outputs depend only on the config (seed included): rows are computed in
//! parallel but always assembled in `n` order, JSON objects have sorted
//! keys and no timings are recorded.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value as Json};

use crate::complex::{jentzsch_szego_experiment, JsParams};
use crate::conditions::{complex_conditions, padic_conditions, ConditionReport, CONDITION_CSV_HEADER};
use crate::config::{ExperimentConfig, Mode};
use crate::counterexample::{build_sequence, radius_one_witness, sequence_degree, verify};
use crate::error::{Error, Result};
use crate::exact::{Prime, Rational};
use crate::factor::{sequence_stats, SEQUENCE_CSV_HEADER};
use crate::padic::{
    default_probes, equidistribution_report, gauss_seminorm, BerkovichPoint, Disk, EquidistributionReport, Probe,
};
use crate::poly::QPoly;
use crate::series::SeriesSpec;

/// What a run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Short human-readable result lines.
    pub lines: Vec<String>,
    pub summary: Json,
}

fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], records: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in records {
        w.write_record(r.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, value: &Json) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn truncations(spec: &SeriesSpec, orders: &[usize]) -> Vec<(usize, QPoly)> {
    orders.iter().map(|&n| (n, spec.truncate(n).poly)).collect()
}

fn q(r: &Rational) -> Json {
    Json::String(r.to_string())
}

/// `log_p ||f||` at the Gauss point of `E(0, R)`, per row.
fn padic_log_norms(fs: &[(usize, QPoly)], p: Prime, r_exponent: &Rational) -> Vec<Json> {
    let g = BerkovichPoint::gauss(r_exponent.clone());
    fs.iter()
        .map(|(n, f)| {
            let e = gauss_seminorm(f, &g, p).exponent().cloned();
            json!({ "n": n, "log_norm_over_log_p": e.as_ref().map(q) })
        })
        .collect()
}

fn equidistribution_json(rep: &EquidistributionReport) -> Json {
    json!({
        "verdict": rep.verdict.as_str(),
        "head_spread": q(&rep.head_spread),
        "tail_spread": q(&rep.tail_spread),
        "probes": rep.probes.iter().map(|s| json!({
            "probe": s.probe,
            "verdict": s.verdict.as_str(),
            "head_max_count": s.head_max_count,
            "tail_max_count": s.tail_max_count,
            "tail_stable": s.tail_stable,
        })).collect::<Vec<_>>(),
        "rows": rep.rows.iter().map(|r| json!({
            "n": r.n,
            "degree": r.degree,
            "boundary_mass": q(&r.boundary_mass),
            "spread": q(&r.spread),
            "masses": r.probes.iter().map(|m| q(&m.mass)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

struct Outputs {
    dir: PathBuf,
    csv: PathBuf,
    summary: PathBuf,
}

fn outputs(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<Outputs> {
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => PathBuf::from(cfg.output.dir.as_deref().unwrap_or("out")),
    };
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join(cfg.output.csv.as_deref().unwrap_or(cfg.mode.csv_name()));
    let summary = dir.join(cfg.output.summary.as_deref().unwrap_or("summary.json"));
    Ok(Outputs { dir, csv, summary })
}

/// Runs `cfg`, writing into `out_dir` (or the config's own directory).
/// Files are written before an invariant failure is reported, so a failed
/// run can still be inspected.
pub fn run(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunReport> {
    let out = outputs(cfg, out_dir)?;
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let mut files = vec![out.csv.clone(), out.summary.clone()];
    let mut summary = json!({ "mode": cfg.mode.as_str(), "seed": cfg.seed });
    let obj = summary.as_object_mut().expect("object");

    match cfg.mode {
        Mode::PadicEquidistribution => {
            let spec = cfg.series_spec()?;
            let (p, r) = (cfg.prime()?, cfg.r_exponent_value()?);
            let orders = cfg.orders()?;
            let probes = cfg.probe_list()?.unwrap_or_else(|| default_probes(p, &r));
            let fs = truncations(&spec, &orders);
            let rep = equidistribution_report(&fs, p, &r, &probes)?;
            write_csv(&out.csv, &crate::padic::CSV_HEADER, &rep.csv_records())?;
            let tate = spec.tate_membership(p, &r);
            obj.insert("series".into(), json!(spec.describe()));
            obj.insert("p".into(), json!(p.get()));
            obj.insert("r_exponent".into(), q(&r));
            obj.insert("orders".into(), json!(orders));
            obj.insert("tate_membership".into(), json!({ "status": tate.status, "witness": tate.witness }));
            obj.insert("report".into(), equidistribution_json(&rep));
            obj.insert("log_norms".into(), Json::Array(padic_log_norms(&fs, p, &r)));
            lines.push(format!("{} over Q_{} at v_R = {r}: verdict {}", spec.name(), p.get(), rep.verdict.as_str()));
            for s in &rep.probes {
                lines.push(format!("  probe {}: {}", s.probe, s.verdict.as_str()));
            }
        }
        Mode::PadicFactors => {
            let spec = cfg.series_spec()?;
            let p = cfg.prime()?;
            let d = cfg.d.expect("validated");
            let orders = cfg.orders()?;
            let stats = sequence_stats(&spec, p, &orders, d, cfg.seed)?;
            write_csv(&out.csv, &SEQUENCE_CSV_HEADER, &stats.csv_records())?;
            let all_small_zero = stats.rows.iter().all(|r| r.leq_d_upper == 0);
            let max_deg_is_n = stats.rows.iter().all(|r| r.max_degree_lower_bound == r.degree);
            obj.insert("series".into(), json!(spec.describe()));
            obj.insert("p".into(), json!(p.get()));
            obj.insert("d".into(), json!(d));
            obj.insert("orders".into(), json!(orders));
            obj.insert("leq_d_upper_all_zero".into(), json!(all_small_zero));
            obj.insert("max_degree_lower_bound_equals_degree".into(), json!(max_deg_is_n));
            obj.insert(
                "rows".into(),
                Json::Array(
                    stats
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "degree": r.degree,
                                "qp_roots": r.qp_roots.count,
                                "qp_certainty": r.qp_roots.certainty.as_str(),
                                "leq_d_lower": r.leq_d_lower,
                                "leq_d_upper": r.leq_d_upper,
                                "max_degree_lower_bound": r.max_degree_lower_bound,
                            })
                        })
                        .collect(),
                ),
            );
            lines.push(format!(
                "{} over Q_{}: {} rows; degree<={d} upper count zero on all: {all_small_zero}; \
                 factor degree bound = n on all: {max_deg_is_n}",
                spec.name(),
                p.get(),
                stats.rows.len()
            ));
        }
        Mode::ComplexJs => {
            let spec = cfg.series_spec()?;
            let radius = cfg.radius.expect("validated");
            let orders = cfg.orders()?;
            let o = cfg.complex_options();
            let params = JsParams { epsilon: o.epsilon, weyl_terms: o.weyl_terms, grid: o.grid, tol: o.tol, seed: cfg.seed };
            let exp = jentzsch_szego_experiment(&spec, radius, &orders, &params)?;
            write_csv(&out.csv, &exp.csv_header().iter().map(String::as_str).collect::<Vec<_>>(), &exp.csv_records())?;
            obj.insert("series".into(), json!(spec.describe()));
            obj.insert("radius".into(), json!(radius));
            obj.insert("orders".into(), json!(orders));
            obj.insert("options".into(), serde_json::to_value(o)?);
            obj.insert(
                "arc_discrepancy_trend".into(),
                json!({ "decreased": exp.arc_discrepancy_trend.decreased, "monotone": exp.arc_discrepancy_trend.monotone }),
            );
            obj.insert(
                "jentzsch_gap_trend".into(),
                json!({ "decreased": exp.jentzsch_gap_trend.decreased, "monotone": exp.jentzsch_gap_trend.monotone }),
            );
            obj.insert(
                "rows".into(),
                Json::Array(
                    exp.rows
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "degree": r.degree,
                                "annulus_mass": r.stats.annulus_mass,
                                "interior_mass": r.stats.interior_mass,
                                "weyl_abs": r.stats.weyl.iter().map(|s| s.norm()).collect::<Vec<_>>(),
                                "arc_discrepancy": r.stats.arc_discrepancy,
                                "jentzsch_gap": r.stats.jentzsch_gap,
                                "residual_bound": r.residual_bound,
                            })
                        })
                        .collect(),
                ),
            );
            lines.push(format!(
                "{} at R = {radius}: {} rows; arc discrepancy strictly decreasing: {}",
                spec.name(),
                exp.rows.len(),
                exp.arc_discrepancy_trend.monotone
            ));
        }
        Mode::Counterexample => {
            let levels = cfg.levels.expect("validated");
            let seq = build_sequence(levels)?;
            let rows = verify(&seq)?;
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.degree.to_string(),
                        r.expected_degree.to_string(),
                        r.monic.to_string(),
                        r.vanishing_order.to_string(),
                        r.required_order.to_string(),
                        r.mass_at_one.clone(),
                        r.half_mass.to_string(),
                        r.congruent_to_next.map_or("".into(), |b| b.to_string()),
                    ]
                })
                .collect();
            write_csv(
                &out.csv,
                &[
                    "n",
                    "deg",
                    "expected_deg",
                    "monic",
                    "vanishing_order",
                    "required_order",
                    "mass_at_one",
                    "half_mass",
                    "congruent_to_next",
                ],
                &records,
            )?;
            let seq_path = out.dir.join("sequence.json");
            let seq_json: Vec<Json> = seq
                .polys
                .iter()
                .enumerate()
                .map(|(n, f)| json!({ "n": n, "degree": f.degree(), "coefficients": f.to_decimal_strings() }))
                .collect();
            write_json(&seq_path, &Json::Array(seq_json))?;
            files.push(seq_path);
            for r in rows.iter().filter(|r| !r.ok()) {
                failures.push(format!("counterexample member {} fails its construction invariants", r.n));
            }
            let witness = radius_one_witness(&seq);
            if !witness {
                failures.push("a_{d_n} = 1 fails for some member".into());
            }
            obj.insert("levels".into(), json!(levels));
            obj.insert("rows".into(), serde_json::to_value(&rows)?);
            obj.insert("radius_one_witness".into(), json!(witness));
            if let Some(pv) = cfg.p {
                let p = Prime::new(pv)?;
                let zero = Rational::from_integer(BigInt::from(0));
                let one = Rational::from_integer(BigInt::from(1));
                let probe = Probe::new(Disk::closed(one.clone(), one));
                let fs: Vec<(usize, QPoly)> =
                    seq.polys.iter().enumerate().map(|(n, f)| (sequence_degree(n), f.to_qpoly())).collect();
                let rep = equidistribution_report(&fs, p, &zero, std::slice::from_ref(&probe))?;
                let half = Rational::new(BigInt::from(1), BigInt::from(2));
                for r in &rep.rows {
                    if r.probes[0].mass < half {
                        failures.push(format!("degree {}: mass of {} below 1/2", r.n, probe.id));
                    }
                }
                obj.insert("p".into(), json!(pv));
                obj.insert("anti_equidistribution".into(), equidistribution_json(&rep));
            }
            let ok = rows.iter().all(|r| r.ok());
            lines.push(format!(
                "counterexample, {} members (degrees up to {}): invariants {}",
                rows.len(),
                rows.last().map_or(0, |r| r.degree),
                if ok { "hold" } else { "FAIL" }
            ));
        }
        Mode::ConditionReport => {
            let spec = cfg.series_spec()?;
            let orders = cfg.orders()?;
            let fs = truncations(&spec, &orders);
            let rep: ConditionReport = if let Some(radius) = cfg.radius {
                let o = cfg.complex_options();
                complex_conditions(&fs, radius, o.interior_epsilon, o.tol, cfg.seed)?
            } else {
                let (p, r) = (cfg.prime()?, cfg.r_exponent_value()?);
                if let Some(probes) = cfg.probe_list()? {
                    let eq = equidistribution_report(&fs, p, &r, &probes)?;
                    obj.insert("probes".into(), equidistribution_json(&eq));
                }
                obj.insert("p".into(), json!(p.get()));
                obj.insert("r_exponent".into(), q(&r));
                padic_conditions(&fs, p, &r)?
            };
            write_csv(&out.csv, &CONDITION_CSV_HEADER, &rep.csv_records())?;
            obj.insert("series".into(), json!(spec.describe()));
            obj.insert("orders".into(), json!(orders));
            obj.insert("conditions".into(), serde_json::to_value(&rep)?);
            lines.push(format!(
                "{} ({}): norm growth {}, interior mass {}, leading coefficient {}",
                spec.name(),
                rep.place,
                rep.norm_growth,
                rep.interior_mass,
                rep.leading_coefficient
            ));
        }
    }

    obj.insert("invariant_failures".into(), json!(failures));
    write_json(&out.summary, &summary)?;
    if !failures.is_empty() {
        return Err(Error::invariant(failures.join("; ")));
    }
    Ok(RunReport { files, lines, summary })
}

/// Rewrites a config as a condition-report config over the same series,
/// orders and place. A counterexample config becomes the limit series at
/// the member degrees, over `Q_p` (default `p = 2`) at `R = 1`.
pub fn as_condition_config(cfg: &ExperimentConfig) -> Result<ExperimentConfig> {
    let mut c = cfg.clone();
    c.mode = Mode::ConditionReport;
    c.d = None;
    c.levels = None;
    c.output.csv = None;
    match cfg.mode {
        Mode::ConditionReport | Mode::PadicEquidistribution | Mode::ComplexJs => {}
        Mode::PadicFactors => {
            return Err(Error::validation("padic-factors configs carry no radius; add r_exponent and use condition-report"))
        }
        Mode::Counterexample => {
            let levels = cfg.levels.expect("validated");
            let degrees: Vec<usize> = (0..=levels).map(sequence_degree).collect();
            c.series = Some(crate::series::SeriesDescription {
                rule: "counterexample-limit".into(),
                name: None,
                c: None,
                p: None,
                coefficients: None,
            });
            c.p = Some(cfg.p.unwrap_or(2));
            c.r_exponent = Some("0".into());
            c.n = Some(crate::select::OrderRange::new(degrees[0], *degrees.last().unwrap()));
            c.subsequence = Some(crate::select::Subsequence::List { orders: degrees });
            c.probes = Some(vec![crate::config::ProbeSpec {
                center: "1".into(),
                radius_exponent: "1".into(),
                kind: crate::config::DiskKind::Closed,
            }]);
        }
    }
    let text = serde_json::to_string_pretty(&c)?;
    ExperimentConfig::parse(&text)
}

/// Condition report for any p-adic or complex config: the place comes
/// from the config (`p`/`r_exponent` or `radius`).
pub fn condition_report(cfg: &ExperimentConfig) -> Result<ConditionReport> {
    let spec = cfg.series_spec()?;
    let fs = truncations(&spec, &cfg.orders()?);
    if let Some(radius) = cfg.radius {
        let o = cfg.complex_options();
        complex_conditions(&fs, radius, o.interior_epsilon, o.tol, cfg.seed)
    } else {
        padic_conditions(&fs, cfg.prime()?, &cfg.r_exponent_value()?)
    }
}
