//! Experiment configuration files (JSON).
//!
//! Every field a mode does not use is rejected, so a config always says
//! exactly what was run. Errors carry the line of the offending key.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Prime, Rational};
use crate::padic::{Disk, Probe};
use crate::select::{OrderRange, Place, Subsequence};
use crate::series::{SeriesDescription, SeriesSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PadicEquidistribution,
    PadicFactors,
    ComplexJs,
    Counterexample,
    ConditionReport,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::PadicEquidistribution => "padic-equidistribution",
            Mode::PadicFactors => "padic-factors",
            Mode::ComplexJs => "complex-js",
            Mode::Counterexample => "counterexample",
            Mode::ConditionReport => "condition-report",
        }
    }

    /// `(required, optional)` top-level keys besides `mode`, `seed`, `output`.
    fn fields(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Mode::PadicEquidistribution => (&["series", "p", "r_exponent", "n"], &["subsequence", "probes"]),
            Mode::PadicFactors => (&["series", "p", "n", "d"], &["subsequence"]),
            Mode::ComplexJs => (&["series", "radius", "n"], &["subsequence", "complex"]),
            Mode::Counterexample => (&["levels"], &["p"]),
            Mode::ConditionReport => (&["series", "n"], &["subsequence", "p", "r_exponent", "radius", "complex", "probes"]),
        }
    }

    /// Default CSV file name.
    pub fn csv_name(self) -> &'static str {
        match self {
            Mode::PadicEquidistribution => "equidistribution.csv",
            Mode::PadicFactors => "factors.csv",
            Mode::ComplexJs => "complex_js.csv",
            Mode::Counterexample => "counterexample.csv",
            Mode::ConditionReport => "conditions.csv",
        }
    }
}

/// A probe disk: `{"center": "1", "radius_exponent": "0", "kind": "open"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub center: String,
    pub radius_exponent: String,
    pub kind: DiskKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiskKind {
    Open,
    Closed,
}

impl ProbeSpec {
    pub fn build(&self) -> Result<Probe> {
        let c = parse_rational(&self.center)?;
        let r = parse_rational(&self.radius_exponent)?;
        Ok(Probe::new(match self.kind {
            DiskKind::Open => Disk::open(c, r),
            DiskKind::Closed => Disk::closed(c, r),
        }))
    }
}

/// Root-finder and statistics knobs; every default is listed here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComplexOptions {
    /// Half-width of the annulus `||z| - R| <= epsilon`.
    pub epsilon: f64,
    /// Number of Weyl sums `S_1..S_M`.
    pub weyl_terms: usize,
    /// Boundary grid for the Jentzsch gap.
    pub grid: usize,
    /// Cluster merge tolerance of the root finder.
    pub tol: f64,
    /// Interior mass is measured on `|z| <= R - interior_epsilon`.
    pub interior_epsilon: f64,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        ComplexOptions { epsilon: 1e-8, weyl_terms: 8, grid: 256, tol: 1e-6, interior_epsilon: 0.05 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// Output directory; `--out` overrides it. Defaults to `out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// `v_R` with `R = p^(-v_R)`, as `"a/b"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_exponent: Option<String>,
    /// Complex radius `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OrderRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsequence: Option<Subsequence>,
    /// Factor degree cutoff.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<ProbeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexOptions>,
    /// Number of construction steps in counterexample mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

/// 1-based line of the `nth` occurrence of `"key":` in `text`.
fn key_line(text: &str, key: &str, nth: usize) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .enumerate()
        .flat_map(|(i, line)| {
            line.match_indices(&needle)
                .filter(|(pos, _)| line[pos + needle.len()..].trim_start().starts_with(':'))
                .map(move |_| i + 1)
                .collect::<Vec<_>>()
        })
        .nth(nth)
}

fn at(text: &str, key: &str, e: Error) -> Error {
    at_nth(text, key, 0, e)
}

fn at_nth(text: &str, key: &str, nth: usize, e: Error) -> Error {
    let msg = match e {
        Error::Validation(m) => m,
        other => return other,
    };
    match key_line(text, key, nth) {
        Some(l) => Error::validation(format!("line {l}: {msg}")),
        None => Error::validation(msg),
    }
}

impl ExperimentConfig {
    /// Parses and validates a config file's text.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            Error::validation(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate_with(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Validation(m) => Error::validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |b: bool, k: &'static str| {
            if b {
                out.push(k)
            }
        };
        mark(self.series.is_some(), "series");
        mark(self.p.is_some(), "p");
        mark(self.r_exponent.is_some(), "r_exponent");
        mark(self.radius.is_some(), "radius");
        mark(self.n.is_some(), "n");
        mark(self.subsequence.is_some(), "subsequence");
        mark(self.d.is_some(), "d");
        mark(self.probes.is_some(), "probes");
        mark(self.complex.is_some(), "complex");
        mark(self.levels.is_some(), "levels");
        out
    }

    /// Validates against the original text so that errors point at lines.
    pub fn validate_with(&self, text: &str) -> Result<()> {
        let mode = self.mode.as_str();
        let (required, optional) = self.mode.fields();
        for k in required {
            if !self.present().contains(k) {
                return Err(at(text, "mode", Error::validation(format!("mode {mode} requires field \"{k}\""))));
            }
        }
        for k in self.present() {
            if !required.contains(&k) && !optional.contains(&k) {
                return Err(at(text, k, Error::validation(format!("field \"{k}\" is not used by mode {mode}"))));
            }
        }
        if self.mode == Mode::ConditionReport {
            let padic = self.p.is_some() || self.r_exponent.is_some() || self.probes.is_some();
            let complex = self.radius.is_some() || self.complex.is_some();
            if padic == complex {
                return Err(at(
                    text,
                    "mode",
                    Error::validation("condition-report needs either p and r_exponent (p-adic) or radius (complex)"),
                ));
            }
            if padic && (self.p.is_none() || self.r_exponent.is_none()) {
                return Err(at(text, "mode", Error::validation("p-adic condition-report needs both p and r_exponent")));
            }
        }
        if let Some(s) = &self.series {
            s.build().map_err(|e| at(text, "rule", e))?;
        }
        if let Some(p) = self.p {
            Prime::new(p).map_err(|e| at(text, "p", e))?;
        }
        if let Some(r) = &self.r_exponent {
            parse_rational(r).map_err(|e| at(text, "r_exponent", e))?;
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(at(text, "radius", Error::validation(format!("radius must be positive, got {r}"))));
            }
        }
        if let Some(n) = &self.n {
            n.validate().map_err(|e| at(text, "n", e))?;
        }
        if let Some(s) = &self.subsequence {
            s.validate().map_err(|e| at(text, "subsequence", e))?;
        }
        if self.d == Some(0) {
            return Err(at(text, "d", Error::validation("d must be at least 1")));
        }
        if let Some(c) = &self.complex {
            if !(c.epsilon >= 0.0 && c.tol > 0.0 && c.interior_epsilon >= 0.0 && c.grid > 0 && c.weyl_terms > 0) {
                return Err(at(text, "complex", Error::validation("complex options must be positive")));
            }
        }
        if let (Some(probes), Some(p), Some(r)) = (&self.probes, self.p, &self.r_exponent) {
            let p = Prime::new(p)?;
            let r = parse_rational(r)?;
            for (i, spec) in probes.iter().enumerate() {
                let probe = spec.build().map_err(|e| at_nth(text, "center", i, e))?;
                crate::padic::validate_probe(&probe.disk, &r, p).map_err(|e| at_nth(text, "center", i, e))?;
            }
        }
        Ok(())
    }

    pub fn series_spec(&self) -> Result<SeriesSpec> {
        self.series.as_ref().ok_or_else(|| Error::validation("missing series"))?.build()
    }

    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.p.ok_or_else(|| Error::validation("missing p"))?)
    }

    pub fn r_exponent_value(&self) -> Result<Rational> {
        parse_rational(self.r_exponent.as_deref().ok_or_else(|| Error::validation("missing r_exponent"))?)
    }

    pub fn complex_options(&self) -> ComplexOptions {
        self.complex.unwrap_or_default()
    }

    /// `Place` of the experiment, when it has one.
    pub fn place(&self) -> Result<Place> {
        if let Some(radius) = self.radius {
            return Ok(Place::Complex { radius });
        }
        Ok(Place::Padic { p: self.prime()?, r_exponent: self.r_exponent_value()? })
    }

    /// Orders selected by range and subsequence filter.
    pub fn orders(&self) -> Result<Vec<usize>> {
        let spec = self.series_spec()?;
        let range = self.n.ok_or_else(|| Error::validation("missing n"))?;
        let place = match self.mode {
            // the factor mode has no radius; the filter is read at R = 1
            Mode::PadicFactors => Place::Padic { p: self.prime()?, r_exponent: Rational::from_integer(0.into()) },
            _ => self.place()?,
        };
        let orders = self.subsequence.clone().unwrap_or_default().select(&spec, &range, &place)?;
        if orders.is_empty() {
            return Err(Error::validation("the subsequence filter selects no n in the range"));
        }
        Ok(orders)
    }

    pub fn probe_list(&self) -> Result<Option<Vec<Probe>>> {
        self.probes.as_ref().map(|ps| ps.iter().map(ProbeSpec::build).collect()).transpose()
    }
}
