//! The verification scenarios, their checks and the report format.
//!
//! Every check corresponds to one acceptance criterion. A check is made of
//! parts, each with its own measured error, tolerance and kind (absolute or
//! relative); the check passes when all parts do.

mod checks;
pub mod sampling;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const REPORT_VERSION: &str = "1";

/// The named scenarios of the `verify` CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    TstarS1,
    BottR2,
    ProductC2,
    Rank2Thom,
    Rank2RiemannRoch,
    AppendixBounds,
    S2Euler,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::BottR2,
        Scenario::TstarS1,
        Scenario::ProductC2,
        Scenario::Rank2Thom,
        Scenario::Rank2RiemannRoch,
        Scenario::AppendixBounds,
        Scenario::S2Euler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::TstarS1 => "tstar_s1",
            Scenario::BottR2 => "bott_r2",
            Scenario::ProductC2 => "product_c2",
            Scenario::Rank2Thom => "rank2_thom",
            Scenario::Rank2RiemannRoch => "rank2_riemann_roch",
            Scenario::AppendixBounds => "appendix_bounds",
            Scenario::S2Euler => "s2_euler",
        }
    }

    /// The checks of this scenario, in report order.
    pub fn checks(self) -> &'static [CheckId] {
        use CheckId::*;
        match self {
            Scenario::BottR2 => &[BottBeta, BottIntegrals],
            Scenario::TstarS1 => &[Tstar],
            Scenario::ProductC2 => &[Multiplicativity, PropertySuites],
            Scenario::Rank2Thom => &[ThomNormalization, Rank2ClosedForms],
            Scenario::Rank2RiemannRoch => &[RiemannRoch],
            Scenario::AppendixBounds => &[ExponentialEngines, AppendixBound],
            Scenario::S2Euler => &[S2Euler],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// One check per acceptance criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    BottBeta,
    BottIntegrals,
    Tstar,
    Multiplicativity,
    ThomNormalization,
    Rank2ClosedForms,
    RiemannRoch,
    ExponentialEngines,
    AppendixBound,
    PropertySuites,
    S2Euler,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::BottBeta,
        CheckId::BottIntegrals,
        CheckId::Tstar,
        CheckId::Multiplicativity,
        CheckId::ThomNormalization,
        CheckId::Rank2ClosedForms,
        CheckId::RiemannRoch,
        CheckId::ExponentialEngines,
        CheckId::AppendixBound,
        CheckId::PropertySuites,
        CheckId::S2Euler,
    ];

    /// Number of the acceptance criterion, 1 to 11.
    pub fn criterion(self) -> u8 {
        CheckId::ALL.iter().position(|&c| c == self).expect("listed") as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckId::BottBeta => "bott_beta",
            CheckId::BottIntegrals => "bott_integrals",
            CheckId::Tstar => "tstar_beta_and_integral",
            CheckId::Multiplicativity => "c2_multiplicativity",
            CheckId::ThomNormalization => "thom_normalization",
            CheckId::Rank2ClosedForms => "rank2_closed_forms",
            CheckId::RiemannRoch => "riemann_roch_pointwise",
            CheckId::ExponentialEngines => "exponential_engines",
            CheckId::AppendixBound => "appendix_bound",
            CheckId::PropertySuites => "property_suites",
            CheckId::S2Euler => "s2_euler_number",
        }
    }

    /// Criterion 11 is reported but does not decide the exit status.
    pub fn gating(self) -> bool {
        self != CheckId::S2Euler
    }
}

/// Run parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    /// Overrides the Gauss–Legendre order per panel of compact integrals, the
    /// Gauss–Hermite order of Gaussian ones and the simplex order of the Volterra series.
    pub quad_order: Option<usize>,
    pub parallel: bool,
    /// When false, `runtime_ms` is reported as 0 so reports are byte-identical across runs.
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 1, tol_scale: 1.0, quad_order: None, parallel: false, timings: true }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(Error::Config(format!("tol-scale must be positive, got {}", self.tol_scale)));
        }
        if self.quad_order == Some(0) {
            return Err(Error::Config("quad-order must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Abs,
    Rel,
}

/// One measured quantity of a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Part {
    pub name: String,
    pub kind: ErrorKind,
    pub err: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Part {
    pub fn new(name: impl Into<String>, kind: ErrorKind, err: f64, tol: f64) -> Self {
        Part { name: name.into(), kind, err, tol, passed: err <= tol }
    }

    pub fn abs(name: impl Into<String>, err: f64, tol: f64) -> Self {
        Self::new(name, ErrorKind::Abs, err, tol)
    }

    pub fn rel(name: impl Into<String>, err: f64, tol: f64) -> Self {
        Self::new(name, ErrorKind::Rel, err, tol)
    }

    fn scaled(mut self, s: f64) -> Self {
        self.tol *= s;
        self.passed = self.err <= self.tol;
        self
    }
}

/// Outcome of one check.
///
/// `tol` is the tolerance of the first part; `abs_err` and `rel_err` are the
/// worst part errors of that kind, rescaled to `tol` when parts have different
/// tolerances. NaN errors count as failures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    pub criterion: u8,
    pub gating: bool,
    pub parts: Vec<Part>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn from_parts(id: CheckId, parts: Vec<Part>, runtime_ms: f64) -> Self {
        let tol = parts.first().map_or(0.0, |p| p.tol);
        let worst = |kind| {
            parts.iter().filter(|p| p.kind == kind).map(|p| p.err * tol / p.tol).fold(0.0, |a: f64, b| {
                if b.is_nan() {
                    f64::NAN
                } else {
                    a.max(b)
                }
            })
        };
        let passed = !parts.is_empty() && parts.iter().all(|p| p.passed);
        CheckResult {
            check_id: id.name().to_string(),
            abs_err: worst(ErrorKind::Abs),
            rel_err: worst(ErrorKind::Rel),
            tol,
            passed,
            runtime_ms,
            criterion: id.criterion(),
            gating: id.gating(),
            parts,
            error: None,
        }
    }

    fn failed(id: CheckId, e: Error, runtime_ms: f64) -> Self {
        let mut r = Self::from_parts(id, Vec::new(), runtime_ms);
        r.abs_err = f64::NAN;
        r.rel_err = f64::NAN;
        r.error = Some(e.to_string());
        r
    }
}

/// Runs one check.
pub fn run_check(id: CheckId, config: &Config) -> CheckResult {
    let start = Instant::now();
    let outcome = checks::run(id, config);
    let ms = if config.timings { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    match outcome {
        Ok(parts) => {
            let parts = parts.into_iter().map(|p| p.scaled(config.tol_scale)).collect();
            CheckResult::from_parts(id, parts, ms)
        }
        Err(e) => CheckResult::failed(id, e, ms),
    }
}

fn run_checks(ids: &[CheckId], config: &Config) -> Vec<CheckResult> {
    if config.parallel {
        ids.par_iter().map(|&id| run_check(id, config)).collect()
    } else {
        ids.iter().map(|&id| run_check(id, config)).collect()
    }
}

/// Runs every check of a scenario.
pub fn run_scenario(name: Scenario, config: &Config) -> Result<Vec<CheckResult>> {
    config.validate()?;
    Ok(run_checks(name.checks(), config))
}

/// Runs `name`, or every scenario for `"all"`.
pub fn run_named(name: &str, config: &Config) -> Result<Report> {
    config.validate()?;
    let checks = if name == "all" {
        let ids: Vec<CheckId> = Scenario::ALL.iter().flat_map(|s| s.checks().iter().copied()).collect();
        run_checks(&ids, config)
    } else {
        run_scenario(name.parse()?, config)?
    };
    Ok(Report::new(name, config.seed, checks))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl Report {
    /// `passed` ignores non-gating checks.
    pub fn new(scenario: &str, seed: u64, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed || !c.gating);
        Report { version: REPORT_VERSION.to_string(), scenario: scenario.to_string(), seed, checks, passed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

/// Serializes a report.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec(report).expect("report is serializable");
            out.push(b'\n');
            out
        }
        Format::Markdown => {
            let mut s = format!(
                "# Verification report\n\nscenario `{}`, seed {}, overall **{}**\n\n",
                report.scenario,
                report.seed,
                if report.passed { "PASS" } else { "FAIL" }
            );
            s.push_str("| # | check | abs_err | rel_err | tol | result | ms |\n|---|---|---|---|---|---|---|\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {}{} | {:.0} |\n",
                    c.criterion,
                    c.check_id,
                    sci(c.abs_err),
                    sci(c.rel_err),
                    sci(c.tol),
                    if c.passed { "pass" } else { "FAIL" },
                    if c.gating { "" } else { " (non-gating)" },
                    c.runtime_ms
                ));
            }
            for c in report.checks.iter().filter(|c| c.error.is_some()) {
                s.push_str(&format!("\n`{}` aborted: {}\n", c.check_id, c.error.as_deref().unwrap_or("")));
            }
            s.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        let r = Report::new("bott_r2", 1, Vec::new());
        let json = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        assert!(json.contains(r#""checks":[],"passed":true"#), "{json}");
        assert!(json.starts_with(r#"{"version":"1","scenario":"bott_r2","seed":1"#));
    }

    #[test]
    fn failing_part_fails_report() {
        let c = CheckResult::from_parts(
            CheckId::BottBeta,
            vec![Part::rel("a", 1e-10, 1e-8), Part::abs("b", 2e-6, 1e-6)],
            0.0,
        );
        assert!(!c.passed);
        assert!((c.abs_err - 2e-8).abs() < 1e-20);
        let r = Report::new("all", 3, vec![c.clone()]);
        assert!(!r.passed);
        let md = String::from_utf8(emit_report(&r, Format::Markdown)).unwrap();
        assert_eq!(md.lines().filter(|l| l.starts_with("| 1 |")).count(), 1);
    }

    #[test]
    fn non_gating_failure_keeps_report_passing() {
        let c = CheckResult::from_parts(CheckId::S2Euler, vec![Part::rel("euler", 1.0, 1e-4)], 0.0);
        assert!(Report::new("s2_euler", 1, vec![c]).passed);
    }

    #[test]
    fn ids_cover_criteria_once() {
        let mut seen: Vec<CheckId> = Scenario::ALL.iter().flat_map(|s| s.checks().iter().copied()).collect();
        seen.sort_by_key(|c| c.criterion());
        assert_eq!(seen, CheckId::ALL.to_vec());
        assert_eq!("tstar_s1".parse::<Scenario>(), Ok(Scenario::TstarS1));
        assert!(matches!("torus".parse::<Scenario>(), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn config_validation() {
        let bad = Config { tol_scale: 0.0, ..Config::default() };
        assert!(matches!(run_scenario(Scenario::S2Euler, &bad), Err(Error::Config(_))));
    }
}
