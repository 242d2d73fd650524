//! The `W4` density curve of the layered construction, and diagnostic
//! batteries comparing a finite tournament against the carousel and
//! quasi-random limit profiles.
//!
//! Reports only emit residuals and threshold verdicts. The thresholds are
//! engineering defaults, not derived bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::counting::{
    arc_flag_distribution, arc_moment_sums, binomial, ks_distance, quad_counts,
    sampled_quad_densities, triple_counts, ArcMomentSums, FlagSelector, QuadCounts,
    ReferenceDistribution,
};
use crate::error::{Error, Result};
use crate::generators::{layered, LayeredSpec};
use crate::loctrans::balance_deficiency;
use crate::tournament::{SmallClass4, Tournament};

/// A point on the curve `t ↦ (1−t)³ (t + (1−t)/8) / (1 − t⁴)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W4Curve {
    pub t: f64,
    pub value: f64,
}

/// Limiting `W4` density of the layered construction with shrink ratio `t`.
pub fn phi_t_w4(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::OutOfDomain(t));
    }
    let s = 1.0 - t;
    Ok(s.powi(3) * (t + s / 8.0) / (1.0 - t.powi(4)))
}

/// Closed-form maximizer `(2·3^{2/3} − 3^{1/3} − 2) / 5`.
pub fn phi_t_argmax_closed_form() -> f64 {
    (2.0 * 3f64.powf(2.0 / 3.0) - 3f64.powf(1.0 / 3.0) - 2.0) / 5.0
}

/// Closed-form maximum `1 + (3^{5/3} − 3^{7/3}) / 8`.
pub fn phi_t_max_closed_form() -> f64 {
    1.0 + (3f64.powf(5.0 / 3.0) - 3f64.powf(7.0 / 3.0)) / 8.0
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of [`phi_t_w4`] on `(0, 1)`, run
/// until the bracket is narrower than `tolerance`. The curve is unimodal on
/// the open interval.
pub fn maximize_phi_t(tolerance: f64) -> Result<W4Curve> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tolerance} must be positive"
        )));
    }
    let f = |t: f64| phi_t_w4(t).expect("interior point");
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tolerance {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let t = 0.5 * (a + b);
    Ok(W4Curve { t, value: f(t) })
}

/// `k` evenly spaced points `t_j = j / (k+1)`, `j = 1..=k`.
pub fn phi_t_grid(k: usize) -> Vec<W4Curve> {
    (1..=k)
        .map(|j| {
            let t = j as f64 / (k + 1) as f64;
            W4Curve { t, value: phi_t_w4(t).expect("interior point") }
        })
        .collect()
}

/// Sampled `W4` density of one layered tournament against the limit curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredSimulation {
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    pub samples: u64,
    pub layer_sizes: Vec<usize>,
    pub sampled_w4: f64,
    pub std_error: f64,
    pub phi_t: f64,
}

pub fn simulate_layered_w4(n: usize, t: f64, seed: u64, samples: u64) -> Result<LayeredSimulation> {
    let spec = LayeredSpec::new(n, t, seed)?;
    let tour = layered(&spec)?;
    let s = sampled_quad_densities(&tour, samples, seed)?;
    Ok(LayeredSimulation {
        n,
        t,
        seed,
        samples,
        layer_sizes: spec.layer_sizes()?,
        sampled_w4: s.density(SmallClass4::W4),
        std_error: s.std_error(SmallClass4::W4),
        phi_t: phi_t_w4(t)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Carousel,
    Random,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Carousel => "carousel",
            Self::Random => "random",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "carousel" => Ok(Self::Carousel),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidParameter(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    /// Outdegree slack, as a fraction of `n`, for the balance residual.
    pub eps: f64,
    /// Concentration window around 1/4 for the quasi-random flag residuals.
    pub delta: f64,
    /// Forces sampled order-4 densities with this many samples.
    pub samples: Option<u64>,
    pub seed: u64,
    pub bins: usize,
    /// Largest order counted exactly at order 4 when `samples` is unset.
    pub exact_limit: usize,
    /// Overrides the default pass threshold `max(0.02, 4/√n)`.
    pub threshold: Option<f64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            eps: 0.05,
            delta: 0.05,
            samples: None,
            seed: 0,
            bins: 20,
            exact_limit: 4000,
            threshold: None,
        }
    }
}

impl ReportConfig {
    pub const DEFAULT_SAMPLES: u64 = 1_000_000;

    pub fn threshold_for(&self, n: usize) -> f64 {
        self.threshold.unwrap_or_else(|| 0.02f64.max(4.0 / (n as f64).sqrt()))
    }

    /// Applies `key=value` lines (`eps`, `delta`, `samples`, `seed`, `bins`,
    /// `exact_limit`, `threshold`). Blank lines and `#` comments are skipped.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found {line:?}")))?;
            let value = value.trim();
            let bad = || err(format!("invalid value {value:?} for {}", key.trim()));
            match key.trim() {
                "eps" => self.eps = value.parse().map_err(|_| bad())?,
                "delta" => self.delta = value.parse().map_err(|_| bad())?,
                "samples" => self.samples = Some(value.parse().map_err(|_| bad())?),
                "seed" => self.seed = parse_seed(value).map_err(|_| bad())?,
                "bins" => self.bins = value.parse().map_err(|_| bad())?,
                "exact_limit" => self.exact_limit = value.parse().map_err(|_| bad())?,
                "threshold" => self.threshold = Some(value.parse().map_err(|_| bad())?),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps {} not in (0, 1)", self.eps)));
        }
        if !(self.delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta {} must be positive", self.delta)));
        }
        Ok(())
    }
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> std::result::Result<u64, std::num::ParseIntError> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub schema: u32,
    pub profile: Profile,
    pub n: usize,
    pub threshold: f64,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub pass: bool,
    /// Supporting statistics that are not residuals (means, plain moments, densities).
    pub statistics: BTreeMap<String, f64>,
    pub provenance: BTreeMap<String, Value>,
}

impl DiagnosticReport {
    fn new(profile: Profile, n: usize, config: &ReportConfig, mode: &str) -> Self {
        let mut provenance = BTreeMap::new();
        provenance.insert("eps".into(), config.eps.into());
        provenance.insert("delta".into(), config.delta.into());
        provenance.insert("seed".into(), config.seed.into());
        provenance.insert("mode".into(), mode.into());
        if mode == "sampled" {
            provenance.insert(
                "samples".into(),
                config.samples.unwrap_or(ReportConfig::DEFAULT_SAMPLES).into(),
            );
        }
        Self {
            schema: 1,
            profile,
            n,
            threshold: config.threshold_for(n),
            residuals: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            pass: true,
            statistics: BTreeMap::new(),
            provenance,
        }
    }

    fn record(&mut self, name: &str, value: f64, passes: bool) {
        self.residuals.insert(name.into(), value);
        self.verdicts.insert(name.into(), passes);
        self.pass &= passes;
    }

    fn record_abs(&mut self, name: &str, value: f64) {
        let passes = value <= self.threshold;
        self.record(name, value, passes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Names of the residuals that failed their verdict.
    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Order-4 densities, exact or sampled, plus the exact counts when available.
struct QuadDensities {
    p: [f64; 4],
    exact: Option<QuadCounts>,
}

impl QuadDensities {
    fn of(t: &Tournament, config: &ReportConfig) -> Result<(Self, &'static str)> {
        if config.samples.is_none() && t.order() <= config.exact_limit {
            let q = quad_counts(t)?;
            let p = SmallClass4::ALL.map(|c| q.density(c).value());
            Ok((Self { p, exact: Some(q) }, "exact"))
        } else {
            let samples = config.samples.unwrap_or(ReportConfig::DEFAULT_SAMPLES);
            let s = sampled_quad_densities(t, samples, config.seed)?;
            let p = SmallClass4::ALL.map(|c| s.density(c));
            Ok((Self { p, exact: None }, "sampled"))
        }
    }

    fn get(&self, c: SmallClass4) -> f64 {
        self.p[c as usize]
    }
}

/// Target of `E[g(g−1)] / ((n−2)(n−3))` as `(a, b)` in `a·p(TR4) + b·p(R4)`.
fn factorial_moment_target(sel: FlagSelector) -> (f64, f64) {
    match sel {
        FlagSelector::O | FlagSelector::I | FlagSelector::Tr => (1.0 / 6.0, 0.0),
        FlagSelector::C => (0.0, 1.0 / 6.0),
        FlagSelector::OI => (0.5, 1.0 / 6.0),
        FlagSelector::CTr => (1.0 / 6.0, 0.5),
    }
}

/// Integer form of the same target: `Σ g(g−1) = a·tr4 + b·r4`.
fn factorial_moment_target_int(sel: FlagSelector) -> (i128, i128) {
    match sel {
        FlagSelector::O | FlagSelector::I | FlagSelector::Tr => (2, 0),
        FlagSelector::C => (0, 2),
        FlagSelector::OI => (6, 2),
        FlagSelector::CTr => (2, 6),
    }
}

fn require_order(t: &Tournament, required: usize) -> Result<()> {
    if t.order() < required {
        Err(Error::OrderTooSmall { required, actual: t.order() })
    } else {
        Ok(())
    }
}

/// Residuals against the carousel profile: balanced, locally transitive,
/// `p(R4) = p(TR4) = 1/2`, `p(C3) = 1/4`, single flags uniform on `[0, 1/2]`,
/// flag sums uniform on `[0, 1]`, and the factorial second-moment identities.
pub fn quasi_carousel_report(t: &Tournament, config: &ReportConfig) -> Result<DiagnosticReport> {
    require_order(t, 5)?;
    config.validate()?;
    let n = t.order();
    let (quads, mode) = QuadDensities::of(t, config)?;
    let mut report = DiagnosticReport::new(Profile::Carousel, n, config, mode);
    let tri = triple_counts(t)?;
    let (p_tr4, p_w4, p_l4, p_r4) = (
        quads.get(SmallClass4::Tr4),
        quads.get(SmallClass4::W4),
        quads.get(SmallClass4::L4),
        quads.get(SmallClass4::R4),
    );

    report.record_abs("bal", balance_deficiency(t, config.eps)?);
    report.record_abs("lt", p_w4 + p_l4);
    report.record_abs("r4", (p_r4 - 0.5).abs());
    report.record_abs("t4r4", (p_tr4 - p_r4).abs());
    report.record_abs("c3", (tri.p_c3().value() - 0.25).abs());

    let sums = arc_moment_sums(t)?;
    let falling_norm = 12.0 * binomial(n as u64, 4) as f64;
    for sel in FlagSelector::ALL {
        let d = arc_flag_distribution(t, sel)?;
        let reference = if sel.is_combined() {
            ReferenceDistribution::UniformOnInterval { q: 1.0 }
        } else {
            ReferenceDistribution::UniformOnInterval { q: 0.5 }
        };
        report.record_abs(&format!("ks_{sel}"), ks_distance(&d, &reference)?);

        let m2 = match &quads.exact {
            Some(q) => {
                let (a, b) = factorial_moment_target_int(sel);
                let diff = sums.sum_falling(sel) as i128 - a * q.tr4 as i128 - b * q.r4 as i128;
                diff.unsigned_abs() as f64 / falling_norm
            }
            None => {
                let (a, b) = factorial_moment_target(sel);
                (d.factorial_second_moment().unwrap_or(0.0) - a * p_tr4 - b * p_r4).abs()
            }
        };
        report.record_abs(&format!("m2_{sel}"), m2);

        report.statistics.insert(format!("mean_{sel}"), d.mean());
        report.statistics.insert(format!("second_moment_{sel}"), d.second_moment());
        if let Some(fm) = d.factorial_second_moment() {
            report.statistics.insert(format!("factorial_moment_{sel}"), fm);
        }
    }
    insert_densities(&mut report, tri.p_c3().value(), &quads);
    Ok(report)
}

/// Residuals against the quasi-random profile: `p(C3) = 1/4`,
/// `p(TR4) + p(R4) = 3/4`, per-arc flags concentrated at 1/4, `p(W4) = p(L4)`
/// and `p(W4) ≤ 1/8`. `p2` and `w4cap` are signed.
pub fn quasi_random_report(t: &Tournament, config: &ReportConfig) -> Result<DiagnosticReport> {
    require_order(t, 5)?;
    config.validate()?;
    let n = t.order();
    let (quads, mode) = QuadDensities::of(t, config)?;
    let mut report = DiagnosticReport::new(Profile::Random, n, config, mode);
    let tri = triple_counts(t)?;
    let thr = report.threshold;

    report.record_abs("c3", (tri.p_c3().value() - 0.25).abs());
    let p2 = quads.get(SmallClass4::Tr4) + quads.get(SmallClass4::R4) - 0.75;
    report.record("p2", p2, p2.abs() <= thr);
    for sel in FlagSelector::SINGLE {
        let d = arc_flag_distribution(t, sel)?;
        let far = d.values().filter(|v| (v - 0.25).abs() > config.delta).count();
        report.record_abs(&format!("conc_{sel}"), far as f64 / d.len() as f64);
        report.statistics.insert(format!("mean_{sel}"), d.mean());
        report.statistics.insert(format!("second_moment_{sel}"), d.second_moment());
    }
    report.record_abs(
        "w4l4",
        (quads.get(SmallClass4::W4) - quads.get(SmallClass4::L4)).abs(),
    );
    let w4cap = quads.get(SmallClass4::W4) - 0.125;
    report.record("w4cap", w4cap, w4cap <= thr);
    insert_densities(&mut report, tri.p_c3().value(), &quads);
    Ok(report)
}

fn insert_densities(report: &mut DiagnosticReport, p_c3: f64, quads: &QuadDensities) {
    report.statistics.insert("p_c3".into(), p_c3);
    for c in SmallClass4::ALL {
        report
            .statistics
            .insert(format!("p_{}", c.to_string().to_lowercase()), quads.get(c));
    }
}

/// One exact identity evaluated on integer counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    /// Integer residual; zero iff the identity holds.
    pub residual: i128,
    /// The residual in density units.
    pub magnitude: f64,
}

impl IdentityResidual {
    pub fn holds(&self) -> bool {
        self.residual == 0
    }
}

/// Evaluates the exact finite-order identities tying per-arc flag sums to the
/// order-3 and order-4 counts:
///
/// * `chain_rule`: `c3·(n−3) = C(n,4) + r4 − tr4`, i.e.
///   `p(C3) = 1/4 + p(R4)/4 − p(TR4)/4`;
/// * `arc_sum_*`: `Σ o = Σ i = Σ tr = tr3`, `Σ c = 3·c3`;
/// * `fm_*`: `Σ g(g−1)` equals `2·tr4` for `o`, `i`, `tr`; `2·r4` for `c`;
///   `6·tr4 + 2·r4` for `o+i`; `2·tr4 + 6·r4` for `c+tr`.
pub fn identity_residuals(
    tr3: u64,
    c3: u64,
    quads: &QuadCounts,
    sums: &ArcMomentSums,
) -> Vec<IdentityResidual> {
    let n = quads.n as i128;
    let c4 = quads.quads as i128;
    let (tr4, r4) = (quads.tr4 as i128, quads.r4 as i128);
    let (tr3, c3) = (tr3 as i128, c3 as i128);
    let arc_witnesses = 12 * c4 / (n - 3).max(1); // = 3·C(n,3)
    let mut out = Vec::new();
    let mut push = |name: String, residual: i128, norm: i128| {
        out.push(IdentityResidual { name, residual, magnitude: residual as f64 / norm as f64 });
    };
    push("chain_rule".into(), c3 * (n - 3) - (c4 + r4 - tr4), 4 * c4);
    for sel in FlagSelector::SINGLE {
        let target = if sel == FlagSelector::C { 3 * c3 } else { tr3 };
        push(format!("arc_sum_{sel}"), sums.sum(sel) as i128 - target, arc_witnesses);
    }
    for sel in FlagSelector::ALL {
        let (a, b) = factorial_moment_target_int(sel);
        push(
            format!("fm_{sel}"),
            sums.sum_falling(sel) as i128 - a * tr4 - b * r4,
            12 * c4,
        );
    }
    out
}

pub fn identity_suite(t: &Tournament) -> Result<Vec<IdentityResidual>> {
    require_order(t, 6)?;
    let tri = triple_counts(t)?;
    let quads = quad_counts(t)?;
    let sums = arc_moment_sums(t)?;
    Ok(identity_residuals(tri.tr3, tri.c3, &quads, &sums))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{carousel, digraphon_sample, random_uniform, transitive};

    #[test]
    fn phi_examples() {
        assert!((phi_t_w4(1e-9).unwrap() - 0.125).abs() < 1e-6);
        assert!((phi_t_w4(0.143584).unwrap() - 0.157501).abs() < 1e-5);
        let t = phi_t_argmax_closed_form();
        assert!((phi_t_w4(t).unwrap() - phi_t_max_closed_form()).abs() < 1e-12);
        assert_eq!(phi_t_w4(0.0), Err(Error::OutOfDomain(0.0)));
        assert_eq!(phi_t_w4(1.0), Err(Error::OutOfDomain(1.0)));
    }

    #[test]
    fn closed_forms_match_quoted_decimals() {
        assert!((phi_t_argmax_closed_form() - 0.143584).abs() < 1e-6);
        assert!((phi_t_max_closed_form() - 0.157501).abs() < 1e-6);
    }

    #[test]
    fn maximizer_matches_closed_form_and_grid() {
        let best = maximize_phi_t(1e-8).unwrap();
        assert!((best.t - 0.143584).abs() < 1e-6);
        assert!((best.value - 0.157501).abs() < 1e-6);
        assert_eq!(best.value, phi_t_w4(best.t).unwrap());
        assert_eq!(best, maximize_phi_t(1e-8).unwrap());

        let grid = phi_t_grid(10_000);
        let top = grid.iter().map(|p| p.value).fold(f64::MIN, f64::max);
        assert!((top - best.value).abs() < 1e-4);

        // unimodal: increasing then decreasing
        let peak = grid.iter().position(|p| p.value == top).unwrap();
        assert!(grid[..=peak].windows(2).all(|w| w[0].value < w[1].value));
        assert!(grid[peak..].windows(2).all(|w| w[0].value > w[1].value));

        let h = 1e-5;
        let deriv = (phi_t_w4(best.t + h).unwrap() - phi_t_w4(best.t - h).unwrap()) / (2.0 * h);
        assert!(deriv.abs() < 1e-5, "{deriv}");
        assert!(maximize_phi_t(0.0).is_err());
    }

    #[test]
    fn carousel_report_on_carousel() {
        let r = quasi_carousel_report(&carousel(101).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(r.residuals["bal"], 0.0);
        assert_eq!(r.residuals["lt"], 0.0);
        let p_r4 = 1.0 - (101 * binomial(50, 3)) as f64 / binomial(101, 4) as f64;
        assert!((r.residuals["r4"] - (p_r4 - 0.5)).abs() < 1e-15);
        assert!((r.residuals["r4"] - 0.0152).abs() < 1e-4);
        // values i/99 for i in 1..=50 against U(0, 1/2)
        assert!((r.residuals["ks_c"] - 148.0 / (50.0 * 99.0)).abs() < 1e-12);
        for sel in FlagSelector::ALL {
            assert_eq!(r.residuals[&format!("m2_{sel}")], 0.0);
        }
        assert!(r.pass, "{:?}", r.failures());
    }

    #[test]
    fn carousel_report_rejects_transitive() {
        let r = quasi_carousel_report(&transitive(101).unwrap(), &ReportConfig::default()).unwrap();
        assert_eq!(r.residuals["lt"], 0.0);
        assert_eq!(r.residuals["c3"], 0.25);
        assert!(!r.verdicts["bal"]);
        assert!(!r.pass);
        let r = quasi_carousel_report(&transitive(1001).unwrap(), &ReportConfig::default()).unwrap();
        assert!(!r.verdicts["c3"]);
    }

    #[test]
    fn carousel_report_rejects_random() {
        let r = quasi_carousel_report(&random_uniform(1001, 2).unwrap(), &ReportConfig::default())
            .unwrap();
        assert!(r.residuals["ks_c"] >= 0.4, "{}", r.residuals["ks_c"]);
        assert!(!r.pass);
    }

    #[test]
    fn residuals_shrink_with_order() {
        let cfg = ReportConfig::default();
        let reports: Vec<_> = [101, 301, 1001]
            .into_iter()
            .map(|m| quasi_carousel_report(&carousel(m).unwrap(), &cfg).unwrap())
            .collect();
        for key in reports[0].residuals.keys() {
            let (small, large) = (reports[0].residuals[key], reports[2].residuals[key]);
            if small == 0.0 {
                assert_eq!(large, 0.0, "{key}");
            } else {
                assert!(large < small, "{key}: {large} !< {small}");
                assert!(reports[1].residuals[key] < small, "{key}");
            }
        }
    }

    #[test]
    fn random_report_cases() {
        let cfg = ReportConfig::default();
        let r = quasi_random_report(&random_uniform(2001, 4).unwrap(), &cfg).unwrap();
        assert!(r.residuals["conc_c"] < 0.01);
        assert!(r.residuals["p2"].abs() < 0.01);
        assert!(r.pass, "{:?}", r.failures());

        let r = quasi_random_report(&carousel(1001).unwrap(), &cfg).unwrap();
        assert!((r.residuals["conc_c"] - 0.8).abs() < 0.01, "{}", r.residuals["conc_c"]);
        assert!(!r.pass);

        let r = quasi_random_report(&transitive(1001).unwrap(), &cfg).unwrap();
        assert_eq!(r.residuals["p2"], 0.25);
        assert_eq!(r.residuals["c3"], 0.25);
    }

    #[test]
    fn reports_are_deterministic_and_sampling_works() {
        let t = digraphon_sample(301, 5).unwrap();
        let cfg = ReportConfig { samples: Some(200_000), seed: 9, ..Default::default() };
        let a = quasi_carousel_report(&t, &cfg).unwrap();
        let b = quasi_carousel_report(&t, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.provenance["mode"], "sampled");
        assert!(a.residuals["m2_c"] < 0.02);
        assert!(quasi_carousel_report(&transitive(4).unwrap(), &cfg).is_err());
    }

    #[test]
    fn config_kv() {
        let mut cfg = ReportConfig::default();
        cfg.apply_kv("eps = 0.1\n# comment\ndelta=0.2\nsamples=10\nseed=0x1f\nbins=7\n")
            .unwrap();
        assert_eq!((cfg.eps, cfg.delta, cfg.samples, cfg.seed, cfg.bins), (0.1, 0.2, Some(10), 31, 7));
        assert!(cfg.apply_kv("colour=blue").is_err());
        assert!(cfg.apply_kv("eps").is_err());
        assert!(cfg.apply_kv("eps=abc").is_err());
    }

    #[test]
    fn identity_suite_exact() {
        for seed in 0..50 {
            let t = random_uniform(6 + seed as usize % 30, seed).unwrap();
            assert!(identity_suite(&t).unwrap().iter().all(|r| r.holds()), "seed {seed}");
        }
        assert!(identity_suite(&carousel(49).unwrap()).unwrap().iter().all(|r| r.holds()));
        assert!(identity_suite(&transitive(5).unwrap()).is_err());
    }

    #[test]
    fn identity_suite_detects_corruption() {
        let t = random_uniform(20, 1).unwrap();
        let tri = triple_counts(&t).unwrap();
        let mut q = quad_counts(&t).unwrap();
        let sums = arc_moment_sums(&t).unwrap();
        q.r4 += 1;
        q.w4 -= 1;
        let res = identity_residuals(tri.tr3, tri.c3, &q, &sums);
        let broken: Vec<_> = res.iter().filter(|r| !r.holds()).map(|r| r.name.as_str()).collect();
        assert!(broken.contains(&"chain_rule"));
        assert!(broken.contains(&"fm_c"));
    }

    #[test]
    fn layered_simulation_tracks_curve() {
        let sim = simulate_layered_w4(3000, 0.3, 1, 400_000).unwrap();
        assert!((sim.sampled_w4 - sim.phi_t).abs() < 0.01, "{sim:?}");
    }
}
