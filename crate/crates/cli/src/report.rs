//! Serializable run reports. Observation indices are 1-based.

use std::fmt::Write as _;

use lts_core::bsa::Sign;
use lts_core::diagnostics::{AssumptionReport, AssumptionStatus, Landscape1D, Witness};
use lts_core::model::{Counters, FitResult, SubsetMask};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bsa,
    Exact,
    Both,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bsa => "bsa",
            Algorithm::Exact => "exact",
            Algorithm::Both => "both",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub beta: Vec<f64>,
    pub objective: f64,
    pub subset: Vec<usize>,
    pub counters: CountersReport,
    pub assumptions: Vec<AssumptionEntry>,
    pub algorithm: Algorithm,
    pub wall_ms: f64,
    pub n: usize,
    pub p: usize,
    pub h: usize,
    pub intercept: bool,
    /// `h = n`: the fit is plain OLS on all observations.
    pub short_circuit: bool,
    /// Brute-force result when both solvers ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<SolverSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Agreement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub landscape: Option<LandscapeReport>,
    /// Coefficients used by the generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_beta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountersReport {
    pub index_tuples_visited: u64,
    pub systems_solved: u64,
    pub regular_systems: u64,
    pub candidates_in_hp: u64,
    pub j_evaluations: u64,
    pub singular_masks: u64,
}

impl From<&Counters> for CountersReport {
    fn from(c: &Counters) -> Self {
        CountersReport {
            index_tuples_visited: c.index_tuples_visited,
            systems_solved: c.systems_solved,
            regular_systems: c.regular_systems,
            candidates_in_hp: c.candidates_in_hp,
            j_evaluations: c.j_evaluations,
            singular_masks: c.singular_masks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub beta: Vec<f64>,
    pub objective: f64,
    pub subset: Vec<usize>,
    pub counters: CountersReport,
}

impl From<&FitResult> for SolverSummary {
    fn from(fit: &FitResult) -> Self {
        SolverSummary {
            beta: fit.beta.clone(),
            objective: fit.objective,
            subset: one_based(&fit.mask),
            counters: (&fit.counters).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    /// Objectives equal to `1e-9` relative.
    pub objective: bool,
    pub subset: bool,
    pub objective_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionEntry {
    pub id: String,
    pub status: String,
    pub checked: u64,
    pub witnesses: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessEntry {
    Pair([usize; 2]),
    ZeroRow(usize),
    Subset(Vec<usize>),
    /// `+`/`-` string, one symbol per row after the first.
    Signs(String),
}

impl From<&Witness> for WitnessEntry {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Pair(i, j) => WitnessEntry::Pair([i + 1, j + 1]),
            Witness::ZeroRow(i) => WitnessEntry::ZeroRow(i + 1),
            Witness::Subset(s) => WitnessEntry::Subset(s.iter().map(|i| i + 1).collect()),
            Witness::Signs(s) => {
                WitnessEntry::Signs(s.signs().iter().map(|s| if *s == Sign::Plus { '+' } else { '-' }).collect())
            }
        }
    }
}

pub fn status_name(status: AssumptionStatus) -> &'static str {
    match status {
        AssumptionStatus::Pass => "pass",
        AssumptionStatus::Fail => "fail",
        AssumptionStatus::SampledPass => "sampled-pass",
        AssumptionStatus::Skipped => "skipped",
    }
}

impl From<&AssumptionReport> for AssumptionEntry {
    fn from(r: &AssumptionReport) -> Self {
        AssumptionEntry {
            id: r.id.label().to_string(),
            status: status_name(r.status).to_string(),
            checked: r.checked,
            witnesses: r.witnesses.iter().map(WitnessEntry::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeReport {
    pub boundary_points: Vec<f64>,
    pub cells: Vec<CellEntry>,
    pub local_minima: Vec<MinimumEntry>,
}

/// `null` bounds are infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellEntry {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimumEntry {
    pub beta: f64,
    pub value: f64,
    pub subset: Vec<usize>,
}

impl From<&Landscape1D> for LandscapeReport {
    fn from(l: &Landscape1D) -> Self {
        LandscapeReport {
            boundary_points: l.boundary_points.clone(),
            cells: l
                .cells
                .iter()
                .map(|c| CellEntry { lower: c.lower, upper: c.upper, subset: one_based(&c.mask) })
                .collect(),
            local_minima: l
                .local_minima
                .iter()
                .map(|m| MinimumEntry { beta: m.beta, value: m.value, subset: one_based(&m.mask) })
                .collect(),
        }
    }
}

pub fn one_based(mask: &SubsetMask) -> Vec<usize> {
    mask.iter().map(|i| i + 1).collect()
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| CliError::BadArgument(format!("not a report: {e}")))
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Text => Ok(self.to_text()),
        }
    }

    fn rows(&self) -> Vec<(String, String)> {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let mut rows = vec![
            ("algorithm".into(), self.algorithm.name().into()),
            ("n".into(), self.n.to_string()),
            ("p".into(), self.p.to_string()),
            ("h".into(), self.h.to_string()),
            ("intercept".into(), self.intercept.to_string()),
            ("short_circuit".into(), self.short_circuit.to_string()),
        ];
        for (j, b) in self.beta.iter().enumerate() {
            rows.push((format!("beta_{}", j + 1), b.to_string()));
        }
        rows.push(("objective".into(), self.objective.to_string()));
        rows.push(("subset".into(), join(&self.subset)));
        let c = &self.counters;
        for (k, v) in [
            ("index_tuples_visited", c.index_tuples_visited),
            ("systems_solved", c.systems_solved),
            ("regular_systems", c.regular_systems),
            ("candidates_in_hp", c.candidates_in_hp),
            ("j_evaluations", c.j_evaluations),
            ("singular_masks", c.singular_masks),
        ] {
            rows.push((format!("counters.{k}"), v.to_string()));
        }
        for a in &self.assumptions {
            rows.push((format!("assumption.{}", a.id), a.status.clone()));
        }
        if let Some(e) = &self.exact {
            rows.push(("exact.objective".into(), e.objective.to_string()));
            rows.push(("exact.subset".into(), join(&e.subset)));
        }
        if let Some(a) = &self.agreement {
            rows.push(("agreement.objective".into(), a.objective.to_string()));
            rows.push(("agreement.subset".into(), a.subset.to_string()));
        }
        if let Some(l) = &self.landscape {
            for (k, b) in l.boundary_points.iter().enumerate() {
                rows.push((format!("landscape.boundary_{}", k + 1), b.to_string()));
            }
            for (k, m) in l.local_minima.iter().enumerate() {
                rows.push((format!("landscape.minimum_{}", k + 1), format!("{} {}", m.beta, m.value)));
            }
        }
        if let Some(t) = &self.true_beta {
            for (j, b) in t.iter().enumerate() {
                rows.push((format!("true_beta_{}", j + 1), b.to_string()));
            }
        }
        rows.push(("wall_ms".into(), self.wall_ms.to_string()));
        rows
    }

    /// Two-column `field,value` table.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(["field", "value"]).map_err(err)?;
        for (k, v) in self.rows() {
            w.write_record([k, v]).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:width$}  {v}");
        }
        for a in self.assumptions.iter().filter(|a| !a.witnesses.is_empty()) {
            let _ = writeln!(out, "{} witnesses: {}", a.id, serde_json::to_string(&a.witnesses).unwrap_or_default());
        }
        if let Some(l) = &self.landscape {
            for c in &l.cells {
                let bound = |b: Option<f64>, inf: &str| b.map_or(inf.to_string(), |v| v.to_string());
                let _ = writeln!(out, "cell ({}, {})  {:?}", bound(c.lower, "-inf"), bound(c.upper, "inf"), c.subset);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
