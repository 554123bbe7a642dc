//! CSV and JSON rendering of run reports, and the sinks they are written to.
//!
//! Column orders:
//!
//! * `metrics_series.csv`: see [`SeriesRow`]
//! * `event_log.csv`: `tick,ue_id,stage,outcome`
//! * `action_log.csv`: `tick,kind,ue_or_slice,from,to,reason,outcome`
//! * `ledger_log.csv`: `tick,slice_id,domain,committed,capacity`
//! * `comparison.csv`: the scalar fields of [`ComparisonRow`]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::slice::{Domain, MetricsSample};

use super::{ActionRow, EventRow, LedgerRow, MetricsReport, Summary};

pub const SUMMARY_FILE: &str = "metrics_summary.json";
pub const SERIES_FILE: &str = "metrics_series.csv";
pub const EVENT_LOG_FILE: &str = "event_log.csv";
pub const ACTION_LOG_FILE: &str = "action_log.csv";
pub const LEDGER_LOG_FILE: &str = "ledger_log.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";

pub const ARTIFACT_FILES: [&str; 5] = [
    SUMMARY_FILE,
    SERIES_FILE,
    EVENT_LOG_FILE,
    ACTION_LOG_FILE,
    LEDGER_LOG_FILE,
];

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("artifact sink unavailable: {0}")]
    SinkUnavailable(String),
    #[error("malformed artifact `{file}`: {message}")]
    Malformed { file: String, message: String },
}

/// Destination for named artifact files.
pub trait ArtifactSink {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), EmitError>;
}

/// Writes artifacts into a directory, creating it on first use.
#[derive(Debug, Clone)]
pub struct DirSink {
    dir: PathBuf,
}

impl DirSink {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl ArtifactSink for DirSink {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), EmitError> {
        let unavailable = |e: std::io::Error| {
            EmitError::SinkUnavailable(format!("{}: {e}", self.dir.join(name).display()))
        };
        fs::create_dir_all(&self.dir).map_err(unavailable)?;
        fs::write(self.dir.join(name), bytes).map_err(unavailable)
    }
}

/// Keeps artifacts in memory, keyed by file name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MemorySink {
    pub files: BTreeMap<String, Vec<u8>>,
}

impl ArtifactSink for MemorySink {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), EmitError> {
        self.files.insert(name.to_string(), bytes.to_vec());
        Ok(())
    }
}

/// One line of `metrics_series.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub tick: u64,
    pub ues: u64,
    pub registered: u64,
    pub satisfied: u64,
    pub sla_violations: u64,
    pub committed_ran: f64,
    pub committed_tn: f64,
    pub committed_edge: f64,
    pub committed_core: f64,
    pub committed_storage: f64,
    pub switch_requested: u64,
    pub switch_accepted: u64,
    pub switch_denied: u64,
    pub switch_latency_ticks: u64,
    pub admission_denials: u64,
    pub actions_applied: u64,
    pub actions_dropped: u64,
    pub provision: u64,
    pub incident_preempt: u64,
    pub normalcy_reclaim: u64,
    pub demand_tracking: u64,
    pub threshold_scale: u64,
    pub incident: bool,
}

impl From<&MetricsSample> for SeriesRow {
    fn from(s: &MetricsSample) -> Self {
        let c = s.committed;
        Self {
            tick: s.tick,
            ues: s.ues,
            registered: s.registered,
            satisfied: s.satisfied,
            sla_violations: s.sla_violations,
            committed_ran: c[Domain::Ran],
            committed_tn: c[Domain::Transport],
            committed_edge: c[Domain::EdgeCompute],
            committed_core: c[Domain::CoreCompute],
            committed_storage: c[Domain::Storage],
            switch_requested: s.switch_requested,
            switch_accepted: s.switch_accepted,
            switch_denied: s.switch_denied,
            switch_latency_ticks: s.switch_latency_ticks,
            admission_denials: s.admission_denials,
            actions_applied: s.actions_applied,
            actions_dropped: s.actions_dropped,
            provision: s.actions.provision,
            incident_preempt: s.actions.incident_preempt,
            normalcy_reclaim: s.actions.normalcy_reclaim,
            demand_tracking: s.actions.demand_tracking,
            threshold_scale: s.actions.threshold_scale,
            incident: s.incident,
        }
    }
}

/// One line of `comparison.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub policy: String,
    pub seed: u64,
    pub duration_ticks: u64,
    pub qos_satisfaction_rate: f64,
    pub sla_violation_count: u64,
    pub mean_util_ran: f64,
    pub mean_util_tn: f64,
    pub mean_util_edge: f64,
    pub mean_util_core: f64,
    pub mean_util_storage: f64,
    pub mean_allocation_fraction: f64,
    pub switch_requested: u64,
    pub switch_accepted: u64,
    pub switch_denied: u64,
    pub mean_switch_latency: f64,
    pub admission_denials: u64,
    pub actions_applied: u64,
    pub actions_dropped: u64,
    pub incident_ticks: u64,
}

impl From<&Summary> for ComparisonRow {
    fn from(s: &Summary) -> Self {
        let u = |d: Domain| s.mean_utilization.get(d.as_str()).copied().unwrap_or(0.0);
        Self {
            policy: s.policy.clone(),
            seed: s.seed,
            duration_ticks: s.duration_ticks,
            qos_satisfaction_rate: s.qos_satisfaction_rate,
            sla_violation_count: s.sla_violation_count,
            mean_util_ran: u(Domain::Ran),
            mean_util_tn: u(Domain::Transport),
            mean_util_edge: u(Domain::EdgeCompute),
            mean_util_core: u(Domain::CoreCompute),
            mean_util_storage: u(Domain::Storage),
            mean_allocation_fraction: s.mean_allocation_fraction,
            switch_requested: s.switch_requested,
            switch_accepted: s.switch_accepted,
            switch_denied: s.switch_denied,
            mean_switch_latency: s.mean_switch_latency,
            admission_denials: s.admission_denials,
            actions_applied: s.actions_applied,
            actions_dropped: s.actions_dropped,
            incident_ticks: s.incident_ticks,
        }
    }
}

fn csv_bytes<T: Serialize>(rows: &[T], header: &[&str]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("rows serialize to flat records");
    }
    w.into_inner().expect("in-memory flush")
}

const SERIES_HEADER: [&str; 23] = [
    "tick",
    "ues",
    "registered",
    "satisfied",
    "sla_violations",
    "committed_ran",
    "committed_tn",
    "committed_edge",
    "committed_core",
    "committed_storage",
    "switch_requested",
    "switch_accepted",
    "switch_denied",
    "switch_latency_ticks",
    "admission_denials",
    "actions_applied",
    "actions_dropped",
    "provision",
    "incident_preempt",
    "normalcy_reclaim",
    "demand_tracking",
    "threshold_scale",
    "incident",
];
const EVENT_HEADER: [&str; 4] = ["tick", "ue_id", "stage", "outcome"];
const ACTION_HEADER: [&str; 7] = ["tick", "kind", "ue_or_slice", "from", "to", "reason", "outcome"];
const LEDGER_HEADER: [&str; 5] = ["tick", "slice_id", "domain", "committed", "capacity"];
const COMPARISON_HEADER: [&str; 19] = [
    "policy",
    "seed",
    "duration_ticks",
    "qos_satisfaction_rate",
    "sla_violation_count",
    "mean_util_ran",
    "mean_util_tn",
    "mean_util_edge",
    "mean_util_core",
    "mean_util_storage",
    "mean_allocation_fraction",
    "switch_requested",
    "switch_accepted",
    "switch_denied",
    "mean_switch_latency",
    "admission_denials",
    "actions_applied",
    "actions_dropped",
    "incident_ticks",
];

/// The five artifact files of one run, in [`ARTIFACT_FILES`] order.
pub fn render_artifacts(report: &MetricsReport) -> Vec<(&'static str, Vec<u8>)> {
    let mut summary = serde_json::to_vec_pretty(&report.summary()).expect("summary serializes");
    summary.push(b'\n');
    let series: Vec<SeriesRow> = report.samples.iter().map(SeriesRow::from).collect();
    vec![
        (SUMMARY_FILE, summary),
        (SERIES_FILE, csv_bytes(&series, &SERIES_HEADER)),
        (EVENT_LOG_FILE, csv_bytes(&report.events, &EVENT_HEADER)),
        (ACTION_LOG_FILE, csv_bytes(&report.actions, &ACTION_HEADER)),
        (LEDGER_LOG_FILE, csv_bytes(&report.ledger, &LEDGER_HEADER)),
    ]
}

pub fn emit_metrics(report: &MetricsReport, sink: &mut dyn ArtifactSink) -> Result<(), EmitError> {
    for (name, bytes) in render_artifacts(report) {
        sink.write(name, &bytes)?;
    }
    Ok(())
}

/// `comparison.csv` for summaries given in the desired row order.
pub fn render_comparison(summaries: &[Summary]) -> Vec<u8> {
    let rows: Vec<ComparisonRow> = summaries.iter().map(ComparisonRow::from).collect();
    csv_bytes(&rows, &COMPARISON_HEADER)
}

fn parse_csv<T: for<'de> Deserialize<'de>>(file: &str, bytes: &[u8]) -> Result<Vec<T>, EmitError> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| EmitError::Malformed {
            file: file.to_string(),
            message: e.to_string(),
        })
}

pub fn parse_series(bytes: &[u8]) -> Result<Vec<SeriesRow>, EmitError> {
    parse_csv(SERIES_FILE, bytes)
}

pub fn parse_event_log(bytes: &[u8]) -> Result<Vec<EventRow>, EmitError> {
    parse_csv(EVENT_LOG_FILE, bytes)
}

pub fn parse_action_log(bytes: &[u8]) -> Result<Vec<ActionRow>, EmitError> {
    parse_csv(ACTION_LOG_FILE, bytes)
}

pub fn parse_ledger_log(bytes: &[u8]) -> Result<Vec<LedgerRow>, EmitError> {
    parse_csv(LEDGER_LOG_FILE, bytes)
}

pub fn parse_comparison(bytes: &[u8]) -> Result<Vec<ComparisonRow>, EmitError> {
    parse_csv(COMPARISON_FILE, bytes)
}

pub fn parse_summary(bytes: &[u8]) -> Result<Summary, EmitError> {
    serde_json::from_slice(bytes).map_err(|e| EmitError::Malformed {
        file: SUMMARY_FILE.to_string(),
        message: e.to_string(),
    })
}
