use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::baselines::{Availability, Mobility};
use crate::catalog::{
    aggregate_class, edge_share_of, quantify, DemandField, QosCalibration, QosMetric,
    ResourceDemand, ServiceClass, SliceServiceType,
};
use crate::policy::{PolicyKind, PolicyParams};
use crate::semantic::{Dictionary, ExtractionRule, SemanticEvent, TaskKind, Tick};
use crate::slice::{Domain, DomainVector, SNssai, MAX_ALLOWED_NSSAI};

use crate::orchestrator::DYNAMIC_SD_BASE;

/// Capacity of the shared pool in each domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolSpec {
    pub ran: f64,
    pub transport: f64,
    pub edge_compute: f64,
    pub core_compute: f64,
    pub storage: f64,
}

impl PoolSpec {
    pub fn capacity(&self) -> DomainVector {
        DomainVector([
            self.ran,
            self.transport,
            self.edge_compute,
            self.core_compute,
            self.storage,
        ])
    }
}

/// A declared slice template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceTemplate {
    pub name: String,
    pub sst: SliceServiceType,
    pub sd: u32,
    /// Tasks the slice is designed for; their aggregate is its service class.
    pub tasks: Vec<TaskKind>,
    /// UEs the initial allocation is sized for.
    #[serde(default = "one")]
    pub expected_ues: u32,
    /// UEs the SLA floor is sized for.
    #[serde(default = "one")]
    pub sla_ues: u32,
    /// Defaults to the share of edge-preferring tasks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_share: Option<f64>,
    /// Tenant overrides of individual initial-allocation fields.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<DemandField, f64>,
}

fn one() -> u32 {
    1
}

fn unit_rho() -> f64 {
    1.0
}

/// From tick `from` on, the UE is seen in this context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextStep {
    pub from: Tick,
    pub zone: String,
    pub mobility: Mobility,
    pub availability: Availability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UeSpec {
    pub id: String,
    /// Semantic stream the UE produces; defaults to its id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<String>,
    pub allowed_nssai: Vec<SNssai>,
    #[serde(default = "unit_rho")]
    pub rho: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub auth_failure: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub context: Vec<ContextStep>,
}

impl UeSpec {
    pub fn stream_id(&self) -> &str {
        self.stream.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionarySpec {
    pub vocabulary: Vec<String>,
    pub rules: Vec<ExtractionRule>,
}

/// Partial override of one calibration row.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelOverride {
    #[serde(rename = "LOW", default, skip_serializing_if = "Option::is_none")]
    pub low: Option<f64>,
    #[serde(rename = "AVG", default, skip_serializing_if = "Option::is_none")]
    pub avg: Option<f64>,
    #[serde(rename = "HIGH", default, skip_serializing_if = "Option::is_none")]
    pub high: Option<f64>,
}

/// Calibration overrides: `kappa` plus any of the per-metric tables.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CalibrationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", flatten)]
    pub tables: BTreeMap<String, LevelOverride>,
}

impl CalibrationSpec {
    pub fn is_empty(&self) -> bool {
        self.kappa.is_none() && self.tables.is_empty()
    }
}

fn metric_by_table_name(name: &str) -> Option<QosMetric> {
    Some(match name {
        "bandwidth_mbps" => QosMetric::Bandwidth,
        "delay_budget_ms" => QosMetric::DelaySensitivity,
        "reliability" => QosMetric::Reliability,
        "scale_ues" => QosMetric::Scale,
        "compute_units" => QosMetric::Compute,
        "storage_gb" => QosMetric::Storage,
        "handovers_per_min" => QosMetric::Mobility,
        _ => return None,
    })
}

/// The scenario document as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub duration_ticks: Tick,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyKind>,
    pub pool: PoolSpec,
    pub slices: Vec<SliceTemplate>,
    pub ues: Vec<UeSpec>,
    /// Defaults to the built-in first-responder dictionary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictionary: Option<DictionarySpec>,
    #[serde(default)]
    pub timeline: Vec<SemanticEvent>,
    #[serde(default, skip_serializing_if = "CalibrationSpec::is_empty")]
    pub calibration: CalibrationSpec,
    #[serde(default)]
    pub policy_params: PolicyParams,
}

impl ScenarioFile {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario documents always serialize")
    }
}

/// A scenario that passed validation, with its dictionary and calibration resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub dictionary: Dictionary,
    pub calibration: QosCalibration,
}

impl Scenario {
    pub fn template_class(&self, t: &SliceTemplate) -> ServiceClass {
        aggregate_class(&t.tasks)
    }

    pub fn template_snssai(&self, t: &SliceTemplate) -> SNssai {
        SNssai::with_type(t.sst, t.sd).expect("validated")
    }

    pub fn template_edge_share(&self, t: &SliceTemplate) -> f64 {
        t.edge_share
            .unwrap_or_else(|| edge_share_of(&t.tasks.iter().copied().collect()))
    }

    /// Initial allocation of a template, overrides applied.
    pub fn template_allocation(&self, t: &SliceTemplate) -> ResourceDemand {
        let mut d = quantify(&self.template_class(t).qos, &self.calibration, t.expected_ues)
            .expect("validated");
        for (field, value) in &t.overrides {
            d.set(*field, *value);
        }
        d
    }

    pub fn template_sla(&self, t: &SliceTemplate) -> ResourceDemand {
        quantify(&self.template_class(t).qos, &self.calibration, t.sla_ues).expect("validated")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    /// Dotted location inside the document, e.g. `ues[2].allowed_nssai`.
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.path, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<ValidationIssue>),
    #[error("invalid override `{0}`: {1}")]
    Override(String, String),
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Start lines of the array entries that validation messages point at.
#[derive(Debug, Default, Deserialize)]
struct Locator {
    #[serde(default)]
    slices: Vec<Spanned<toml::Value>>,
    #[serde(default)]
    ues: Vec<Spanned<toml::Value>>,
    #[serde(default)]
    timeline: Vec<Spanned<toml::Value>>,
}

struct Lines {
    slices: Vec<usize>,
    ues: Vec<usize>,
    timeline: Vec<usize>,
}

impl Lines {
    fn from_text(text: &str) -> Self {
        let loc: Locator = toml::from_str(text).unwrap_or_default();
        let lines = |v: &[Spanned<toml::Value>]| {
            v.iter().map(|s| line_of(text, s.span().start)).collect()
        };
        Self {
            slices: lines(&loc.slices),
            ues: lines(&loc.ues),
            timeline: lines(&loc.timeline),
        }
    }
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    load_scenario_with(text, &[])
}

/// Like [`load_scenario`], with `dotted.key=value` overrides applied first.
pub fn load_scenario_with(text: &str, overrides: &[String]) -> Result<Scenario, ScenarioError> {
    let parse_err = |e: toml::de::Error| ScenarioError::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    };
    let file: ScenarioFile = if overrides.is_empty() {
        toml::from_str(text).map_err(parse_err)?
    } else {
        let mut doc: toml::Table = toml::from_str(text).map_err(parse_err)?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| ScenarioError::Parse {
                line: None,
                message: e.message().to_string(),
            })?
    };
    validate(file, &Lines::from_text(text))
}

/// Validates an in-memory document.
pub fn scenario_from_file(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
    let lines = Lines {
        slices: Vec::new(),
        ues: Vec::new(),
        timeline: Vec::new(),
    };
    validate(file, &lines)
}

fn parse_override_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Sets `path.to.key=value` inside `doc`; numeric segments index arrays.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<(), ScenarioError> {
    let bad = |why: &str| ScenarioError::Override(assignment.to_string(), why.to_string());
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| bad("expected key=value"))?;
    let segments: Vec<&str> = path.trim().split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(bad("empty key segment"));
    }
    let value = parse_override_value(raw.trim());
    let (last, parents) = segments.split_last().expect("non-empty");
    let mut cursor: &mut toml::Value = doc
        .entry(parents.first().copied().unwrap_or(last).to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    if parents.is_empty() {
        *cursor = value;
        return Ok(());
    }
    for seg in &parents[1..] {
        cursor = step_into(cursor, seg).ok_or_else(|| bad(&format!("cannot descend into `{seg}`")))?;
    }
    match cursor {
        toml::Value::Table(t) => {
            t.insert(last.to_string(), value);
            Ok(())
        }
        toml::Value::Array(a) => {
            let i: usize = last.parse().map_err(|_| bad("array index expected"))?;
            let slot = a.get_mut(i).ok_or_else(|| bad("array index out of range"))?;
            *slot = value;
            Ok(())
        }
        _ => Err(bad("target is not a table")),
    }
}

fn step_into<'a>(v: &'a mut toml::Value, seg: &str) -> Option<&'a mut toml::Value> {
    match v {
        toml::Value::Table(t) => Some(
            t.entry(seg.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new())),
        ),
        toml::Value::Array(a) => a.get_mut(seg.parse::<usize>().ok()?),
        _ => None,
    }
}

struct Issues<'a> {
    lines: &'a Lines,
    list: Vec<ValidationIssue>,
}

impl Issues<'_> {
    fn push(&mut self, path: String, line: Option<usize>, message: impl Into<String>) {
        self.list.push(ValidationIssue {
            path,
            line,
            message: message.into(),
        });
    }

    fn slice(&mut self, i: usize, field: &str, message: impl Into<String>) {
        let line = self.lines.slices.get(i).copied();
        self.push(format!("slices[{i}]{field}"), line, message);
    }

    fn ue(&mut self, i: usize, field: &str, message: impl Into<String>) {
        let line = self.lines.ues.get(i).copied();
        self.push(format!("ues[{i}]{field}"), line, message);
    }

    fn event(&mut self, i: usize, field: &str, message: impl Into<String>) {
        let line = self.lines.timeline.get(i).copied();
        self.push(format!("timeline[{i}]{field}"), line, message);
    }
}

fn resolve_calibration(spec: &CalibrationSpec, issues: &mut Issues) -> QosCalibration {
    let mut cal = QosCalibration::default();
    if let Some(k) = spec.kappa {
        cal.kappa = k;
    }
    for (name, o) in &spec.tables {
        let Some(metric) = metric_by_table_name(name) else {
            issues.push(format!("calibration.{name}"), None, "unknown calibration table");
            continue;
        };
        let row = cal.table_mut(metric);
        for (slot, v) in row.iter_mut().zip([o.low, o.avg, o.high]) {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }
    if let Err(e) = cal.validate() {
        issues.push("calibration".into(), None, e.to_string());
    }
    cal
}

fn check_params(p: &PolicyParams, issues: &mut Issues) {
    let mut bad = |field: &str, msg: &str| {
        issues.push(format!("policy_params.{field}"), None, msg.to_string());
    };
    if !(p.gamma.is_finite() && p.gamma >= 1.0) {
        bad("gamma", "must be a finite number >= 1");
    }
    if !(p.epsilon.is_finite() && p.epsilon >= 0.0) {
        bad("epsilon", "must be a finite number >= 0");
    }
    if p.dns_window == 0 {
        bad("dns_window", "must be at least 1");
    }
    if !(0.0 <= p.dns_u_lo && p.dns_u_lo < p.dns_u_hi) {
        bad("dns_u_lo", "must satisfy 0 <= dns_u_lo < dns_u_hi");
    }
    if !(p.dns_step > 0.0 && p.dns_step < 1.0) {
        bad("dns_step", "must lie in (0, 1)");
    }
    if p.zones.is_empty() {
        bad("zones", "at least one zone is required");
    }
    let zones: BTreeSet<&str> = p.zones.iter().map(String::as_str).collect();
    for (i, row) in p.context_table.iter().enumerate() {
        if let Some(z) = &row.zone {
            if !zones.contains(z.as_str()) {
                issues.push(
                    format!("policy_params.context_table[{i}].zone"),
                    None,
                    format!("zone `{z}` is not declared in policy_params.zones"),
                );
            }
        }
    }
}

fn validate(file: ScenarioFile, lines: &Lines) -> Result<Scenario, ScenarioError> {
    let mut issues = Issues {
        lines,
        list: Vec::new(),
    };
    if file.duration_ticks == 0 {
        issues.push("duration_ticks".into(), None, "must be at least 1");
    }
    let cap = file.pool.capacity();
    for (d, v) in cap.iter() {
        if !(v.is_finite() && v >= 0.0) {
            issues.push(format!("pool.{}", pool_key(d)), None, "must be a finite number >= 0");
        }
    }

    let calibration = resolve_calibration(&file.calibration, &mut issues);
    check_params(&file.policy_params, &mut issues);

    let dictionary = match &file.dictionary {
        None => Dictionary::first_responder(),
        Some(spec) => match Dictionary::new(spec.vocabulary.iter().cloned(), spec.rules.clone()) {
            Ok(d) => d,
            Err(e) => {
                issues.push("dictionary".into(), None, e.to_string());
                Dictionary::first_responder()
            }
        },
    };

    if file.slices.is_empty() {
        issues.push("slices".into(), None, "at least one slice template is required");
    }
    let mut names = BTreeSet::new();
    let mut snssais = BTreeSet::new();
    for (i, t) in file.slices.iter().enumerate() {
        if !names.insert(t.name.as_str()) {
            issues.slice(i, ".name", format!("duplicate slice name `{}`", t.name));
        }
        if t.name.is_empty() || t.name.starts_with("dyn-") || t.name == "*" {
            issues.slice(i, ".name", "names must be non-empty and not start with `dyn-`");
        }
        if t.sd >= DYNAMIC_SD_BASE {
            issues.slice(
                i,
                ".sd",
                format!("differentiators from {:#x} up are reserved for run-time slices", DYNAMIC_SD_BASE),
            );
        } else if !snssais.insert((t.sst, t.sd)) {
            issues.slice(i, ".sd", "S-NSSAI already used by another template");
        }
        if t.expected_ues == 0 {
            issues.slice(i, ".expected_ues", "must be at least 1");
        }
        if t.sla_ues == 0 {
            issues.slice(i, ".sla_ues", "must be at least 1");
        }
        if let Some(s) = t.edge_share {
            if !(0.0..=1.0).contains(&s) {
                issues.slice(i, ".edge_share", "must lie in [0, 1]");
            }
        }
        for (f, v) in &t.overrides {
            if !(v.is_finite() && *v >= 0.0) {
                issues.slice(i, &format!(".overrides.{}", f.as_str()), "must be a finite number >= 0");
            }
        }
    }

    let zones: BTreeSet<&str> = file.policy_params.zones.iter().map(String::as_str).collect();
    let mut ue_ids = BTreeSet::new();
    let mut streams = BTreeSet::new();
    for (i, ue) in file.ues.iter().enumerate() {
        if !ue_ids.insert(ue.id.as_str()) {
            issues.ue(i, ".id", format!("duplicate UE id `{}`", ue.id));
        }
        if ue.id.is_empty() || ue.id == "*" {
            issues.ue(i, ".id", "UE ids must be non-empty and not `*`");
        }
        streams.insert(ue.stream_id());
        if ue.allowed_nssai.len() > MAX_ALLOWED_NSSAI {
            issues.ue(
                i,
                ".allowed_nssai",
                format!(
                    "{} S-NSSAIs listed; the allowed NSSAI holds at most {MAX_ALLOWED_NSSAI}",
                    ue.allowed_nssai.len()
                ),
            );
        }
        if !ue
            .allowed_nssai
            .iter()
            .any(|s| snssais.contains(&(s.sst(), s.sd())))
        {
            issues.ue(i, ".allowed_nssai", "no allowed S-NSSAI matches a declared slice");
        }
        if !(ue.rho > 0.0 && ue.rho <= 1.0) {
            issues.ue(i, ".rho", "compression ratio must lie in (0, 1]");
        }
        let mut last = None;
        for (j, step) in ue.context.iter().enumerate() {
            if !zones.contains(step.zone.as_str()) {
                issues.ue(
                    i,
                    &format!(".context[{j}].zone"),
                    format!("zone `{}` is not declared in policy_params.zones", step.zone),
                );
            }
            if last.is_some_and(|l| step.from <= l) {
                issues.ue(i, &format!(".context[{j}].from"), "context steps must be strictly increasing");
            }
            last = Some(step.from);
        }
    }

    let mut prev = 0;
    for (i, ev) in file.timeline.iter().enumerate() {
        if ev.time < prev {
            issues.event(i, ".time", format!("timeline not sorted: {} after {prev}", ev.time));
        }
        prev = prev.max(ev.time);
        if !streams.contains(ev.stream_id.as_str()) {
            issues.event(i, ".stream", format!("stream `{}` belongs to no UE", ev.stream_id));
        }
        for label in ev.triple.labels() {
            if !dictionary.knows(label) {
                issues.event(i, ".triple", format!("label `{label}` is not in the vocabulary"));
            }
        }
    }

    if issues.list.is_empty() {
        Ok(Scenario {
            file,
            dictionary,
            calibration,
        })
    } else {
        Err(ScenarioError::Validation(issues.list))
    }
}

fn pool_key(d: Domain) -> &'static str {
    match d {
        Domain::Ran => "ran",
        Domain::Transport => "transport",
        Domain::EdgeCompute => "edge_compute",
        Domain::CoreCompute => "core_compute",
        Domain::Storage => "storage",
    }
}

/// JSON schema of the scenario document.
pub fn scenario_schema() -> serde_json::Value {
    use serde_json::json;
    let number = json!({"type": "number", "minimum": 0});
    let level_row = json!({
        "type": "object",
        "additionalProperties": false,
        "properties": {"LOW": {"type": "number"}, "AVG": {"type": "number"}, "HIGH": {"type": "number"}}
    });
    let tasks = json!({"type": "string", "enum": TaskKind::ALL.iter().map(|t| t.as_str()).collect::<Vec<_>>()});
    let snssai = json!({
        "type": "object",
        "required": ["sst", "sd"],
        "properties": {
            "sst": {"type": "integer", "enum": [1, 2, 3]},
            "sd": {"type": "integer", "minimum": 0, "maximum": 0xFF_FFFF}
        }
    });
    let demand_keys: Vec<String> = DemandField::ALL
        .iter()
        .map(|f| serde_json::to_value(f).unwrap().as_str().unwrap().to_string())
        .collect();
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "semslice scenario",
        "type": "object",
        "additionalProperties": false,
        "required": ["duration_ticks", "pool", "slices", "ues"],
        "properties": {
            "duration_ticks": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "policy": {"type": "string", "enum": ["static", "dns", "context", "semantic"]},
            "pool": {
                "type": "object",
                "additionalProperties": false,
                "required": ["ran", "transport", "edge_compute", "core_compute", "storage"],
                "properties": {
                    "ran": number, "transport": number, "edge_compute": number,
                    "core_compute": number, "storage": number
                }
            },
            "slices": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "additionalProperties": false,
                    "required": ["name", "sst", "sd", "tasks"],
                    "properties": {
                        "name": {"type": "string"},
                        "sst": {"type": "string", "enum": ["EMBB", "URLLC", "MMTC"]},
                        "sd": {"type": "integer", "minimum": 0, "exclusiveMaximum": DYNAMIC_SD_BASE},
                        "tasks": {"type": "array", "items": tasks},
                        "expected_ues": {"type": "integer", "minimum": 1},
                        "sla_ues": {"type": "integer", "minimum": 1},
                        "edge_share": {"type": "number", "minimum": 0, "maximum": 1},
                        "overrides": {
                            "type": "object",
                            "propertyNames": {"enum": demand_keys},
                            "additionalProperties": {"type": "number", "minimum": 0}
                        }
                    }
                }
            },
            "ues": {
                "type": "array",
                "items": {
                    "type": "object",
                    "additionalProperties": false,
                    "required": ["id", "allowed_nssai"],
                    "properties": {
                        "id": {"type": "string"},
                        "stream": {"type": "string"},
                        "allowed_nssai": {"type": "array", "maxItems": MAX_ALLOWED_NSSAI, "items": snssai},
                        "rho": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                        "auth_failure": {"type": "boolean"},
                        "context": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "additionalProperties": false,
                                "required": ["from", "zone", "mobility", "availability"],
                                "properties": {
                                    "from": {"type": "integer", "minimum": 0},
                                    "zone": {"type": "string"},
                                    "mobility": {"enum": ["STATIONARY", "MOBILE"]},
                                    "availability": {"enum": ["BUSY", "AVAILABLE"]}
                                }
                            }
                        }
                    }
                }
            },
            "dictionary": {
                "type": "object",
                "additionalProperties": false,
                "required": ["vocabulary", "rules"],
                "properties": {
                    "vocabulary": {"type": "array", "items": {"type": "string"}},
                    "rules": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "pattern", "task"],
                            "properties": {
                                "id": {"type": "string"},
                                "pattern": {"type": "array", "minItems": 1, "items": {"type": "string", "description": "subject predicate object; ?name binds a variable, * matches anything"}},
                                "task": tasks,
                                "critical": {"type": "boolean"}
                            }
                        }
                    }
                }
            },
            "timeline": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["stream", "time", "triple", "ttl"],
                    "properties": {
                        "stream": {"type": "string"},
                        "time": {"type": "integer", "minimum": 0},
                        "triple": {"type": "string", "description": "subject predicate object"},
                        "ttl": {"oneOf": [{"type": "integer", "minimum": 1}, {"const": "persistent"}]}
                    }
                }
            },
            "calibration": {
                "type": "object",
                "additionalProperties": false,
                "properties": {
                    "kappa": {"type": "number", "minimum": 0},
                    "bandwidth_mbps": level_row, "delay_budget_ms": level_row,
                    "reliability": level_row, "scale_ues": level_row,
                    "compute_units": level_row, "storage_gb": level_row,
                    "handovers_per_min": level_row
                }
            },
            "policy_params": {
                "type": "object",
                "additionalProperties": false,
                "properties": {
                    "gamma": {"type": "number", "minimum": 1},
                    "hysteresis_ticks": {"type": "integer", "minimum": 0},
                    "epsilon": {"type": "number", "minimum": 0},
                    "dns_window": {"type": "integer", "minimum": 1},
                    "dns_u_hi": {"type": "number"},
                    "dns_u_lo": {"type": "number", "minimum": 0},
                    "dns_step": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                    "switch_delay": {"type": "integer", "minimum": 0},
                    "event_jitter": {"type": "integer", "minimum": 0},
                    "zones": {"type": "array", "minItems": 1, "items": {"type": "string"}},
                    "context_table": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": false,
                            "required": ["tasks"],
                            "properties": {
                                "zone": {"type": "string"},
                                "mobility": {"enum": ["STATIONARY", "MOBILE"]},
                                "availability": {"enum": ["BUSY", "AVAILABLE"]},
                                "tasks": {"type": "array", "items": tasks}
                            }
                        }
                    }
                }
            }
        }
    })
}
