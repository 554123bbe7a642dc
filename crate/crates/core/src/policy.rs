//! The step-function interface shared by every provisioning policy.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{ContextRule, UserContext};
use crate::catalog::{DemandField, QosCalibration, ResourceDemand, ServiceClass};
use crate::orchestrator::UeSemanticState;
use crate::semantic::{Dictionary, KnowledgeGraph, TaskKind, Tick};
use crate::slice::{
    quantize_down, quantize_up, DomainVector, SliceId, SliceInstance, SliceTable, UeContext, UeId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Static,
    Dns,
    #[serde(rename = "context")]
    ContextAware,
    Semantic,
}

impl PolicyKind {
    /// Comparison order.
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Static,
        PolicyKind::Dns,
        PolicyKind::ContextAware,
        PolicyKind::Semantic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Static => "static",
            PolicyKind::Dns => "dns",
            PolicyKind::ContextAware => "context",
            PolicyKind::Semantic => "semantic",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Static => "STATIC",
            PolicyKind::Dns => "DNS",
            PolicyKind::ContextAware => "CONTEXT_AWARE",
            PolicyKind::Semantic => "SEMANTIC",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "static" => Ok(PolicyKind::Static),
            "dns" => Ok(PolicyKind::Dns),
            "context" | "context_aware" => Ok(PolicyKind::ContextAware),
            "semantic" => Ok(PolicyKind::Semantic),
            _ => Err(PolicyError::UnknownPolicy(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("no user context row for UE `{0}`")]
    MissingContext(UeId),
    #[error("unknown policy `{0}` (expected static, dns, context or semantic)")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScaleReason {
    IncidentPreempt,
    NormalcyReclaim,
    DemandTracking,
    /// Fixed provisioning of a declared slice.
    Provision,
    /// Reactive utilization-threshold scaling.
    ThresholdScale,
}

impl ScaleReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ScaleReason::IncidentPreempt => "INCIDENT_PREEMPT",
            ScaleReason::NormalcyReclaim => "NORMALCY_RECLAIM",
            ScaleReason::DemandTracking => "DEMAND_TRACKING",
            ScaleReason::Provision => "PROVISION",
            ScaleReason::ThresholdScale => "THRESHOLD_SCALE",
        }
    }
}

impl fmt::Display for ScaleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleAction {
    pub slice_id: SliceId,
    pub target: ResourceDemand,
    pub reason: ScaleReason,
    pub issued_at: Tick,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchRequest {
    pub ue_id: UeId,
    pub from_slice: SliceId,
    pub to_class: ServiceClass,
    /// Tasks behind `to_class`; decides the edge/core compute split of a new slice.
    pub tasks: BTreeSet<TaskKind>,
    pub issued_at: Tick,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Scale(ScaleAction),
    Switch(SwitchRequest),
}

/// Tunables for all policies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicyParams {
    /// Preemptive scale factor for URLLC slices on incident onset.
    pub gamma: f64,
    /// Ticks the incident must stay clear before resources are reclaimed.
    pub hysteresis_ticks: u64,
    /// Relative drift that triggers demand tracking.
    pub epsilon: f64,
    pub dns_window: usize,
    pub dns_u_hi: f64,
    pub dns_u_lo: f64,
    pub dns_step: f64,
    /// Signaling delay between a switch request and its execution.
    pub switch_delay: u64,
    /// Maximum uniform jitter added to event times; 0 disables it.
    pub event_jitter: u64,
    pub zones: Vec<String>,
    pub context_table: Vec<ContextRule>,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            gamma: 2.0,
            hysteresis_ticks: 10,
            epsilon: 0.1,
            dns_window: 5,
            dns_u_hi: 0.8,
            dns_u_lo: 0.3,
            dns_step: 0.25,
            switch_delay: 1,
            event_jitter: 0,
            zones: vec!["default".to_string()],
            context_table: Vec::new(),
        }
    }
}

/// Recent per-slice utilization samples, newest last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UtilizationHistory {
    samples: BTreeMap<SliceId, VecDeque<f64>>,
    capacity: usize,
}

impl UtilizationHistory {
    pub fn new(capacity: usize) -> Self {
        Self {
            samples: BTreeMap::new(),
            capacity: capacity.max(1),
        }
    }

    pub fn record(&mut self, slice: &str, value: f64) {
        let q = self.samples.entry(slice.to_string()).or_default();
        q.push_back(value);
        while q.len() > self.capacity {
            q.pop_front();
        }
    }

    pub fn window(&self, slice: &str) -> Option<&VecDeque<f64>> {
        self.samples.get(slice)
    }
}

/// Everything a policy may look at in one tick. Each policy reads only the
/// fields it declares; the engine fills all of them.
pub struct StepInput<'a> {
    pub now: Tick,
    pub table: &'a SliceTable,
    pub ues: &'a BTreeMap<UeId, UeContext>,
    /// Semantic state per UE (SSCI output).
    pub semantic: &'a BTreeMap<UeId, UeSemanticState>,
    pub global_kg: &'a KnowledgeGraph,
    pub dictionary: &'a Dictionary,
    pub contexts: &'a [UserContext],
    pub utilization: &'a UtilizationHistory,
    /// UEs with a switch request in flight.
    pub pending: &'a BTreeSet<UeId>,
    /// Compression ratio per UE.
    pub rho: &'a BTreeMap<UeId, f64>,
    /// Declared initial allocation of every template slice.
    pub templates: &'a BTreeMap<SliceId, ResourceDemand>,
    pub calibration: &'a QosCalibration,
    pub params: &'a PolicyParams,
}

pub trait Policy: Send {
    fn kind(&self) -> PolicyKind;

    fn step(&mut self, input: &StepInput<'_>) -> Result<Vec<Action>, PolicyError>;
}

/// Shrinks the growth in `target` so the slice's extra commitment fits
/// `headroom`, then charges the headroom. Shrinking fields pass unchanged.
pub fn fit_to_headroom(
    slice: &SliceInstance,
    target: &ResourceDemand,
    headroom: &mut DomainVector,
) -> ResourceDemand {
    let current = slice.allocation;
    let mut grown = *target;
    for f in DemandField::VOLUME {
        grown.set(f, quantize_up(target.get(f)));
    }
    let net = slice.commitment_for(&grown) - slice.commitment();
    let mut factor: f64 = 1.0;
    for (d, n) in net.iter() {
        if n > 0.0 {
            factor = factor.min((headroom[d].max(0.0)) / n);
        }
    }
    let mut out = grown;
    if factor < 1.0 {
        for f in DemandField::VOLUME {
            let (a, t) = (current.get(f), grown.get(f));
            if t > a {
                out.set(f, a + quantize_down((t - a) * factor));
            }
        }
    }
    let mut net = slice.commitment_for(&out) - slice.commitment();
    if net.iter().any(|(d, n)| n > 0.0 && n > headroom[d]) {
        for f in DemandField::VOLUME {
            out.set(f, out.get(f).min(current.get(f)));
        }
        net = slice.commitment_for(&out) - slice.commitment();
    }
    *headroom = *headroom - net;
    out
}

/// Whether `target` departs from `current` by more than `epsilon` relative
/// in some volume field, or differs in any service level.
pub fn drifted(current: &ResourceDemand, target: &ResourceDemand, epsilon: f64) -> bool {
    DemandField::ALL.into_iter().any(|f| {
        let (a, t) = (current.get(f), target.get(f));
        if DemandField::VOLUME.contains(&f) {
            (t - a).abs() > epsilon * a.abs().max(f64::MIN_POSITIVE) && quantize_up(t) != a
        } else {
            a != t
        }
    })
}

/// Per-domain free capacity of the table's pool.
pub fn pool_headroom(table: &SliceTable) -> DomainVector {
    *table.pool().capacity() - *table.pool().committed()
}

/// Builds a fresh policy instance.
pub fn make_policy(kind: PolicyKind) -> Box<dyn Policy> {
    match kind {
        PolicyKind::Static => Box::new(crate::baselines::StaticPolicy),
        PolicyKind::Dns => Box::new(crate::baselines::DnsPolicy::default()),
        PolicyKind::ContextAware => Box::new(crate::baselines::ContextPolicy),
        PolicyKind::Semantic => Box::new(crate::orchestrator::SemanticPolicy::default()),
    }
}
