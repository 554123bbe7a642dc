//! Service-class catalog.
//!
//! Maps first-responder tasks onto qualitative QoS vectors, folds task sets
//! into service classes and turns QoS levels into concrete resource demands.

mod calibration;
mod demand;
mod qos;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use calibration::QosCalibration;
pub use demand::{tradeoff_demand, DemandField, ResourceDemand};
pub use qos::{QosLevel, QosMetric, QosVector};

use crate::semantic::TaskKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown QoS level token `{0}` (expected LOW, AVG or HIGH)")]
    UnknownLevel(String),
    #[error("unknown slice/service type `{0}`")]
    UnknownSst(String),
    #[error("ue_count must be at least 1")]
    ZeroUes,
    #[error("compression ratio {0} outside (0, 1]")]
    InvalidRho(f64),
    #[error("calibration for {metric} is not strictly monotone in QoS level")]
    NonMonotoneCalibration { metric: QosMetric },
    #[error("calibration value for {metric} is invalid: {reason}")]
    InvalidCalibration { metric: QosMetric, reason: String },
}

/// Standardized slice/service type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SliceServiceType {
    Embb,
    Urllc,
    Mmtc,
}

impl SliceServiceType {
    pub fn code(self) -> u8 {
        match self {
            SliceServiceType::Embb => 1,
            SliceServiceType::Urllc => 2,
            SliceServiceType::Mmtc => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(SliceServiceType::Embb),
            2 => Some(SliceServiceType::Urllc),
            3 => Some(SliceServiceType::Mmtc),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SliceServiceType::Embb => "EMBB",
            SliceServiceType::Urllc => "URLLC",
            SliceServiceType::Mmtc => "MMTC",
        }
    }

    /// URLLC when delay sensitivity and reliability are both HIGH; MMTC for
    /// HIGH scale at LOW bandwidth; EMBB otherwise.
    pub fn classify(qos: &QosVector) -> Self {
        if qos.delay_sensitivity == QosLevel::High && qos.reliability == QosLevel::High {
            SliceServiceType::Urllc
        } else if qos.scale == QosLevel::High && qos.bandwidth == QosLevel::Low {
            SliceServiceType::Mmtc
        } else {
            SliceServiceType::Embb
        }
    }
}

impl fmt::Display for SliceServiceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SliceServiceType {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EMBB" => Ok(SliceServiceType::Embb),
            "URLLC" => Ok(SliceServiceType::Urllc),
            "MMTC" => Ok(SliceServiceType::Mmtc),
            _ => Err(CatalogError::UnknownSst(s.to_string())),
        }
    }
}

/// Canonical identifier of a service class, derived from its QoS vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassId(pub u16);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{:04}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ServiceClass {
    pub id: ClassId,
    pub qos: QosVector,
    pub sst_hint: SliceServiceType,
}

impl ServiceClass {
    pub fn from_qos(qos: QosVector) -> Self {
        Self {
            id: ClassId(qos.code()),
            qos,
            sst_hint: SliceServiceType::classify(&qos),
        }
    }

    /// The all-LOW class handed to UEs with no identified task.
    pub fn default_class() -> Self {
        Self::from_qos(QosVector::default())
    }

    pub fn is_default(&self) -> bool {
        self.qos == QosVector::default()
    }
}

use QosLevel::{Avg as A, High as H, Low as L};

const TASK_TABLE: [(TaskKind, [QosLevel; 7]); 9] = [
    (TaskKind::ContinuousMonitoring, [H, L, A, A, A, H, L]),
    (TaskKind::ObjectDetection, [A, A, A, A, H, H, L]),
    (TaskKind::EventDetection, [A, H, A, A, H, A, L]),
    (TaskKind::AlertNotification, [L, H, H, H, L, L, L]),
    (TaskKind::TrackingObjectOfInterest, [L, A, A, A, H, H, L]),
    (TaskKind::TeleHealth, [H, H, H, A, A, H, L]),
    (TaskKind::RemoteControl, [H, H, H, L, A, L, L]),
    (TaskKind::PushToTalk, [L, A, A, H, L, L, H]),
    (TaskKind::SmartAmbulance, [H, A, A, A, H, H, H]),
];

/// QoS requirement row of a task.
pub fn qos_of(task: TaskKind) -> QosVector {
    let row = TASK_TABLE
        .iter()
        .find(|(t, _)| *t == task)
        .map(|(_, row)| *row)
        .expect("task table covers every TaskKind");
    QosVector::from_array(row)
}

/// Folds a task set into the single class that satisfies every task in it.
pub fn aggregate_class<'a, I>(tasks: I) -> ServiceClass
where
    I: IntoIterator<Item = &'a TaskKind>,
{
    let qos = tasks
        .into_iter()
        .fold(QosVector::default(), |acc, task| acc.join(qos_of(*task)));
    ServiceClass::from_qos(qos)
}

/// Share of a task set's compute that is delegated to the edge.
pub fn edge_share_of(tasks: &BTreeSet<TaskKind>) -> f64 {
    if tasks.is_empty() {
        return 0.0;
    }
    let edge = tasks.iter().filter(|t| t.prefers_edge()).count();
    edge as f64 / tasks.len() as f64
}

/// Maps a QoS vector to a concrete resource demand for `ue_count` UEs.
pub fn quantify(
    qos: &QosVector,
    cal: &QosCalibration,
    ue_count: u32,
) -> Result<ResourceDemand, CatalogError> {
    if ue_count == 0 {
        return Err(CatalogError::ZeroUes);
    }
    let n = f64::from(ue_count);
    Ok(ResourceDemand {
        bandwidth_mbps: cal.bandwidth_mbps[qos.bandwidth.index()] * n,
        delay_budget_ms: cal.delay_budget_ms[qos.delay_sensitivity.index()],
        reliability_prob: cal.reliability[qos.reliability.index()],
        concurrent_ues: cal.scale_ues[qos.scale.index()],
        compute_units: cal.compute_units[qos.compute.index()] * n,
        storage_gb: cal.storage_gb[qos.storage.index()] * n,
        handover_rate_per_min: cal.handovers_per_min[qos.mobility.index()],
    })
}
