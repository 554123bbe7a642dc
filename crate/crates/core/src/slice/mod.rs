//! Slice identity, the shared resource ledger and the attachment procedure.
//!
//! All money moves through [`SliceTable`]: every operation either commits in
//! full or leaves the table exactly as it was. Volume quantities are kept on a
//! 1/1024 grid so that commitments add and subtract without rounding, which
//! makes the ledger conservation check an exact equality.

mod attach;
mod assurance;
mod pool;
mod report;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use attach::{AttachError, AttachOutcome, AttachState, StageRecord, UeContext, MAX_ALLOWED_NSSAI};
pub use assurance::{assure_sla, SlaViolation, ViolationKind};
pub use pool::{Domain, DomainVector, ResourcePool, SubnetRegistry};
pub use report::{aggregate_reports, ActionCounts, MetricsSample, ReportFragment, SliceAggregate, SliceSample};
pub use table::{CommitRecord, Delegation, SliceInstance, SliceTable, SwitchTarget};

use crate::catalog::{DemandField, SliceServiceType};

pub type UeId = String;
pub type SliceId = String;

/// Resolution of the resource ledger.
pub const QUANTUM: f64 = 1024.0;

/// Rounds up onto the ledger grid.
pub fn quantize_up(x: f64) -> f64 {
    (x * QUANTUM).ceil() / QUANTUM
}

/// Rounds down onto the ledger grid.
pub fn quantize_down(x: f64) -> f64 {
    (x * QUANTUM).floor() / QUANTUM
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SliceError {
    #[error("capacity exceeded in {domain}: need {requested}, {available} available")]
    CapacityExceeded {
        domain: Domain,
        requested: f64,
        available: f64,
    },
    #[error("slice `{slice}` admits at most {limit} UEs")]
    ScaleLimit { slice: SliceId, limit: u64 },
    #[error("slice `{0}` not found")]
    SliceNotFound(SliceId),
    #[error("slice `{0}` already exists")]
    DuplicateSlice(SliceId),
    #[error("S-NSSAI {0} already used by another slice")]
    DuplicateSnssai(SNssai),
    #[error("release of {field} exceeds the current allocation")]
    ReleaseUnderflow { field: DemandField },
    #[error("operation would take slice `{slice}` below its SLA floor in {field}")]
    SlaFloor { slice: SliceId, field: DemandField },
    #[error("negative or non-finite quantity in {0}")]
    InvalidDemand(DemandField),
    #[error("no subnet registered for domain {0}")]
    UnregisteredSubnet(Domain),
    #[error("UE `{0}` is not attached to any slice")]
    NotAttached(UeId),
    #[error("UE `{0}` is already attached to slice `{1}`")]
    AlreadyAttached(UeId, SliceId),
    #[error("UE `{ue}` is not subscribed to service type {sst}")]
    NotSubscribed { ue: UeId, sst: SliceServiceType },
}

impl SliceError {
    /// Stable short name used in log columns.
    pub fn code(&self) -> &'static str {
        match self {
            SliceError::CapacityExceeded { .. } => "CapacityExceeded",
            SliceError::ScaleLimit { .. } => "ScaleLimit",
            SliceError::SliceNotFound(_) => "SliceNotFound",
            SliceError::DuplicateSlice(_) => "DuplicateSlice",
            SliceError::DuplicateSnssai(_) => "DuplicateSnssai",
            SliceError::ReleaseUnderflow { .. } => "ReleaseUnderflow",
            SliceError::SlaFloor { .. } => "SlaFloor",
            SliceError::InvalidDemand(_) => "InvalidDemand",
            SliceError::UnregisteredSubnet(_) => "UnregisteredSubnet",
            SliceError::NotAttached(_) => "NotAttached",
            SliceError::AlreadyAttached(..) => "AlreadyAttached",
            SliceError::NotSubscribed { .. } => "NotSubscribed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NssaiError {
    #[error("slice/service type {0} is not one of 1 (EMBB), 2 (URLLC), 3 (MMTC)")]
    BadSst(u64),
    #[error("slice differentiator {0:#x} does not fit in 24 bits")]
    BadSd(u64),
    #[error("malformed S-NSSAI `{0}` (expected <sst>:<sd hex>)")]
    Malformed(String),
}

/// Single network slice selection assistance information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SNssai {
    sst: SliceServiceType,
    sd: u32,
}

impl SNssai {
    pub const SD_LIMIT: u32 = 1 << 24;

    pub fn new(sst: u8, sd: u32) -> Result<Self, NssaiError> {
        let sst = SliceServiceType::from_code(sst).ok_or(NssaiError::BadSst(u64::from(sst)))?;
        Self::with_type(sst, sd)
    }

    pub fn with_type(sst: SliceServiceType, sd: u32) -> Result<Self, NssaiError> {
        if sd >= Self::SD_LIMIT {
            return Err(NssaiError::BadSd(u64::from(sd)));
        }
        Ok(Self { sst, sd })
    }

    pub fn sst(&self) -> SliceServiceType {
        self.sst
    }

    pub fn sd(&self) -> u32 {
        self.sd
    }
}

impl fmt::Display for SNssai {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:06x}", self.sst.code(), self.sd)
    }
}

impl FromStr for SNssai {
    type Err = NssaiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || NssaiError::Malformed(s.to_string());
        let (sst, sd) = s.split_once(':').ok_or_else(malformed)?;
        let sst: u64 = sst.parse().map_err(|_| malformed())?;
        let sd = u64::from_str_radix(sd, 16).map_err(|_| malformed())?;
        let sst = u8::try_from(sst).map_err(|_| NssaiError::BadSst(sst))?;
        let sd = u32::try_from(sd).map_err(|_| NssaiError::BadSd(sd))?;
        SNssai::new(sst, sd)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSnssai {
    sst: u64,
    sd: u64,
}

impl Serialize for SNssai {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawSnssai {
            sst: u64::from(self.sst.code()),
            sd: u64::from(self.sd),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SNssai {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawSnssai::deserialize(deserializer)?;
        let sst = u8::try_from(raw.sst)
            .map_err(|_| serde::de::Error::custom(NssaiError::BadSst(raw.sst)))?;
        let sd = u32::try_from(raw.sd)
            .map_err(|_| serde::de::Error::custom(NssaiError::BadSd(raw.sd)))?;
        SNssai::new(sst, sd).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snssai_bounds() {
        assert!(SNssai::new(1, 0xff_ffff).is_ok());
        assert_eq!(SNssai::new(1, 1 << 24), Err(NssaiError::BadSd(1 << 24)));
        assert_eq!(SNssai::new(4, 1), Err(NssaiError::BadSst(4)));
        assert_eq!(SNssai::new(0, 1), Err(NssaiError::BadSst(0)));
    }

    #[test]
    fn snssai_text_round_trip() {
        let s = SNssai::new(2, 0xabc).unwrap();
        assert_eq!(s.to_string(), "2:000abc");
        assert_eq!(s.to_string().parse::<SNssai>().unwrap(), s);
        assert!("2".parse::<SNssai>().is_err());
        assert!("9:1".parse::<SNssai>().is_err());
    }

    #[test]
    fn quantization_grid() {
        assert_eq!(quantize_up(1.0), 1.0);
        assert_eq!(quantize_up(0.3), 308.0 / 1024.0);
        assert_eq!(quantize_down(0.3), 307.0 / 1024.0);
        // Sums on the grid are exact.
        let a = quantize_up(0.1);
        let b = quantize_up(0.2);
        assert_eq!((a + b) - b, a);
    }
}
