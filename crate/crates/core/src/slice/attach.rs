use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{SNssai, SliceError, SliceId, SliceTable, UeId};
use crate::catalog::ResourceDemand;

/// Upper bound on the allowed NSSAI list of a UE.
pub const MAX_ALLOWED_NSSAI: usize = 8;

/// Registration progress of a UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AttachState {
    Idle,
    RrcRequested,
    UdmQueried,
    NssfSelected,
    Authenticated,
    Registered,
    Rejected,
}

impl AttachState {
    pub fn as_str(self) -> &'static str {
        match self {
            AttachState::Idle => "IDLE",
            AttachState::RrcRequested => "RRC_REQUESTED",
            AttachState::UdmQueried => "UDM_QUERIED",
            AttachState::NssfSelected => "NSSF_SELECTED",
            AttachState::Authenticated => "AUTHENTICATED",
            AttachState::Registered => "REGISTERED",
            AttachState::Rejected => "REJECTED",
        }
    }

    /// The successor on the success path.
    pub fn next(self) -> Option<AttachState> {
        match self {
            AttachState::Idle => Some(AttachState::RrcRequested),
            AttachState::RrcRequested => Some(AttachState::UdmQueried),
            AttachState::UdmQueried => Some(AttachState::NssfSelected),
            AttachState::NssfSelected => Some(AttachState::Authenticated),
            AttachState::Authenticated => Some(AttachState::Registered),
            AttachState::Registered | AttachState::Rejected => None,
        }
    }
}

impl fmt::Display for AttachState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttachError {
    #[error("requested S-NSSAI {0} is not in the allowed NSSAI")]
    NotAllowed(SNssai),
    #[error("no slice instance serves S-NSSAI {0}")]
    SliceNotFound(SNssai),
    #[error("admission refused: {0}")]
    CapacityExceeded(SliceError),
    #[error("authentication failed")]
    AuthFailure,
    #[error("attach requires state IDLE, UE is {0}")]
    InvalidState(AttachState),
}

impl AttachError {
    pub fn code(&self) -> &'static str {
        match self {
            AttachError::NotAllowed(_) => "NotAllowed",
            AttachError::SliceNotFound(_) => "SliceNotFound",
            AttachError::CapacityExceeded(_) => "CapacityExceeded",
            AttachError::AuthFailure => "AuthFailure",
            AttachError::InvalidState(_) => "InvalidState",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UeContext {
    pub ue_id: UeId,
    pub allowed_nssai: Vec<SNssai>,
    pub state: AttachState,
    pub current_slice: Option<SliceId>,
    pub stream_id: String,
}

impl UeContext {
    pub fn new(ue_id: &str, stream_id: &str, allowed_nssai: Vec<SNssai>) -> Self {
        Self {
            ue_id: ue_id.to_string(),
            allowed_nssai,
            state: AttachState::Idle,
            current_slice: None,
            stream_id: stream_id.to_string(),
        }
    }
}

/// One stage of the signaling exchange and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub stage: AttachState,
    pub outcome: Result<(), AttachError>,
}

impl StageRecord {
    pub fn outcome_label(&self) -> String {
        match &self.outcome {
            Ok(()) => "ok".to_string(),
            Err(e) => format!("rejected:{}", e.code()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttachOutcome {
    pub ue: UeContext,
    pub stages: Vec<StageRecord>,
    pub result: Result<SliceId, AttachError>,
}

impl SliceTable {
    /// Runs the registration procedure for `ue` towards `requested`.
    ///
    /// Stages run in order RRC setup, subscriber data query, slice selection,
    /// authentication and registration accept. Slice selection checks the
    /// allowed NSSAI, slice existence and admission headroom (UE scale limit
    /// and, when `marginal` is non-zero, pool capacity). A failing stage ends
    /// the procedure with the UE in `REJECTED` and the table untouched.
    pub fn attach(
        &mut self,
        ue: &UeContext,
        requested: SNssai,
        marginal: &ResourceDemand,
        auth_ok: bool,
    ) -> AttachOutcome {
        let mut next = ue.clone();
        let mut stages = Vec::new();
        if ue.state != AttachState::Idle {
            return AttachOutcome {
                ue: next,
                stages,
                result: Err(AttachError::InvalidState(ue.state)),
            };
        }

        let fail = |mut ue: UeContext, mut stages: Vec<StageRecord>, stage, err: AttachError| {
            ue.state = AttachState::Rejected;
            ue.current_slice = None;
            stages.push(StageRecord {
                stage,
                outcome: Err(err.clone()),
            });
            AttachOutcome {
                ue,
                stages,
                result: Err(err),
            }
        };

        for stage in [AttachState::RrcRequested, AttachState::UdmQueried] {
            next.state = stage;
            stages.push(StageRecord {
                stage,
                outcome: Ok(()),
            });
        }

        if !ue.allowed_nssai.contains(&requested) {
            return fail(next, stages, AttachState::NssfSelected, AttachError::NotAllowed(requested));
        }
        let Some(slice_id) = self.slice_by_snssai(&requested).map(|s| s.id.clone()) else {
            return fail(next, stages, AttachState::NssfSelected, AttachError::SliceNotFound(requested));
        };
        let mut trial = self.clone();
        if let Err(e) = trial.admit(&ue.ue_id, &slice_id, marginal) {
            return fail(next, stages, AttachState::NssfSelected, AttachError::CapacityExceeded(e));
        }
        next.state = AttachState::NssfSelected;
        stages.push(StageRecord {
            stage: AttachState::NssfSelected,
            outcome: Ok(()),
        });

        if !auth_ok {
            return fail(next, stages, AttachState::Authenticated, AttachError::AuthFailure);
        }
        next.state = AttachState::Authenticated;
        stages.push(StageRecord {
            stage: AttachState::Authenticated,
            outcome: Ok(()),
        });

        *self = trial;
        next.state = AttachState::Registered;
        next.current_slice = Some(slice_id.clone());
        stages.push(StageRecord {
            stage: AttachState::Registered,
            outcome: Ok(()),
        });
        AttachOutcome {
            ue: next,
            stages,
            result: Ok(slice_id),
        }
    }
}
