//! Reference policies: fixed provisioning, utilization-threshold scaling and
//! context-rule switching.
//!
//! None of them reads the knowledge graph or the semantic state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{aggregate_class, DemandField, ResourceDemand};
use crate::orchestrator::track_demand;
use crate::policy::{
    drifted, fit_to_headroom, pool_headroom, Action, Policy, PolicyError, PolicyKind,
    ScaleAction, ScaleReason, StepInput, SwitchRequest,
};
use crate::semantic::{TaskKind, Tick};
use crate::slice::{SliceId, SliceInstance, UeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mobility {
    Stationary,
    Mobile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Availability {
    Busy,
    Available,
}

/// Observable, non-semantic context of one UE at one tick.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserContext {
    pub ue_id: UeId,
    pub location_zone: String,
    pub mobility: Mobility,
    pub availability: Availability,
}

/// One row of the context table. Absent fields match anything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextRule {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zone: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mobility: Option<Mobility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub availability: Option<Availability>,
    pub tasks: Vec<TaskKind>,
}

impl ContextRule {
    pub fn matches(&self, ctx: &UserContext) -> bool {
        self.zone.as_ref().is_none_or(|z| *z == ctx.location_zone)
            && self.mobility.is_none_or(|m| m == ctx.mobility)
            && self.availability.is_none_or(|a| a == ctx.availability)
    }
}

/// Tasks assumed for a UE: those of the first matching row, else none.
pub fn context_tasks<'a>(table: &'a [ContextRule], ctx: &UserContext) -> &'a [TaskKind] {
    table
        .iter()
        .find(|r| r.matches(ctx))
        .map(|r| r.tasks.as_slice())
        .unwrap_or(&[])
}

/// Holds every declared slice at its initial allocation.
#[derive(Debug, Default)]
pub struct StaticPolicy;

impl Policy for StaticPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Static
    }

    fn step(&mut self, input: &StepInput<'_>) -> Result<Vec<Action>, PolicyError> {
        if input.now != 0 {
            return Ok(Vec::new());
        }
        Ok(input
            .templates
            .iter()
            .map(|(id, target)| {
                Action::Scale(ScaleAction {
                    slice_id: id.clone(),
                    target: *target,
                    reason: ScaleReason::Provision,
                    issued_at: input.now,
                })
            })
            .collect())
    }
}

/// Utilization of a slice: the most loaded volume resource, where load is
/// the summed requirement of its attached UEs. An empty allocation under
/// load reads as `SATURATED`.
pub fn slice_utilization(slice: &SliceInstance, load: &ResourceDemand) -> f64 {
    DemandField::VOLUME
        .into_iter()
        .map(|f| {
            let (l, a) = (load.get(f), slice.allocation.get(f));
            if a > 0.0 {
                (l / a).min(SATURATED)
            } else if l > 0.0 {
                SATURATED
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

pub const SATURATED: f64 = 10.0;

/// Scales a slice up or down by a fixed step when its windowed mean
/// utilization leaves the band, then waits out a cooldown.
#[derive(Debug, Default)]
pub struct DnsPolicy {
    last_action: BTreeMap<SliceId, Tick>,
}

impl Policy for DnsPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Dns
    }

    fn step(&mut self, input: &StepInput<'_>) -> Result<Vec<Action>, PolicyError> {
        let p = input.params;
        let window = p.dns_window.max(1);
        let mut headroom = pool_headroom(input.table);
        let mut out = Vec::new();
        for slice in input.table.slices() {
            if let Some(last) = self.last_action.get(&slice.id) {
                if input.now < last + window as Tick {
                    continue;
                }
            }
            let Some(samples) = input.utilization.window(&slice.id) else {
                continue;
            };
            if samples.len() < window {
                continue;
            }
            let mean = samples.iter().rev().take(window).sum::<f64>() / window as f64;
            let target = if mean > p.dns_u_hi {
                let mut t = slice.allocation.scale_volume(1.0 + p.dns_step);
                for f in DemandField::VOLUME {
                    t.set(f, t.get(f).max(slice.sla.get(f)));
                }
                t
            } else if mean < p.dns_u_lo {
                let mut t = slice.allocation.scale_volume(1.0 - p.dns_step);
                for f in DemandField::VOLUME {
                    t.set(f, t.get(f).max(slice.sla.get(f)));
                }
                t
            } else {
                continue;
            };
            let fitted = fit_to_headroom(slice, &target, &mut headroom);
            if drifted(&slice.allocation, &fitted, 0.0) {
                self.last_action.insert(slice.id.clone(), input.now);
                out.push(Action::Scale(ScaleAction {
                    slice_id: slice.id.clone(),
                    target: fitted,
                    reason: ScaleReason::ThresholdScale,
                    issued_at: input.now,
                }));
            }
        }
        Ok(out)
    }
}

/// Switches UEs by a zone/mobility/availability lookup table and sizes
/// slices by the classes they carry.
#[derive(Debug, Default)]
pub struct ContextPolicy;

impl Policy for ContextPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::ContextAware
    }

    fn step(&mut self, input: &StepInput<'_>) -> Result<Vec<Action>, PolicyError> {
        let mut out = Vec::new();
        for ue in input.ues.values() {
            let ctx = input
                .contexts
                .iter()
                .find(|c| c.ue_id == ue.ue_id)
                .ok_or_else(|| PolicyError::MissingContext(ue.ue_id.clone()))?;
            let Some(from) = ue.current_slice.as_ref() else {
                continue;
            };
            let Some(served) = input.table.slice(from) else {
                continue;
            };
            if input.pending.contains(&ue.ue_id) {
                continue;
            }
            let tasks = context_tasks(&input.params.context_table, ctx);
            let class = aggregate_class(tasks);
            if class != served.service_class {
                out.push(Action::Switch(SwitchRequest {
                    ue_id: ue.ue_id.clone(),
                    from_slice: from.clone(),
                    to_class: class,
                    tasks: tasks.iter().copied().collect(),
                    issued_at: input.now,
                }));
            }
        }
        out.extend(
            track_demand(
                input.table,
                input.rho,
                input.calibration,
                input.params,
                false,
                input.now,
            )
            .into_iter()
            .map(Action::Scale),
        );
        Ok(out)
    }
}
