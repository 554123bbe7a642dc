use std::collections::BTreeMap;

use crate::catalog::{QosCalibration, ResourceDemand, SliceServiceType};
use crate::policy::{
    drifted, fit_to_headroom, pool_headroom, PolicyParams, ScaleAction, ScaleReason,
};
use crate::semantic::{incident_active, Dictionary, KnowledgeGraph, Tick};
use crate::slice::{SliceInstance, SliceTable, UeId};

use super::{attached_rhos, srcm_compute};

/// Incident bookkeeping carried between ticks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SprpState {
    pub prev_incident: bool,
    /// Critical slices are held at boosted size until reclaimed.
    pub boost: bool,
    /// When the incident last went from active to clear.
    pub cleared_at: Option<Tick>,
}

fn is_critical(slice: &SliceInstance) -> bool {
    slice.service_class.sst_hint == SliceServiceType::Urllc
}

/// Demand target of a slice, never below its SLA while occupied.
fn tracked_target(
    slice: &SliceInstance,
    rho: &BTreeMap<UeId, f64>,
    cal: &QosCalibration,
) -> ResourceDemand {
    let demand = srcm_compute(slice, &attached_rhos(slice, rho), cal);
    if slice.attached_ues.is_empty() {
        demand
    } else {
        demand.strictest(&slice.sla)
    }
}

fn grows(slice: &SliceInstance, target: &ResourceDemand) -> bool {
    let total = |v: crate::slice::DomainVector| v.iter().map(|(_, x)| x).sum::<f64>();
    total(slice.commitment_for(target)) > total(slice.commitment())
}

/// One tick of pre-emptive reservation and post-incident reclaim, followed
/// by demand tracking on quiet ticks.
#[allow(clippy::too_many_arguments)]
pub fn sprp_step(
    kg: &KnowledgeGraph,
    dict: &Dictionary,
    table: &SliceTable,
    rho: &BTreeMap<UeId, f64>,
    cal: &QosCalibration,
    params: &PolicyParams,
    state: &mut SprpState,
    now: Tick,
) -> Vec<ScaleAction> {
    let active = incident_active(kg, dict, now);
    let rising = active && !state.prev_incident;
    let falling = !active && state.prev_incident;
    state.prev_incident = active;
    let action = |slice: &SliceInstance, target, reason| ScaleAction {
        slice_id: slice.id.clone(),
        target,
        reason,
        issued_at: now,
    };

    if rising {
        state.boost = true;
        state.cleared_at = None;
        let mut headroom = pool_headroom(table);
        let mut out = Vec::new();
        for slice in table.slices().filter(|s| is_critical(s)) {
            let base = slice.allocation.strictest(&tracked_target(slice, rho, cal));
            let boosted = base.scale_volume(params.gamma);
            out.push(action(
                slice,
                fit_to_headroom(slice, &boosted, &mut headroom),
                ScaleReason::IncidentPreempt,
            ));
        }
        return out;
    }
    if falling {
        state.cleared_at = Some(now);
    }
    if !active {
        if let Some(cleared) = state.cleared_at {
            if now >= cleared + params.hysteresis_ticks {
                state.boost = false;
                state.cleared_at = None;
                return table
                    .slices()
                    .filter(|s| is_critical(s))
                    .map(|s| action(s, tracked_target(s, rho, cal), ScaleReason::NormalcyReclaim))
                    .collect();
            }
        }
    }

    track_demand(table, rho, cal, params, state.boost, now)
}

/// Moves every slice toward its demand when it has drifted by more than the
/// tracking tolerance. With `boost`, critical slices keep the boosted size.
pub fn track_demand(
    table: &SliceTable,
    rho: &BTreeMap<UeId, f64>,
    cal: &QosCalibration,
    params: &PolicyParams,
    boost: bool,
    now: Tick,
) -> Vec<ScaleAction> {
    let mut headroom = pool_headroom(table);
    // Shrinking slices go first so their release funds the growing ones.
    let mut plans: Vec<(&SliceInstance, ResourceDemand)> = table
        .slices()
        .map(|s| {
            let mut target = tracked_target(s, rho, cal);
            if boost && is_critical(s) {
                target = s.allocation.strictest(&target.scale_volume(params.gamma));
            }
            (s, target)
        })
        .collect();
    plans.sort_by_key(|(s, t)| grows(s, t));
    let mut out = Vec::new();
    for (slice, target) in plans {
        let fitted = fit_to_headroom(slice, &target, &mut headroom);
        if drifted(&slice.allocation, &fitted, params.epsilon) {
            out.push(ScaleAction {
                slice_id: slice.id.clone(),
                target: fitted,
                reason: ScaleReason::DemandTracking,
                issued_at: now,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{aggregate_class, quantify};
    use crate::semantic::{SemanticEvent, TaskKind, Ttl};
    use crate::slice::{DomainVector, SNssai, SubnetRegistry};

    fn table() -> SliceTable {
        let cal = QosCalibration::default();
        let class = aggregate_class([TaskKind::AlertNotification].iter());
        let d = quantify(&class.qos, &cal, 1).unwrap();
        let mut t = SliceTable::new(DomainVector([1e4; 5]), SubnetRegistry::default());
        t.add_slice(SliceInstance::new(
            "urllc",
            SNssai::with_type(SliceServiceType::Urllc, 1).unwrap(),
            class,
            d,
            d,
            0.0,
        ))
        .unwrap();
        t.admit("u", "urllc", &ResourceDemand::default()).unwrap();
        t
    }

    fn incident_kg(active: bool) -> KnowledgeGraph {
        let dict = Dictionary::first_responder();
        let mut kg = KnowledgeGraph::new();
        if active {
            for t in ["bus hits car", "driver injured_in accident"] {
                kg.ingest(&SemanticEvent::new("s", 0, t.parse().unwrap(), Ttl::Persistent), &dict, 0)
                    .unwrap();
            }
        }
        kg
    }

    fn run(schedule: impl Fn(Tick) -> bool, ticks: Tick) -> Vec<(Tick, ScaleReason)> {
        let dict = Dictionary::first_responder();
        let (on, off) = (incident_kg(true), incident_kg(false));
        let t = table();
        let rho = BTreeMap::new();
        let cal = QosCalibration::default();
        let params = PolicyParams::default();
        let mut state = SprpState::default();
        let mut log = Vec::new();
        for now in 0..ticks {
            let kg = if schedule(now) { &on } else { &off };
            for a in sprp_step(kg, &dict, &t, &rho, &cal, &params, &mut state, now) {
                if a.reason != ScaleReason::DemandTracking {
                    log.push((now, a.reason));
                }
            }
        }
        log
    }

    #[test]
    fn preempt_fires_once_on_the_rising_edge() {
        let log = run(|t| (50..80).contains(&t), 100);
        assert_eq!(
            log,
            [(50, ScaleReason::IncidentPreempt), (90, ScaleReason::NormalcyReclaim)]
        );
    }

    #[test]
    fn relapse_inside_hysteresis_defers_reclaim() {
        let log = run(|t| (50..80).contains(&t) || (85..88).contains(&t), 120);
        assert_eq!(
            log,
            [
                (50, ScaleReason::IncidentPreempt),
                (85, ScaleReason::IncidentPreempt),
                (98, ScaleReason::NormalcyReclaim)
            ]
        );
    }

    #[test]
    fn preempt_scales_by_gamma_within_headroom() {
        let dict = Dictionary::first_responder();
        let t = table();
        let mut state = SprpState::default();
        let out = sprp_step(
            &incident_kg(true),
            &dict,
            &t,
            &BTreeMap::new(),
            &QosCalibration::default(),
            &PolicyParams::default(),
            &mut state,
            0,
        );
        assert_eq!(out.len(), 1);
        let alloc = t.slice("urllc").unwrap().allocation;
        assert_eq!(out[0].target.bandwidth_mbps, 2.0 * alloc.bandwidth_mbps);
        assert_eq!(out[0].target.compute_units, 2.0 * alloc.compute_units);
    }
}
