//! The semantic reasoning plane.
//!
//! Per tick: identify each UE's service class from its stream graph (SSCI),
//! request a slice switch when the identified class departs from the served
//! one (SPSS), size every slice from the classes it carries (SRCM), and
//! pre-empt or reclaim capacity for critical slices around incidents (SPRP).

mod sprp;
mod switch;

use std::collections::{BTreeMap, BTreeSet};

pub use sprp::{sprp_step, track_demand, SprpState};
pub use switch::{decide_switch, plan_switch, SwitchDecision, SwitchPlan, DYNAMIC_SD_BASE};

use crate::catalog::{
    aggregate_class, quantify, tradeoff_demand, DemandField, QosCalibration, QosVector,
    ResourceDemand, ServiceClass,
};
use crate::policy::{Action, Policy, PolicyError, PolicyKind, StepInput, SwitchRequest};
use crate::semantic::{extract_tasks, Dictionary, KnowledgeGraph, TaskKind, Tick};
use crate::slice::{SliceId, SliceInstance, UeId};

#[derive(Debug, Clone, PartialEq)]
pub struct UeSemanticState {
    pub ue_id: UeId,
    pub last_tasks: BTreeSet<TaskKind>,
    pub identified_class: ServiceClass,
    pub served_class: ServiceClass,
    pub served_slice: Option<SliceId>,
    /// Active compression ratio of the UE's semantic encoder.
    pub rho: f64,
    /// Tick at which the outstanding switch request was issued.
    pub pending_since: Option<Tick>,
}

impl UeSemanticState {
    pub fn new(ue_id: &str, rho: f64) -> Self {
        Self {
            ue_id: ue_id.to_string(),
            last_tasks: BTreeSet::new(),
            identified_class: ServiceClass::default_class(),
            served_class: ServiceClass::default_class(),
            served_slice: None,
            rho,
            pending_since: None,
        }
    }
}

/// Re-derives the UE's tasks and class from its stream graph.
pub fn ssci_identify(
    state: &UeSemanticState,
    kg: &KnowledgeGraph,
    dict: &Dictionary,
    now: Tick,
) -> UeSemanticState {
    let tasks = extract_tasks(kg, dict, now);
    UeSemanticState {
        identified_class: aggregate_class(&tasks),
        last_tasks: tasks,
        ..state.clone()
    }
}

/// Issues a switch request when the identified class differs from the served
/// one and nothing is in flight for this UE.
pub fn spss_check(state: &UeSemanticState, now: Tick) -> Option<SwitchRequest> {
    if state.identified_class == state.served_class || state.pending_since.is_some() {
        return None;
    }
    let from = state.served_slice.clone()?;
    Some(SwitchRequest {
        ue_id: state.ue_id.clone(),
        from_slice: from,
        to_class: state.identified_class,
        tasks: state.last_tasks.clone(),
        issued_at: now,
    })
}

/// Minimum kept on an empty slice so it can receive switches.
pub fn keep_alive_floor(cal: &QosCalibration) -> ResourceDemand {
    quantify(&QosVector::default(), cal, 1).expect("one UE")
}

/// Per-UE demand of a class under compression ratio `rho`.
pub fn ue_demand(class: &ServiceClass, rho: f64, cal: &QosCalibration) -> ResourceDemand {
    let base = quantify(&class.qos, cal, 1).expect("one UE");
    tradeoff_demand(&base, rho, cal.kappa).unwrap_or(base)
}

/// Resources needed by `slice` for the UEs it carries, with the slice-wide
/// compression ratio taken as the smallest among them. An empty slice keeps
/// its class's service levels on keep-alive volume.
pub fn srcm_compute(slice: &SliceInstance, rhos: &[f64], cal: &QosCalibration) -> ResourceDemand {
    let n = u32::try_from(rhos.len()).unwrap_or(u32::MAX);
    if n == 0 {
        let mut idle = quantify(&slice.service_class.qos, cal, 1).expect("one UE");
        let floor = keep_alive_floor(cal);
        for f in DemandField::VOLUME {
            idle.set(f, floor.get(f));
        }
        return idle;
    }
    let base = quantify(&slice.service_class.qos, cal, n).expect("non-empty");
    let rho = rhos.iter().copied().fold(1.0, f64::min);
    tradeoff_demand(&base, rho, cal.kappa).unwrap_or(base)
}

/// Compression ratios of the UEs attached to `slice`, in UE order.
pub fn attached_rhos(slice: &SliceInstance, rho: &BTreeMap<UeId, f64>) -> Vec<f64> {
    slice
        .attached_ues
        .iter()
        .map(|ue| rho.get(ue).copied().unwrap_or(1.0))
        .collect()
}

/// SSCI, SPSS, SRCM and SPRP behind the common policy interface.
#[derive(Debug, Default)]
pub struct SemanticPolicy {
    pub sprp: SprpState,
}

impl Policy for SemanticPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Semantic
    }

    fn step(&mut self, input: &StepInput<'_>) -> Result<Vec<Action>, PolicyError> {
        let mut actions: Vec<Action> = input
            .semantic
            .values()
            .filter_map(|state| spss_check(state, input.now))
            .map(Action::Switch)
            .collect();
        actions.extend(
            sprp_step(
                input.global_kg,
                input.dictionary,
                input.table,
                input.rho,
                input.calibration,
                input.params,
                &mut self.sprp,
                input.now,
            )
            .into_iter()
            .map(Action::Scale),
        );
        Ok(actions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{qos_of, QosLevel, SliceServiceType};
    use crate::semantic::{SemanticEvent, Ttl};
    use crate::slice::SNssai;

    fn kg(triples: &[&str]) -> KnowledgeGraph {
        let dict = Dictionary::first_responder();
        let mut kg = KnowledgeGraph::new();
        for t in triples {
            kg.ingest(&SemanticEvent::new("s", 0, t.parse().unwrap(), Ttl::Persistent), &dict, 0)
                .unwrap();
        }
        kg
    }

    #[test]
    fn ssci_on_empty_graph() {
        let dict = Dictionary::first_responder();
        let s = ssci_identify(&UeSemanticState::new("u", 1.0), &kg(&[]), &dict, 0);
        assert_eq!(s.identified_class, ServiceClass::default_class());
    }

    #[test]
    fn ssci_accident_is_delay_critical_and_idempotent() {
        let dict = Dictionary::first_responder();
        let g = kg(&["bus hits car", "driver injured_in accident"]);
        let s = ssci_identify(&UeSemanticState::new("u", 1.0), &g, &dict, 0);
        // Max of the two rows' delay sensitivity.
        let expected = qos_of(TaskKind::EventDetection)
            .delay_sensitivity
            .max(qos_of(TaskKind::AlertNotification).delay_sensitivity);
        assert_eq!(expected, QosLevel::High);
        assert_eq!(s.identified_class.qos.delay_sensitivity, expected);
        assert_eq!(ssci_identify(&s, &g, &dict, 0), s);
        assert_eq!(s.served_class, ServiceClass::default_class());
    }

    #[test]
    fn spss_rules() {
        let mut s = UeSemanticState::new("u", 1.0);
        s.served_slice = Some("embb".into());
        assert!(spss_check(&s, 3).is_none());

        s.identified_class = aggregate_class([TaskKind::AlertNotification].iter());
        assert_eq!(s.identified_class.sst_hint, SliceServiceType::Urllc);
        let req = spss_check(&s, 3).unwrap();
        assert_eq!(req.to_class, s.identified_class);
        assert_eq!(req.from_slice, "embb");

        s.pending_since = Some(3);
        assert!(spss_check(&s, 4).is_none());
    }

    fn slice_of(class: ServiceClass) -> SliceInstance {
        SliceInstance::new(
            "x",
            SNssai::with_type(class.sst_hint, 1).unwrap(),
            class,
            ResourceDemand::default(),
            ResourceDemand::default(),
            0.0,
        )
    }

    #[test]
    fn srcm_cases() {
        let cal = QosCalibration::default();
        let class = aggregate_class([TaskKind::TeleHealth].iter());
        let s = slice_of(class);
        let idle = srcm_compute(&s, &[], &cal);
        let floor = keep_alive_floor(&cal);
        let one = quantify(&class.qos, &cal, 1).unwrap();
        for f in DemandField::ALL {
            let want = if DemandField::VOLUME.contains(&f) { floor.get(f) } else { one.get(f) };
            assert_eq!(idle.get(f), want, "{f:?}");
        }
        assert_eq!(
            srcm_compute(&s, &[1.0, 1.0], &cal),
            quantify(&class.qos, &cal, 2).unwrap()
        );
        let half = srcm_compute(&s, &[1.0, 0.5], &cal);
        let full = quantify(&class.qos, &cal, 2).unwrap();
        assert_eq!(half.bandwidth_mbps, full.bandwidth_mbps / 2.0);
        assert_eq!(half.compute_units, full.compute_units + cal.kappa);
    }
}
