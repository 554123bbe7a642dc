//! Synthetic first-responder scenario: a road accident that escalates into
//! a fire, observed by a roadside camera and handled by police, fire,
//! medical and dispatch crews.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::baselines::{Availability, ContextRule, Mobility};
use crate::catalog::SliceServiceType;
use crate::policy::PolicyParams;
use crate::semantic::{SemanticEvent, TaskKind, Tick, Ttl};
use crate::slice::SNssai;

use super::scenario::{CalibrationSpec, ContextStep, PoolSpec, ScenarioFile, SliceTemplate, UeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub ues: u32,
    pub duration: Tick,
    pub t_accident: Tick,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            ues: 6,
            duration: 200,
            t_accident: 50,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy)]
enum Role {
    Camera,
    PolicePatrol,
    PoliceTracker,
    Firefighter,
    Medic,
    Dispatcher,
}

const ROLES: [(Role, &str); 6] = [
    (Role::Camera, "camera"),
    (Role::PolicePatrol, "police"),
    (Role::PoliceTracker, "police"),
    (Role::Firefighter, "firefighter"),
    (Role::Medic, "medic"),
    (Role::Dispatcher, "dispatcher"),
];

fn nssai(sst: SliceServiceType) -> SNssai {
    SNssai::with_type(sst, 1).expect("sd 1 is in range")
}

fn step(from: Tick, zone: &str, mobility: Mobility, availability: Availability) -> ContextStep {
    ContextStep {
        from,
        zone: zone.into(),
        mobility,
        availability,
    }
}

fn rule(
    zone: Option<&str>,
    mobility: Option<Mobility>,
    availability: Option<Availability>,
    tasks: &[TaskKind],
) -> ContextRule {
    ContextRule {
        zone: zone.map(str::to_string),
        mobility,
        availability,
        tasks: tasks.to_vec(),
    }
}

fn template(name: &str, sst: SliceServiceType, task: TaskKind, expected: u32) -> SliceTemplate {
    SliceTemplate {
        name: name.into(),
        sst,
        sd: 1,
        tasks: vec![task],
        expected_ues: expected.max(1),
        sla_ues: 1,
        edge_share: None,
        overrides: BTreeMap::new(),
    }
}

/// Builds the accident scenario for `p.ues` responders. Roles are assigned
/// round-robin, so with six UEs every role appears exactly once.
pub fn generate_first_responder(p: GeneratorParams) -> Result<ScenarioFile, GeneratorError> {
    if !(1..=100).contains(&p.ues) {
        return Err(GeneratorError::InvalidParams(format!(
            "ues must be within 1..=100, got {}",
            p.ues
        )));
    }
    if !(100..=10_000).contains(&p.duration) {
        return Err(GeneratorError::InvalidParams(format!(
            "duration must be within 100..=10000, got {}",
            p.duration
        )));
    }
    if p.t_accident >= p.duration {
        return Err(GeneratorError::InvalidParams(format!(
            "t_accident ({}) must be before the end of the run ({})",
            p.t_accident, p.duration
        )));
    }
    use Availability::{Available, Busy};
    use Mobility::{Mobile, Stationary};
    use SliceServiceType::{Embb, Mmtc, Urllc};
    let a = p.t_accident;
    let mut ues = Vec::new();
    let mut timeline = Vec::new();
    let mut per_role: BTreeMap<&str, u32> = BTreeMap::new();
    let (mut embb_first, mut dispatchers) = (0, 0);
    for i in 0..p.ues as usize {
        let (role, name) = ROLES[i % ROLES.len()];
        let n = per_role.entry(name).or_insert(0);
        *n += 1;
        let id = format!("{name}-{n}");
        let mut ev = |t: Tick, triple: &str, ttl: Ttl| {
            timeline.push(SemanticEvent::new(
                &id,
                t,
                triple.parse().expect("generator triples are well formed"),
                ttl,
            ))
        };
        let live = Ttl::Ticks(20);
        let (allowed, context) = match role {
            Role::Camera => {
                ev(0, "camera observes road", Ttl::Persistent);
                (vec![nssai(Embb)], vec![step(0, "roadside", Stationary, Available)])
            }
            Role::PolicePatrol => {
                ev(0, "officer monitors camera", Ttl::Persistent);
                ev(a, "bus hits car", live);
                ev(a, "driver injured_in accident", live);
                (
                    vec![nssai(Embb), nssai(Urllc)],
                    vec![
                        step(0, "patrol", Stationary, Available),
                        step(a, "incident_site", Stationary, Busy),
                        step(a + 30, "patrol", Stationary, Available),
                    ],
                )
            }
            Role::PoliceTracker => {
                ev(a + 5, "officer tracks suspect", live);
                ev(a + 15, "officer tracks suspect", live);
                (
                    vec![nssai(Embb), nssai(Urllc)],
                    vec![step(0, "patrol", Mobile, Available)],
                )
            }
            Role::Firefighter => {
                ev(a, "bus catches fire", live);
                ev(a + 10, "bus catches fire", live);
                ev(a + 10, "firefighter extinguishes fire", live);
                ev(a + 20, "firefighter extinguishes fire", live);
                (
                    vec![nssai(Embb), nssai(Urllc)],
                    vec![
                        step(0, "station", Stationary, Available),
                        step(a, "incident_site", Mobile, Busy),
                        step(a + 30, "station", Stationary, Available),
                    ],
                )
            }
            Role::Medic => {
                ev(a + 5, "ambulance dispatched_to accident", live);
                (
                    vec![nssai(Embb), nssai(Urllc)],
                    vec![
                        step(0, "station", Stationary, Available),
                        step(a + 5, "en_route", Mobile, Busy),
                        step(a + 25, "station", Stationary, Available),
                    ],
                )
            }
            Role::Dispatcher => {
                ev(a + 5, "officer speaks_on ptt_channel", live);
                ev(a + 15, "officer speaks_on ptt_channel", live);
                dispatchers += 1;
                (
                    vec![nssai(Mmtc), nssai(Embb), nssai(Urllc)],
                    vec![step(0, "dispatch_center", Stationary, Busy)],
                )
            }
        };
        if allowed[0].sst() == Embb {
            embb_first += 1;
        }
        ues.push(UeSpec {
            id,
            stream: None,
            allowed_nssai: allowed,
            rho: 1.0,
            auth_failure: false,
            context: context.into_iter().filter(|s| s.from < p.duration).collect(),
        });
    }
    timeline.retain(|e| e.time < p.duration);
    timeline.sort_by_key(|e| e.time);

    let n = f64::from(p.ues);
    let policy_params = PolicyParams {
        zones: [
            "roadside",
            "patrol",
            "incident_site",
            "station",
            "en_route",
            "dispatch_center",
        ]
        .map(String::from)
        .to_vec(),
        context_table: vec![
            rule(Some("incident_site"), None, None, &[TaskKind::AlertNotification]),
            rule(Some("roadside"), None, None, &[TaskKind::ContinuousMonitoring]),
            rule(Some("dispatch_center"), None, None, &[TaskKind::PushToTalk]),
            rule(None, Some(Mobile), Some(Busy), &[TaskKind::SmartAmbulance]),
        ],
        ..PolicyParams::default()
    };
    Ok(ScenarioFile {
        duration_ticks: p.duration,
        seed: p.seed,
        policy: None,
        pool: PoolSpec {
            ran: 150.0 * n,
            transport: 150.0 * n,
            edge_compute: 20.0 * n,
            core_compute: 20.0 * n,
            storage: 300.0 * n,
        },
        slices: vec![
            template("embb", Embb, TaskKind::ContinuousMonitoring, embb_first),
            template("urllc", Urllc, TaskKind::AlertNotification, 2),
            template("mmtc", Mmtc, TaskKind::PushToTalk, dispatchers.max(2)),
        ],
        ues,
        dictionary: None,
        timeline,
        calibration: CalibrationSpec::default(),
        policy_params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_bounds() {
        let ok = GeneratorParams::default();
        assert!(generate_first_responder(ok).is_ok());
        for bad in [
            GeneratorParams { ues: 0, ..ok },
            GeneratorParams { ues: 101, ..ok },
            GeneratorParams { duration: 99, ..ok },
            GeneratorParams { duration: 10_001, ..ok },
            GeneratorParams { t_accident: 200, ..ok },
        ] {
            assert!(matches!(
                generate_first_responder(bad),
                Err(GeneratorError::InvalidParams(_))
            ));
        }
    }

    #[test]
    fn roles_cycle() {
        let f = generate_first_responder(GeneratorParams {
            ues: 8,
            ..Default::default()
        })
        .unwrap();
        let ids: Vec<_> = f.ues.iter().map(|u| u.id.as_str()).collect();
        assert_eq!(
            ids,
            [
                "camera-1",
                "police-1",
                "police-2",
                "firefighter-1",
                "medic-1",
                "dispatcher-1",
                "camera-2",
                "police-3"
            ]
        );
    }
}
