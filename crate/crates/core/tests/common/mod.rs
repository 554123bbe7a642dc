#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semslice::engine::{generate_first_responder, scenario_from_file, GeneratorParams, Scenario};
use semslice::semantic::{SemanticEvent, Ttl};
use semslice::slice::DomainVector;

pub const SUBJECTS: [&str; 8] = [
    "bus", "car", "camera", "officer", "driver", "ambulance", "firefighter", "fire",
];
pub const PREDICATES: [&str; 10] = [
    "hits",
    "injured_in",
    "catches",
    "observes",
    "extinguishes",
    "tracks",
    "speaks_on",
    "dispatched_to",
    "detects",
    "monitors",
];
pub const OBJECTS: [&str; 8] = [
    "car", "fire", "road", "accident", "suspect", "ptt_channel", "bus", "driver",
];

pub fn random_triple(rng: &mut ChaCha8Rng) -> String {
    format!(
        "{} {} {}",
        SUBJECTS[rng.random_range(0..SUBJECTS.len())],
        PREDICATES[rng.random_range(0..PREDICATES.len())],
        OBJECTS[rng.random_range(0..OBJECTS.len())]
    )
}

/// A first-responder variant with a random roster, accident time, pool
/// size, policy knobs and extra noise events.
pub fn random_scenario(seed: u64, duration: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut file = generate_first_responder(GeneratorParams {
        ues: rng.random_range(1..=12),
        duration,
        t_accident: rng.random_range(0..duration),
        seed,
    })
    .expect("parameters are in range");

    let squeeze = [0.02, 0.1, 0.5, 1.0][rng.random_range(0..4)];
    for v in [
        &mut file.pool.ran,
        &mut file.pool.transport,
        &mut file.pool.edge_compute,
        &mut file.pool.core_compute,
        &mut file.pool.storage,
    ] {
        *v = (*v * squeeze * rng.random_range(0.5..1.5)).round();
    }
    let p = &mut file.policy_params;
    p.gamma = rng.random_range(1.0..4.0);
    p.hysteresis_ticks = rng.random_range(0..30);
    p.epsilon = rng.random_range(0.0..0.5);
    p.event_jitter = rng.random_range(0..4);
    p.switch_delay = rng.random_range(0..4);
    p.dns_window = rng.random_range(1..8);

    let streams: Vec<String> = file.ues.iter().map(|u| u.id.clone()).collect();
    for _ in 0..rng.random_range(0..40) {
        let stream = &streams[rng.random_range(0..streams.len())];
        let time = rng.random_range(0..duration);
        let ttl = if rng.random_bool(0.1) {
            Ttl::Persistent
        } else {
            Ttl::Ticks(rng.random_range(1..60))
        };
        let t = random_triple(&mut rng);
        file.timeline
            .push(SemanticEvent::new(stream, time, t.parse().unwrap(), ttl));
    }
    file.timeline.sort_by_key(|e| e.time);
    scenario_from_file(file).expect("random scenarios are valid")
}

/// Per-slice commitment replayed from the COMMIT rows of an action log,
/// summed over slices, after every row up to and including `tick`.
pub fn replay_commitments(
    actions: &[semslice::engine::ActionRow],
    tick: u64,
) -> DomainVector {
    let mut latest: BTreeMap<&str, DomainVector> = BTreeMap::new();
    for a in actions.iter().filter(|a| a.kind == "COMMIT" && a.tick <= tick) {
        latest.insert(&a.ue_or_slice, DomainVector::decode(&a.to).expect("encoded vector"));
    }
    latest.values().fold(DomainVector::ZERO, |acc, v| acc + *v)
}
