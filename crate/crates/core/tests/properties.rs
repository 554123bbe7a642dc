mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use semslice::catalog::{aggregate_class, quantify, DemandField, QosCalibration, QosLevel, QosVector};
use semslice::engine::{generate_first_responder, run, scenario_from_file, Engine, GeneratorParams, Scenario};
use semslice::orchestrator::UeSemanticState;
use semslice::policy::{fit_to_headroom, make_policy, pool_headroom, Action, PolicyKind, StepInput, UtilizationHistory};
use semslice::semantic::{extract_tasks, Dictionary, KnowledgeGraph, SemanticEvent, TaskKind, Triple, Ttl};
use semslice::slice::{aggregate_reports, ActionCounts, DomainVector, MetricsSample, SliceSample, QUANTUM};

fn triple_strategy() -> impl Strategy<Value = Triple> {
    (
        0..common::SUBJECTS.len(),
        0..common::PREDICATES.len(),
        0..common::OBJECTS.len(),
    )
        .prop_map(|(s, p, o)| Triple::new(common::SUBJECTS[s], common::PREDICATES[p], common::OBJECTS[o]))
}

fn graph_of(triples: &[Triple], dict: &Dictionary) -> KnowledgeGraph {
    let mut kg = KnowledgeGraph::new();
    for t in triples {
        let ev = SemanticEvent::new("s", 0, t.clone(), Ttl::Persistent);
        kg.ingest(&ev, dict, 0).unwrap();
    }
    kg
}

fn level() -> impl Strategy<Value = QosLevel> {
    prop::sample::select(QosLevel::ALL.to_vec())
}

fn qos_vector() -> impl Strategy<Value = QosVector> {
    prop::array::uniform7(level()).prop_map(QosVector::from_array)
}

fn task_set() -> impl Strategy<Value = Vec<TaskKind>> {
    prop::collection::vec(prop::sample::select(TaskKind::ALL.to_vec()), 0..9)
}

fn grid() -> impl Strategy<Value = f64> {
    (0u32..2_000_000).prop_map(|n| f64::from(n) / QUANTUM)
}

fn sample_strategy() -> impl Strategy<Value = MetricsSample> {
    (
        (0u64..50, 0u64..50, 0u64..5, 0u64..5, 0u64..3),
        prop::array::uniform5(grid()),
        prop::collection::vec((0usize..4, prop::array::uniform5(grid()), 0u64..10, 0u64..2), 0..4),
        any::<bool>(),
    )
        .prop_map(|((ues, sat, req, acc, viol), committed, slices, incident)| MetricsSample {
            ues,
            registered: ues,
            satisfied: sat.min(ues),
            sla_violations: viol,
            committed: DomainVector(committed),
            switch_requested: req,
            switch_accepted: acc,
            switch_latency_ticks: acc * 2,
            actions_applied: req + viol,
            actions: ActionCounts {
                demand_tracking: req,
                ..Default::default()
            },
            incident,
            slices: slices
                .into_iter()
                .map(|(i, c, attached, violations)| SliceSample {
                    slice_id: format!("s{i}"),
                    committed: DomainVector(c),
                    attached,
                    violations,
                })
                .collect(),
            ..Default::default()
        })
}

fn default_scenario() -> Scenario {
    scenario_from_file(generate_first_responder(GeneratorParams::default()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn extraction_is_monotone_under_inclusion(
        base in prop::collection::vec(triple_strategy(), 0..12),
        extra in prop::collection::vec(triple_strategy(), 0..12),
    ) {
        let dict = Dictionary::first_responder();
        let small = extract_tasks(&graph_of(&base, &dict), &dict, 0);
        let all: Vec<Triple> = base.iter().chain(&extra).cloned().collect();
        let big = extract_tasks(&graph_of(&all, &dict), &dict, 0);
        prop_assert!(small.is_subset(&big), "{small:?} not within {big:?}");
    }

    #[test]
    fn class_aggregation_is_order_free_idempotent_and_monotone(a in task_set(), b in task_set()) {
        let mut reversed = a.clone();
        reversed.reverse();
        prop_assert_eq!(aggregate_class(&a).qos, aggregate_class(&reversed).qos);

        let doubled: Vec<TaskKind> = a.iter().chain(&a).copied().collect();
        prop_assert_eq!(aggregate_class(&doubled).qos, aggregate_class(&a).qos);

        let union: Vec<TaskKind> = a.iter().chain(&b).copied().collect();
        let whole = aggregate_class(&union).qos;
        prop_assert!(aggregate_class(&a).qos.dominated_by(&whole));
        prop_assert!(aggregate_class(&b).qos.dominated_by(&whole));
        prop_assert_eq!(whole, aggregate_class(&a).qos.join(aggregate_class(&b).qos));
    }

    #[test]
    fn quantified_volumes_scale_with_ue_count(q in qos_vector(), n in 1u32..500) {
        let cal = QosCalibration::default();
        let one = quantify(&q, &cal, 1).unwrap();
        let many = quantify(&q, &cal, n).unwrap();
        for f in DemandField::ALL {
            if DemandField::VOLUME.contains(&f) {
                let want = one.get(f) * f64::from(n);
                prop_assert!((many.get(f) - want).abs() <= 1e-9 * want.max(1.0), "{f:?}");
            } else {
                prop_assert_eq!(many.get(f), one.get(f), "{:?}", f);
            }
        }
    }

    #[test]
    fn domain_vectors_survive_encoding(v in prop::array::uniform5(grid())) {
        let v = DomainVector(v);
        prop_assert_eq!(DomainVector::decode(&v.encode()), Some(v));
    }

    #[test]
    fn report_aggregation_splits_anywhere(
        samples in prop::collection::vec(sample_strategy(), 0..30),
        cut in 0usize..31,
    ) {
        let samples: Vec<MetricsSample> = samples
            .into_iter()
            .enumerate()
            .map(|(i, mut s)| { s.tick = i as u64; s })
            .collect();
        let cut = cut.min(samples.len());
        let (head, tail) = samples.split_at(cut);
        let merged = aggregate_reports(head).merge(&aggregate_reports(tail));
        prop_assert_eq!(merged, aggregate_reports(&samples));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn headroom_fitting_never_overdraws(
        pick in 0usize..3,
        factors in prop::array::uniform7(0.0f64..6.0),
        room in prop::array::uniform5(0.0f64..500.0),
    ) {
        let scn = default_scenario();
        let engine = Engine::new(&scn, PolicyKind::Semantic);
        let slices: Vec<_> = engine.table().slices().collect();
        let slice = slices[pick % slices.len()];
        let mut target = slice.allocation;
        for (f, k) in DemandField::VOLUME.into_iter().zip(factors) {
            target.set(f, target.get(f) * k);
        }
        let start = DomainVector(room);
        let mut headroom = start;
        let out = fit_to_headroom(slice, &target, &mut headroom);
        let net = slice.commitment_for(&out) - slice.commitment();
        for (d, h) in headroom.iter() {
            prop_assert!(h >= -1e-9, "{d}: {h}");
            prop_assert!(net[d] <= start[d] + 1e-9, "{d}: {} > {}", net[d], start[d]);
        }
        for f in DemandField::VOLUME {
            let (cur, t, o) = (slice.allocation.get(f), target.get(f), out.get(f));
            if t <= cur {
                prop_assert!(o <= cur);
            }
        }
        let pool = pool_headroom(engine.table());
        prop_assert!(pool.iter().all(|(_, v)| v >= 0.0));
    }
}

fn actions_with(
    engine: &Engine,
    scn: &Scenario,
    kind: PolicyKind,
    kg: &KnowledgeGraph,
    semantic: &BTreeMap<String, UeSemanticState>,
) -> Vec<Action> {
    let templates = scn
        .file
        .slices
        .iter()
        .map(|t| (t.name.clone(), scn.template_allocation(t)))
        .collect();
    let rho = scn.file.ues.iter().map(|u| (u.id.clone(), u.rho)).collect();
    let mut utilization = UtilizationHistory::new(scn.file.policy_params.dns_window);
    for s in engine.table().slices() {
        for _ in 0..scn.file.policy_params.dns_window {
            utilization.record(&s.id, 0.95);
        }
    }
    let contexts = engine.contexts();
    let input = StepInput {
        now: engine.now(),
        table: engine.table(),
        ues: engine.ues(),
        semantic,
        global_kg: kg,
        dictionary: &scn.dictionary,
        contexts: &contexts,
        utilization: &utilization,
        pending: &BTreeSet::new(),
        rho: &rho,
        templates: &templates,
        calibration: &scn.calibration,
        params: &scn.file.policy_params,
    };
    make_policy(kind).step(&input).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn baselines_ignore_semantic_inputs(
        ticks in 0u64..120,
        triples in prop::collection::vec(triple_strategy(), 0..15),
        tasks in task_set(),
    ) {
        let scn = default_scenario();
        let mut engine = Engine::new(&scn, PolicyKind::Semantic);
        for _ in 0..ticks {
            engine.step();
        }
        let kg = graph_of(&triples, &scn.dictionary);
        let class = aggregate_class(&tasks);
        let mut forged = engine.semantic_states().clone();
        for st in forged.values_mut() {
            st.last_tasks = tasks.iter().copied().collect();
            st.identified_class = class;
        }
        let empty_kg = KnowledgeGraph::new();
        for kind in [PolicyKind::Static, PolicyKind::Dns, PolicyKind::ContextAware] {
            let real = actions_with(&engine, &scn, kind, &empty_kg, engine.semantic_states());
            let fake = actions_with(&engine, &scn, kind, &kg, &forged);
            prop_assert_eq!(real, fake, "{}", kind);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn static_never_rescales_and_dns_steps_stay_bounded(seed in any::<u64>()) {
        let scn = common::random_scenario(seed, 120);
        let st = run(&scn, PolicyKind::Static);
        prop_assert!(st.actions.iter().filter(|a| a.kind == "SCALE").all(|a| a.tick == 0));

        let step = scn.file.policy_params.dns_step;
        let dns = run(&scn, PolicyKind::Dns);
        for a in dns.actions.iter().filter(|a| a.kind == "SCALE" && a.tick > 0) {
            let from = DomainVector::decode(&a.from).unwrap();
            let to = DomainVector::decode(&a.to).unwrap();
            for (d, v) in to.iter() {
                prop_assert!(v <= from[d] * (1.0 + step) + 2.0 / QUANTUM, "{:?}", a);
            }
        }
    }
}
