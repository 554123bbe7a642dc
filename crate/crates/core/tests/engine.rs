mod common;

use std::collections::BTreeMap;

use semslice::engine::{
    emit_metrics, generate_first_responder, load_scenario, parse_action_log, parse_comparison,
    parse_event_log, parse_ledger_log, parse_series, parse_summary, render_comparison, run,
    scenario_from_file, ComparisonRow, Engine, GeneratorParams, MemorySink, Scenario,
    ACTION_LOG_FILE, EVENT_LOG_FILE, LEDGER_LOG_FILE, SERIES_FILE, SUMMARY_FILE,
};
use semslice::policy::PolicyKind;
use semslice::slice::Domain;

fn default_scenario() -> Scenario {
    scenario_from_file(generate_first_responder(GeneratorParams::default()).unwrap()).unwrap()
}

fn emitted(scn: &Scenario, p: PolicyKind) -> MemorySink {
    let mut sink = MemorySink::default();
    emit_metrics(&run(scn, p), &mut sink).unwrap();
    sink
}

const TINY: &str = r#"
duration_ticks = 10

[pool]
ran = 100.0
transport = 100.0
edge_compute = 10.0
core_compute = 10.0
storage = 100.0

[[slices]]
name = "best-effort"
sst = "EMBB"
sd = 1
tasks = []
expected_ues = 2

[[ues]]
id = "a"
allowed_nssai = [{ sst = 1, sd = 1 }]

[[ues]]
id = "b"
allowed_nssai = [{ sst = 1, sd = 1 }]
"#;

#[test]
fn idle_static_run_is_fully_satisfied() {
    let s = run(&load_scenario(TINY).unwrap(), PolicyKind::Static).summary();
    assert_eq!(s.ue_ticks, 20);
    assert_eq!(s.satisfied_ue_ticks, 20);
    assert_eq!(s.switch_requested, 0);
    assert_eq!(s.sla_violation_count, 0);
    assert_eq!(s.actions_by_reason["PROVISION"], 1);
}

#[test]
fn undersized_template_satisfies_nobody() {
    // Two default-class UEs need 2 Mbps; the template is held at 1.5.
    let doc = TINY.replace("expected_ues = 2", "expected_ues = 2\noverrides = { bandwidth = 1.5 }");
    let s = run(&load_scenario(&doc).unwrap(), PolicyKind::Static).summary();
    assert_eq!(s.satisfied_ue_ticks, 0);
    assert_eq!(s.qos_satisfaction_rate, 0.0);
}

#[test]
fn failed_authentication_counts_as_an_admission_denial() {
    let doc = TINY.replace("id = \"b\"", "id = \"b\"\nauth_failure = true");
    let r = run(&load_scenario(&doc).unwrap(), PolicyKind::Semantic);
    let s = r.summary();
    assert_eq!(s.admission_denials, 1);
    assert_eq!(s.satisfied_ue_ticks, 10);
    assert!(r
        .events
        .iter()
        .any(|e| e.ue_id == "b" && e.outcome == "rejected:AuthFailure"));
}

#[test]
fn phases_appear_in_order_every_tick() {
    let r = run(&default_scenario(), PolicyKind::Semantic);
    let order = ["events", "sweep", "ssci", "policy", "apply", "assure", "sample"];
    let mut by_tick: BTreeMap<u64, Vec<&str>> = BTreeMap::new();
    for e in r.events.iter().filter(|e| e.ue_id == "*" && order.contains(&e.stage.as_str())) {
        by_tick.entry(e.tick).or_default().push(&e.stage);
    }
    assert_eq!(by_tick.len(), 200);
    for (tick, stages) in by_tick {
        assert_eq!(stages, order, "tick {tick}");
    }
    assert_eq!(r.samples.len(), 200);
}

#[test]
fn summary_matches_series_recomputation() {
    let scn = default_scenario();
    for p in PolicyKind::ALL {
        let sink = emitted(&scn, p);
        let series = parse_series(&sink.files[SERIES_FILE]).unwrap();
        let s = parse_summary(&sink.files[SUMMARY_FILE]).unwrap();
        assert_eq!(series.len() as u64, s.duration_ticks);
        let sum = |f: fn(&semslice::engine::SeriesRow) -> u64| series.iter().map(f).sum::<u64>();
        let ue_ticks = sum(|r| r.ues);
        let satisfied = sum(|r| r.satisfied);
        assert_eq!(ue_ticks, s.ue_ticks);
        assert_eq!(satisfied, s.satisfied_ue_ticks);
        assert!((satisfied as f64 / ue_ticks as f64 - s.qos_satisfaction_rate).abs() < 1e-12);
        assert_eq!(sum(|r| r.sla_violations), s.sla_violation_count);
        assert_eq!(sum(|r| r.switch_requested), s.switch_requested);
        assert_eq!(sum(|r| r.switch_accepted), s.switch_accepted);
        assert_eq!(sum(|r| r.switch_denied), s.switch_denied);
        assert_eq!(sum(|r| r.actions_applied), s.actions_applied);
        assert_eq!(sum(|r| u64::from(r.incident)), s.incident_ticks);
        assert_eq!(sum(|r| r.demand_tracking), s.actions_by_reason["DEMAND_TRACKING"]);
        assert_eq!(sum(|r| r.incident_preempt), s.actions_by_reason["INCIDENT_PREEMPT"]);
        let cap = scn.file.pool.capacity();
        let ran: f64 = series.iter().map(|r| r.committed_ran).sum();
        let want = ran / (series.len() as f64 * cap[Domain::Ran]);
        assert!((want - s.mean_utilization["ran"]).abs() < 1e-12);
    }
}

#[test]
fn logs_parse_back_to_the_report() {
    let scn = default_scenario();
    let r = run(&scn, PolicyKind::Semantic);
    let mut sink = MemorySink::default();
    emit_metrics(&r, &mut sink).unwrap();
    assert_eq!(parse_event_log(&sink.files[EVENT_LOG_FILE]).unwrap(), r.events);
    assert_eq!(parse_action_log(&sink.files[ACTION_LOG_FILE]).unwrap(), r.actions);
    assert_eq!(parse_ledger_log(&sink.files[LEDGER_LOG_FILE]).unwrap(), r.ledger);
    assert_eq!(parse_summary(&sink.files[SUMMARY_FILE]).unwrap(), r.summary());
}

#[test]
fn emission_is_repeatable() {
    let r = run(&default_scenario(), PolicyKind::Dns);
    let (mut a, mut b) = (MemorySink::default(), MemorySink::default());
    emit_metrics(&r, &mut a).unwrap();
    emit_metrics(&r, &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn comparison_rows_follow_the_summaries() {
    let scn = default_scenario();
    let summaries: Vec<_> = PolicyKind::ALL.iter().map(|p| run(&scn, *p).summary()).collect();
    let rows = parse_comparison(&render_comparison(&summaries)).unwrap();
    let labels: Vec<_> = rows.iter().map(|r| r.policy.as_str()).collect();
    assert_eq!(labels, ["STATIC", "DNS", "CONTEXT_AWARE", "SEMANTIC"]);
    for (row, s) in rows.iter().zip(&summaries) {
        assert_eq!(*row, ComparisonRow::from(s));
    }
}

#[test]
fn action_log_replays_the_pool() {
    let scn = default_scenario();
    for p in PolicyKind::ALL {
        let r = run(&scn, p);
        for s in &r.samples {
            assert_eq!(common::replay_commitments(&r.actions, s.tick), s.committed, "{p} tick {}", s.tick);
        }
        let pool_rows = r.ledger.iter().filter(|l| l.slice_id == "*").count();
        assert_eq!(pool_rows, 200 * Domain::ALL.len());
    }
}

#[test]
fn static_templates_never_move() {
    let r = run(&default_scenario(), PolicyKind::Static);
    assert!(r.ledger.iter().filter(|l| l.slice_id != "*").all(|l| l.tick == 0));
    assert!(r.actions.iter().filter(|a| a.kind == "SCALE").all(|a| a.tick == 0));
}

#[test]
fn dns_steps_are_bounded() {
    let scn = default_scenario();
    let step = scn.file.policy_params.dns_step;
    let r = run(&scn, PolicyKind::Dns);
    let scales: Vec<_> = r.actions.iter().filter(|a| a.kind == "SCALE").collect();
    assert!(!scales.is_empty());
    for a in scales {
        assert_eq!(a.reason, "THRESHOLD_SCALE");
        let from = semslice::slice::DomainVector::decode(&a.from).unwrap();
        let to = semslice::slice::DomainVector::decode(&a.to).unwrap();
        for d in Domain::ALL {
            assert!(to[d] <= from[d] * (1.0 + step) + 1.0 / 512.0, "{a:?}");
        }
    }
}

#[test]
fn jitter_is_seeded() {
    let mut file = generate_first_responder(GeneratorParams::default()).unwrap();
    file.policy_params.event_jitter = 5;
    let scn = scenario_from_file(file.clone()).unwrap();
    assert_eq!(emitted(&scn, PolicyKind::Semantic), emitted(&scn, PolicyKind::Semantic));
    let delivered = |scn: &Scenario| -> Vec<String> {
        run(scn, PolicyKind::Semantic)
            .events
            .into_iter()
            .filter(|e| e.stage == "events")
            .map(|e| e.outcome)
            .collect()
    };
    let other = (1..20)
        .map(|seed| {
            let mut f = file.clone();
            f.seed = seed;
            scenario_from_file(f).unwrap()
        })
        .any(|s| delivered(&s) != delivered(&scn));
    assert!(other, "no seed changed event delivery");
}

#[test]
fn engine_stops_at_the_horizon() {
    let scn = load_scenario(TINY).unwrap();
    let mut e = Engine::new(&scn, PolicyKind::ContextAware);
    let mut n = 0;
    while e.step() {
        n += 1;
    }
    assert_eq!(n, 10);
    assert!(!e.step());
    assert_eq!(e.finish().samples.len(), 10);
}
