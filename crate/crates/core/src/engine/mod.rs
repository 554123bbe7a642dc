//! Scenario loading, the tick loop and artifact emission.
//!
//! Each tick runs the fixed phase sequence events, sweep, ssci, policy,
//! apply, assure, sample; every phase leaves a marker row in the event log.

mod emit;
mod generate;
mod scenario;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use emit::{
    emit_metrics, parse_action_log, parse_comparison, parse_event_log, parse_ledger_log,
    parse_series, parse_summary, render_artifacts, render_comparison, ArtifactSink,
    ComparisonRow, DirSink, EmitError, MemorySink, SeriesRow, ACTION_LOG_FILE, ARTIFACT_FILES,
    COMPARISON_FILE, EVENT_LOG_FILE, LEDGER_LOG_FILE, SERIES_FILE, SUMMARY_FILE,
};
pub use generate::{generate_first_responder, GeneratorError, GeneratorParams};
pub use scenario::{
    apply_override, load_scenario, load_scenario_with, scenario_from_file, scenario_schema,
    CalibrationSpec, ContextStep, DictionarySpec, LevelOverride, PoolSpec, Scenario,
    ScenarioError, ScenarioFile, SliceTemplate, UeSpec, ValidationIssue,
};

use crate::baselines::{slice_utilization, Availability, Mobility, UserContext};
use crate::catalog::{DemandField, ResourceDemand};
use crate::orchestrator::{decide_switch, ssci_identify, ue_demand, SwitchDecision, UeSemanticState};
use crate::policy::{
    make_policy, Action, Policy, PolicyKind, ScaleReason, StepInput, SwitchRequest,
    UtilizationHistory,
};
use crate::semantic::{KnowledgeGraph, SemanticEvent, Tick};
use crate::slice::{
    assure_sla, aggregate_reports, ActionCounts, CommitRecord, Domain, DomainVector,
    MetricsSample, SliceId, SliceInstance, SliceSample, SliceTable, SubnetRegistry, UeContext,
    UeId,
};

/// `tick, ue_id, stage, outcome`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRow {
    pub tick: Tick,
    pub ue_id: String,
    pub stage: String,
    pub outcome: String,
}

/// `tick, kind, ue_or_slice, from, to, reason, outcome`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRow {
    pub tick: Tick,
    pub kind: String,
    pub ue_or_slice: String,
    pub from: String,
    pub to: String,
    pub reason: String,
    pub outcome: String,
}

/// `tick, slice_id, domain, committed, capacity`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub tick: Tick,
    pub slice_id: String,
    pub domain: Domain,
    pub committed: f64,
    pub capacity: f64,
}

/// Scalars written to `metrics_summary.json` and `comparison.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub policy: String,
    pub seed: u64,
    pub duration_ticks: Tick,
    pub ue_ticks: u64,
    pub satisfied_ue_ticks: u64,
    pub qos_satisfaction_rate: f64,
    pub sla_violation_count: u64,
    pub mean_utilization: BTreeMap<String, f64>,
    /// Mean of the per-domain utilizations.
    pub mean_allocation_fraction: f64,
    pub switch_requested: u64,
    pub switch_accepted: u64,
    pub switch_denied: u64,
    pub mean_switch_latency: f64,
    pub admission_denials: u64,
    pub actions_applied: u64,
    pub actions_dropped: u64,
    pub actions_by_reason: BTreeMap<String, u64>,
    pub incident_ticks: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub policy: PolicyKind,
    pub seed: u64,
    pub duration_ticks: Tick,
    pub capacity: DomainVector,
    pub samples: Vec<MetricsSample>,
    pub events: Vec<EventRow>,
    pub actions: Vec<ActionRow>,
    pub ledger: Vec<LedgerRow>,
}

impl MetricsReport {
    pub fn summary(&self) -> Summary {
        let f = aggregate_reports(&self.samples);
        let util = f.mean_utilization(&self.capacity);
        let mean_utilization = util
            .iter()
            .map(|(d, v)| (d.as_str().to_string(), v))
            .collect();
        let mean_allocation_fraction =
            util.iter().map(|(_, v)| v).sum::<f64>() / Domain::ALL.len() as f64;
        let a = f.actions;
        let actions_by_reason = [
            (ScaleReason::Provision, a.provision),
            (ScaleReason::IncidentPreempt, a.incident_preempt),
            (ScaleReason::NormalcyReclaim, a.normalcy_reclaim),
            (ScaleReason::DemandTracking, a.demand_tracking),
            (ScaleReason::ThresholdScale, a.threshold_scale),
        ]
        .into_iter()
        .map(|(r, n)| (r.as_str().to_string(), n))
        .collect();
        Summary {
            policy: self.policy.label().to_string(),
            seed: self.seed,
            duration_ticks: self.duration_ticks,
            ue_ticks: f.ue_ticks,
            satisfied_ue_ticks: f.satisfied_ue_ticks,
            qos_satisfaction_rate: f.qos_satisfaction_rate(),
            sla_violation_count: f.sla_violations,
            mean_utilization,
            mean_allocation_fraction,
            switch_requested: f.switch_requested,
            switch_accepted: f.switch_accepted,
            switch_denied: f.switch_denied,
            mean_switch_latency: f.mean_switch_latency(),
            admission_denials: f.admission_denials,
            actions_applied: f.actions_applied,
            actions_dropped: f.actions_dropped,
            actions_by_reason,
            incident_ticks: f.incident_ticks,
        }
    }
}

#[derive(Debug, Clone)]
struct PendingSwitch {
    request: SwitchRequest,
    execute_at: Tick,
}

fn count_reason(c: &mut ActionCounts, r: ScaleReason) {
    match r {
        ScaleReason::Provision => c.provision += 1,
        ScaleReason::IncidentPreempt => c.incident_preempt += 1,
        ScaleReason::NormalcyReclaim => c.normalcy_reclaim += 1,
        ScaleReason::DemandTracking => c.demand_tracking += 1,
        ScaleReason::ThresholdScale => c.threshold_scale += 1,
    }
}

/// Event times shifted by up to `jitter` ticks, re-sorted stably.
fn jittered_timeline(timeline: &[SemanticEvent], jitter: Tick, seed: u64) -> Vec<SemanticEvent> {
    let mut events = timeline.to_vec();
    if jitter > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in &mut events {
            e.time += rng.random_range(0..=jitter);
        }
        // Keep each stream's own order intact.
        let mut last: BTreeMap<String, Tick> = BTreeMap::new();
        for e in &mut events {
            let floor = last.get(&e.stream_id).copied().unwrap_or(0);
            e.time = e.time.max(floor);
            last.insert(e.stream_id.clone(), e.time);
        }
        events.sort_by_key(|e| e.time);
    }
    events
}

/// A running simulation of one scenario under one policy.
pub struct Engine {
    scn: Scenario,
    policy: Box<dyn Policy>,
    table: SliceTable,
    ues: BTreeMap<UeId, UeContext>,
    semantic: BTreeMap<UeId, UeSemanticState>,
    stream_kgs: BTreeMap<String, KnowledgeGraph>,
    global_kg: KnowledgeGraph,
    events: Vec<SemanticEvent>,
    cursor: usize,
    pending: BTreeMap<UeId, PendingSwitch>,
    utilization: UtilizationHistory,
    rho: BTreeMap<UeId, f64>,
    templates: BTreeMap<SliceId, ResourceDemand>,
    now: Tick,
    admission_denials_at_setup: u64,
    logged_commitments: BTreeMap<SliceId, DomainVector>,
    report: MetricsReport,
}

impl Engine {
    pub fn new(scn: &Scenario, kind: PolicyKind) -> Self {
        let file = &scn.file;
        let capacity = file.pool.capacity();
        let mut table = SliceTable::new(capacity, SubnetRegistry::default());
        let mut report = MetricsReport {
            policy: kind,
            seed: file.seed,
            duration_ticks: file.duration_ticks,
            capacity,
            samples: Vec::new(),
            events: Vec::new(),
            actions: Vec::new(),
            ledger: Vec::new(),
        };
        let mut templates = BTreeMap::new();
        for t in &file.slices {
            let alloc = scn.template_allocation(t);
            let inst = SliceInstance::new(
                &t.name,
                scn.template_snssai(t),
                scn.template_class(t),
                alloc,
                scn.template_sla(t),
                scn.template_edge_share(t),
            );
            let outcome = match table.add_slice(inst) {
                Ok(()) => "ok".to_string(),
                Err(e) => format!("rejected:{}", e.code()),
            };
            report.events.push(EventRow {
                tick: 0,
                ue_id: "*".into(),
                stage: format!("instantiate:{}", t.name),
                outcome,
            });
            if table.slice(&t.name).is_some() {
                templates.insert(t.name.clone(), alloc);
            }
        }

        let mut ues = BTreeMap::new();
        let mut semantic = BTreeMap::new();
        let mut rho = BTreeMap::new();
        let mut denials = 0;
        let mut sorted: Vec<&UeSpec> = file.ues.iter().collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        for spec in sorted {
            let ctx = UeContext::new(&spec.id, spec.stream_id(), spec.allowed_nssai.clone());
            let requested = spec
                .allowed_nssai
                .iter()
                .copied()
                .find(|s| table.slice_by_snssai(s).is_some())
                .or_else(|| spec.allowed_nssai.first().copied());
            let mut state = UeSemanticState::new(&spec.id, spec.rho);
            let ctx = match requested {
                Some(requested) => {
                    let out = table.attach(&ctx, requested, &ResourceDemand::default(), !spec.auth_failure);
                    for st in &out.stages {
                        report.events.push(EventRow {
                            tick: 0,
                            ue_id: spec.id.clone(),
                            stage: st.stage.as_str().to_string(),
                            outcome: st.outcome_label(),
                        });
                    }
                    if out.result.is_err() {
                        denials += 1;
                    }
                    out.ue
                }
                None => {
                    denials += 1;
                    ctx
                }
            };
            if let Some(slice) = ctx.current_slice.as_ref().and_then(|id| table.slice(id)) {
                state.served_class = slice.service_class;
                state.served_slice = Some(slice.id.clone());
            }
            rho.insert(spec.id.clone(), spec.rho);
            semantic.insert(spec.id.clone(), state);
            ues.insert(spec.id.clone(), ctx);
        }

        let mut engine = Self {
            events: jittered_timeline(&file.timeline, file.policy_params.event_jitter, file.seed),
            policy: make_policy(kind),
            utilization: UtilizationHistory::new(file.policy_params.dns_window),
            scn: scn.clone(),
            table,
            ues,
            semantic,
            stream_kgs: BTreeMap::new(),
            global_kg: KnowledgeGraph::new(),
            cursor: 0,
            pending: BTreeMap::new(),
            rho,
            templates,
            now: 0,
            admission_denials_at_setup: denials,
            logged_commitments: BTreeMap::new(),
            report,
        };
        let setup = engine.table.drain_journal();
        engine.log_commits(&setup, "SETUP");
        engine
    }

    pub fn now(&self) -> Tick {
        self.now
    }

    pub fn table(&self) -> &SliceTable {
        &self.table
    }

    pub fn ues(&self) -> &BTreeMap<UeId, UeContext> {
        &self.ues
    }

    pub fn semantic_states(&self) -> &BTreeMap<UeId, UeSemanticState> {
        &self.semantic
    }

    pub fn report(&self) -> &MetricsReport {
        &self.report
    }

    pub fn is_finished(&self) -> bool {
        self.now >= self.scn.file.duration_ticks
    }

    fn phase(&mut self, stage: &str, outcome: String) {
        self.report.events.push(EventRow {
            tick: self.now,
            ue_id: "*".into(),
            stage: stage.into(),
            outcome,
        });
    }

    fn log_commits(&mut self, records: &[CommitRecord], reason: &str) {
        for r in records {
            self.report.actions.push(ActionRow {
                tick: self.now,
                kind: "COMMIT".into(),
                ue_or_slice: r.slice_id.clone(),
                from: r.before.encode(),
                to: r.after.encode(),
                reason: reason.into(),
                outcome: "ok".into(),
            });
        }
    }

    /// Each UE's user context as of the current tick.
    pub fn contexts(&self) -> Vec<UserContext> {
        let default_zone = self
            .scn
            .file
            .policy_params
            .zones
            .first()
            .cloned()
            .unwrap_or_default();
        self.scn
            .file
            .ues
            .iter()
            .map(|spec| {
                let step = spec.context.iter().rev().find(|s| s.from <= self.now);
                match step {
                    Some(s) => UserContext {
                        ue_id: spec.id.clone(),
                        location_zone: s.zone.clone(),
                        mobility: s.mobility,
                        availability: s.availability,
                    },
                    None => UserContext {
                        ue_id: spec.id.clone(),
                        location_zone: default_zone.clone(),
                        mobility: Mobility::Stationary,
                        availability: Availability::Available,
                    },
                }
            })
            .collect()
    }

    /// Ground-truth per-UE demand under the identified class.
    fn requirement(&self, ue: &str) -> ResourceDemand {
        let state = &self.semantic[ue];
        ue_demand(&state.identified_class, state.rho, &self.scn.calibration)
    }

    fn slice_load(&self, slice: &SliceInstance) -> ResourceDemand {
        slice
            .attached_ues
            .iter()
            .fold(ResourceDemand::default(), |acc, ue| acc.add_volume(&self.requirement(ue)))
    }

    /// Advances one tick. Returns `false` once the run is complete.
    pub fn step(&mut self) -> bool {
        if self.is_finished() {
            return false;
        }
        let now = self.now;
        let mut sample = MetricsSample {
            tick: now,
            ues: self.ues.len() as u64,
            ..Default::default()
        };
        if now == 0 {
            sample.admission_denials = self.admission_denials_at_setup;
        }

        // events
        let mut delivered = 0;
        while let Some(ev) = self.events.get(self.cursor) {
            if ev.time > now {
                break;
            }
            let ev = ev.clone();
            self.cursor += 1;
            let dict = &self.scn.dictionary;
            let kg = self.stream_kgs.entry(ev.stream_id.clone()).or_default();
            match kg.ingest(&ev, dict, ev.time) {
                Ok(()) => {
                    delivered += 1;
                    self.global_kg
                        .ingest(&ev, dict, ev.time)
                        .expect("stream graph accepted the event");
                }
                Err(e) => self.report.events.push(EventRow {
                    tick: now,
                    ue_id: ev.stream_id.clone(),
                    stage: "ingest".into(),
                    outcome: format!("rejected:{e}"),
                }),
            }
        }
        self.phase("events", format!("delivered={delivered}"));

        // sweep
        let mut expired = 0;
        for kg in self.stream_kgs.values_mut() {
            expired += kg.sweep(now);
        }
        self.global_kg.sweep(now);
        self.phase("sweep", format!("expired={expired}"));

        // ssci
        let empty = KnowledgeGraph::new();
        let mut changed = 0;
        let ids: Vec<UeId> = self.semantic.keys().cloned().collect();
        for id in &ids {
            let ctx = &self.ues[id];
            let kg = self.stream_kgs.get(&ctx.stream_id).unwrap_or(&empty);
            let mut next = ssci_identify(&self.semantic[id], kg, &self.scn.dictionary, now);
            match ctx.current_slice.as_ref().and_then(|s| self.table.slice(s)) {
                Some(slice) => {
                    next.served_class = slice.service_class;
                    next.served_slice = Some(slice.id.clone());
                }
                None => next.served_slice = None,
            }
            next.pending_since = self.pending.get(id).map(|p| p.request.issued_at);
            if next.identified_class != self.semantic[id].identified_class {
                changed += 1;
                self.report.events.push(EventRow {
                    tick: now,
                    ue_id: id.clone(),
                    stage: "ssci".into(),
                    outcome: next.identified_class.id.to_string(),
                });
            }
            self.semantic.insert(id.clone(), next);
        }
        self.phase("ssci", format!("changed={changed}"));

        // policy
        let contexts = self.contexts();
        let pending: BTreeSet<UeId> = self.pending.keys().cloned().collect();
        let input = StepInput {
            now,
            table: &self.table,
            ues: &self.ues,
            semantic: &self.semantic,
            global_kg: &self.global_kg,
            dictionary: &self.scn.dictionary,
            contexts: &contexts,
            utilization: &self.utilization,
            pending: &pending,
            rho: &self.rho,
            templates: &self.templates,
            calibration: &self.scn.calibration,
            params: &self.scn.file.policy_params,
        };
        let actions = match self.policy.step(&input) {
            Ok(a) => a,
            Err(e) => {
                self.phase("policy", format!("error:{e}"));
                Vec::new()
            }
        };
        self.phase("policy", format!("actions={}", actions.len()));

        // apply: queue switches, run scale actions, then execute due switches
        let (mut applied, mut dropped) = (0, 0);
        let delay = self.scn.file.policy_params.switch_delay;
        let mut scales = Vec::new();
        for action in actions {
            match action {
                Action::Switch(req) => {
                    let outcome = if self.pending.contains_key(&req.ue_id) {
                        "debounced"
                    } else {
                        sample.switch_requested += 1;
                        "queued"
                    };
                    self.report.actions.push(ActionRow {
                        tick: now,
                        kind: "SWITCH_REQUEST".into(),
                        ue_or_slice: req.ue_id.clone(),
                        from: req.from_slice.clone(),
                        to: req.to_class.id.to_string(),
                        reason: "CLASS_CHANGE".into(),
                        outcome: outcome.into(),
                    });
                    if outcome == "queued" {
                        self.pending.insert(
                            req.ue_id.clone(),
                            PendingSwitch {
                                execute_at: now + delay,
                                request: req,
                            },
                        );
                    }
                }
                Action::Scale(a) => scales.push(a),
            }
        }
        for a in scales {
            count_reason(&mut sample.actions, a.reason);
            let (from, to) = match self.table.slice(&a.slice_id) {
                Some(s) => (s.commitment().encode(), s.commitment_for(&a.target).encode()),
                None => (String::new(), String::new()),
            };
            let outcome = match self.table.scale_slice(&a.slice_id, &a.target, false) {
                Ok(_) => {
                    applied += 1;
                    "applied".to_string()
                }
                Err(e) => {
                    dropped += 1;
                    format!("dropped:{}", e.code())
                }
            };
            self.report.actions.push(ActionRow {
                tick: now,
                kind: "SCALE".into(),
                ue_or_slice: a.slice_id.clone(),
                from,
                to,
                reason: a.reason.as_str().into(),
                outcome,
            });
            let journal = self.table.drain_journal();
            self.log_commits(&journal, a.reason.as_str());
        }
        let due: Vec<UeId> = self
            .pending
            .iter()
            .filter(|(_, p)| p.execute_at <= now)
            .map(|(id, _)| id.clone())
            .collect();
        for id in due {
            let p = self.pending.remove(&id).expect("listed above");
            self.execute_switch(p.request, &mut sample);
        }
        self.phase("apply", format!("applied={applied};dropped={dropped}"));
        sample.actions_applied = applied;
        sample.actions_dropped = dropped;

        // assure
        let violations = assure_sla(&self.table, now);
        sample.sla_violations = violations.len() as u64;
        self.phase("assure", format!("violations={}", violations.len()));

        // sample
        self.sample(&mut sample, &violations);
        self.phase("sample", format!("satisfied={}", sample.satisfied));
        self.report.samples.push(sample);
        self.now += 1;
        true
    }

    fn execute_switch(&mut self, mut req: SwitchRequest, sample: &mut MetricsSample) {
        let now = self.now;
        let Some(ue) = self.ues.get(&req.ue_id).cloned() else {
            return;
        };
        let mut row = ActionRow {
            tick: now,
            kind: "SWITCH".into(),
            ue_or_slice: req.ue_id.clone(),
            from: ue.current_slice.clone().unwrap_or_default(),
            to: String::new(),
            reason: req.to_class.id.to_string(),
            outcome: String::new(),
        };
        let decision = match ue.current_slice.clone() {
            Some(from) => {
                req.from_slice = from;
                decide_switch(&req, &self.table, &ue, &self.scn.calibration, self.rho[&req.ue_id])
            }
            None => SwitchDecision::Deny(crate::slice::SliceError::NotAttached(req.ue_id.clone())),
        };
        match decision {
            SwitchDecision::Accept(plan) => {
                row.to = plan.to_slice.clone();
                match self
                    .table
                    .switch_ue(&ue, plan.target, &plan.release_share, &plan.marginal)
                {
                    Ok(moved) => {
                        sample.switch_accepted += 1;
                        sample.switch_latency_ticks += now - req.issued_at;
                        row.outcome = "accepted".into();
                        if let Some(state) = self.semantic.get_mut(&req.ue_id) {
                            state.served_slice = moved.current_slice.clone();
                            if let Some(s) = self.table.slice(&plan.to_slice) {
                                state.served_class = s.service_class;
                            }
                            state.pending_since = None;
                        }
                        self.ues.insert(req.ue_id.clone(), moved);
                    }
                    Err(e) => {
                        sample.switch_denied += 1;
                        row.outcome = format!("denied:{}", e.code());
                    }
                }
            }
            SwitchDecision::Deny(e) => {
                sample.switch_denied += 1;
                row.outcome = format!("denied:{}", e.code());
            }
        }
        self.report.events.push(EventRow {
            tick: now,
            ue_id: req.ue_id.clone(),
            stage: "switch".into(),
            outcome: if row.to.is_empty() {
                row.outcome.clone()
            } else {
                format!("{}:{}", row.outcome, row.to)
            },
        });
        self.report.actions.push(row);
        let journal = self.table.drain_journal();
        self.log_commits(&journal, "SWITCH");
    }

    fn ue_satisfied(&self, ue: &UeContext, slice: &SliceInstance, load: &ResourceDemand) -> bool {
        let need = self.requirement(&ue.ue_id);
        let levels_ok = DemandField::ALL
            .into_iter()
            .filter(|f| !DemandField::VOLUME.contains(f))
            .all(|f| !slice.allocation.shortfalls(&need).contains(&f));
        let volume_ok = DemandField::VOLUME
            .into_iter()
            .all(|f| slice.allocation.get(f) >= load.get(f));
        levels_ok && volume_ok
    }

    fn sample(&mut self, sample: &mut MetricsSample, violations: &[crate::slice::SlaViolation]) {
        let now = self.now;
        let loads: BTreeMap<SliceId, ResourceDemand> = self
            .table
            .slices()
            .map(|s| (s.id.clone(), self.slice_load(s)))
            .collect();
        for ue in self.ues.values() {
            let Some(slice) = ue.current_slice.as_ref().and_then(|s| self.table.slice(s)) else {
                continue;
            };
            sample.registered += 1;
            if self.ue_satisfied(ue, slice, &loads[&slice.id]) {
                sample.satisfied += 1;
            }
        }
        for slice in self.table.slices() {
            let u = slice_utilization(slice, &loads[&slice.id]);
            self.utilization.record(&slice.id, u);
            sample.slices.push(SliceSample {
                slice_id: slice.id.clone(),
                committed: slice.commitment(),
                attached: slice.attached_count(),
                violations: violations.iter().filter(|v| v.slice_id == slice.id).count() as u64,
            });
        }
        sample.committed = *self.table.pool().committed();
        sample.incident = crate::semantic::incident_active(&self.global_kg, &self.scn.dictionary, now);

        let capacity = *self.table.pool().capacity();
        for slice in self.table.slices() {
            let c = slice.commitment();
            if self.logged_commitments.get(&slice.id) == Some(&c) {
                continue;
            }
            for (d, v) in c.iter() {
                self.report.ledger.push(LedgerRow {
                    tick: now,
                    slice_id: slice.id.clone(),
                    domain: d,
                    committed: v,
                    capacity: capacity[d],
                });
            }
            self.logged_commitments.insert(slice.id.clone(), c);
        }
        for (d, v) in self.table.pool().committed().iter() {
            self.report.ledger.push(LedgerRow {
                tick: now,
                slice_id: "*".into(),
                domain: d,
                committed: v,
                capacity: capacity[d],
            });
        }
    }

    /// Runs to the end and returns the report.
    pub fn finish(mut self) -> MetricsReport {
        while self.step() {}
        self.report
    }
}

/// Simulates `scn` under `policy` from start to finish.
pub fn run(scn: &Scenario, policy: PolicyKind) -> MetricsReport {
    Engine::new(scn, policy).finish()
}
