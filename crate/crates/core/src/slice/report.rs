use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DomainVector, SliceId};
use crate::semantic::Tick;

/// Action tallies by reason for one tick or a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ActionCounts {
    pub provision: u64,
    pub incident_preempt: u64,
    pub normalcy_reclaim: u64,
    pub demand_tracking: u64,
    pub threshold_scale: u64,
}

impl ActionCounts {
    fn merge(&mut self, o: &ActionCounts) {
        self.provision += o.provision;
        self.incident_preempt += o.incident_preempt;
        self.normalcy_reclaim += o.normalcy_reclaim;
        self.demand_tracking += o.demand_tracking;
        self.threshold_scale += o.threshold_scale;
    }

    pub fn total(&self) -> u64 {
        self.provision
            + self.incident_preempt
            + self.normalcy_reclaim
            + self.demand_tracking
            + self.threshold_scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSample {
    pub slice_id: SliceId,
    pub committed: DomainVector,
    pub attached: u64,
    pub violations: u64,
}

/// Everything measured at the end of one tick.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsSample {
    pub tick: Tick,
    pub ues: u64,
    pub registered: u64,
    pub satisfied: u64,
    pub sla_violations: u64,
    pub committed: DomainVector,
    pub switch_requested: u64,
    pub switch_accepted: u64,
    pub switch_denied: u64,
    /// Sum over switches accepted this tick of ticks spent pending.
    pub switch_latency_ticks: u64,
    pub admission_denials: u64,
    pub actions_applied: u64,
    pub actions_dropped: u64,
    pub actions: ActionCounts,
    pub incident: bool,
    pub slices: Vec<SliceSample>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SliceAggregate {
    pub ticks: u64,
    pub committed_sum: DomainVector,
    pub attached_sum: u64,
    pub violations: u64,
}

/// Consolidated counters over a run of samples.
///
/// Every field is an integer count or a sum of ledger-grid quantities, so
/// merging is exactly associative.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportFragment {
    pub ticks: u64,
    pub first_tick: Option<Tick>,
    pub last_tick: Option<Tick>,
    pub ue_ticks: u64,
    pub registered_ue_ticks: u64,
    pub satisfied_ue_ticks: u64,
    pub sla_violations: u64,
    pub committed_sum: DomainVector,
    pub switch_requested: u64,
    pub switch_accepted: u64,
    pub switch_denied: u64,
    pub switch_latency_ticks: u64,
    pub admission_denials: u64,
    pub actions_applied: u64,
    pub actions_dropped: u64,
    pub actions: ActionCounts,
    pub incident_ticks: u64,
    pub per_slice: BTreeMap<SliceId, SliceAggregate>,
}

impl ReportFragment {
    pub fn from_sample(s: &MetricsSample) -> Self {
        let per_slice = s
            .slices
            .iter()
            .map(|sl| {
                (
                    sl.slice_id.clone(),
                    SliceAggregate {
                        ticks: 1,
                        committed_sum: sl.committed,
                        attached_sum: sl.attached,
                        violations: sl.violations,
                    },
                )
            })
            .collect();
        Self {
            ticks: 1,
            first_tick: Some(s.tick),
            last_tick: Some(s.tick),
            ue_ticks: s.ues,
            registered_ue_ticks: s.registered,
            satisfied_ue_ticks: s.satisfied,
            sla_violations: s.sla_violations,
            committed_sum: s.committed,
            switch_requested: s.switch_requested,
            switch_accepted: s.switch_accepted,
            switch_denied: s.switch_denied,
            switch_latency_ticks: s.switch_latency_ticks,
            admission_denials: s.admission_denials,
            actions_applied: s.actions_applied,
            actions_dropped: s.actions_dropped,
            actions: s.actions,
            incident_ticks: u64::from(s.incident),
            per_slice,
        }
    }

    pub fn merge(mut self, other: &ReportFragment) -> ReportFragment {
        self.ticks += other.ticks;
        self.first_tick = match (self.first_tick, other.first_tick) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.last_tick = self.last_tick.max(other.last_tick);
        self.ue_ticks += other.ue_ticks;
        self.registered_ue_ticks += other.registered_ue_ticks;
        self.satisfied_ue_ticks += other.satisfied_ue_ticks;
        self.sla_violations += other.sla_violations;
        self.committed_sum = self.committed_sum + other.committed_sum;
        self.switch_requested += other.switch_requested;
        self.switch_accepted += other.switch_accepted;
        self.switch_denied += other.switch_denied;
        self.switch_latency_ticks += other.switch_latency_ticks;
        self.admission_denials += other.admission_denials;
        self.actions_applied += other.actions_applied;
        self.actions_dropped += other.actions_dropped;
        self.actions.merge(&other.actions);
        self.incident_ticks += other.incident_ticks;
        for (id, agg) in &other.per_slice {
            let slot = self.per_slice.entry(id.clone()).or_default();
            slot.ticks += agg.ticks;
            slot.committed_sum = slot.committed_sum + agg.committed_sum;
            slot.attached_sum += agg.attached_sum;
            slot.violations += agg.violations;
        }
        self
    }

    /// Fraction of UE-ticks that were satisfied; 0 when there were none.
    pub fn qos_satisfaction_rate(&self) -> f64 {
        if self.ue_ticks == 0 {
            0.0
        } else {
            self.satisfied_ue_ticks as f64 / self.ue_ticks as f64
        }
    }

    /// Mean committed fraction of each domain's capacity.
    pub fn mean_utilization(&self, capacity: &DomainVector) -> DomainVector {
        let mut out = DomainVector::ZERO;
        if self.ticks == 0 {
            return out;
        }
        for (d, cap) in capacity.iter() {
            out[d] = if cap == 0.0 {
                0.0
            } else {
                self.committed_sum[d] / (self.ticks as f64 * cap)
            };
        }
        out
    }

    pub fn mean_switch_latency(&self) -> f64 {
        if self.switch_accepted == 0 {
            0.0
        } else {
            self.switch_latency_ticks as f64 / self.switch_accepted as f64
        }
    }
}

/// Consolidates time-ordered samples into one fragment.
pub fn aggregate_reports(samples: &[MetricsSample]) -> ReportFragment {
    samples
        .iter()
        .fold(ReportFragment::default(), |acc, s| {
            acc.merge(&ReportFragment::from_sample(s))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice::QUANTUM;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sample(rng: &mut ChaCha8Rng, tick: Tick) -> MetricsSample {
        let mut grid = || f64::from(rng.random_range(0u32..200_000)) / QUANTUM;
        let committed = DomainVector([grid(), grid(), grid(), grid(), grid()]);
        let slice_committed = DomainVector([grid(), grid(), grid(), grid(), grid()]);
        MetricsSample {
            tick,
            ues: rng.random_range(0..20),
            registered: rng.random_range(0..20),
            satisfied: rng.random_range(0..20),
            sla_violations: rng.random_range(0..3),
            committed,
            switch_requested: rng.random_range(0..4),
            switch_accepted: rng.random_range(0..4),
            switch_denied: rng.random_range(0..4),
            switch_latency_ticks: rng.random_range(0..4),
            admission_denials: rng.random_range(0..2),
            actions_applied: rng.random_range(0..5),
            actions_dropped: rng.random_range(0..2),
            actions: ActionCounts {
                demand_tracking: rng.random_range(0..3),
                ..Default::default()
            },
            incident: rng.random_bool(0.3),
            slices: (0..rng.random_range(0..4))
                .map(|i| SliceSample {
                    slice_id: format!("s{i}"),
                    committed: slice_committed,
                    attached: rng.random_range(0..5),
                    violations: rng.random_range(0..2),
                })
                .collect(),
        }
    }

    #[test]
    fn empty_is_zero() {
        let f = aggregate_reports(&[]);
        assert_eq!(f, ReportFragment::default());
        assert_eq!(f.qos_satisfaction_rate(), 0.0);
    }

    #[test]
    fn single_sample_is_echoed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_sample(&mut rng, 4);
        let f = aggregate_reports(std::slice::from_ref(&s));
        assert_eq!(f.ticks, 1);
        assert_eq!(f.first_tick, Some(4));
        assert_eq!(f.committed_sum, s.committed);
        assert_eq!(f.satisfied_ue_ticks, s.satisfied);
        assert_eq!(f.per_slice.len(), s.slices.len());
    }

    #[test]
    fn split_and_merge_equals_whole() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let samples: Vec<_> = (0..100).map(|t| random_sample(&mut rng, t)).collect();
        let whole = aggregate_reports(&samples);
        for split in [0, 1, 37, 50, 99, 100] {
            let (a, b) = samples.split_at(split);
            let merged = aggregate_reports(a).merge(&aggregate_reports(b));
            assert_eq!(merged, whole, "split at {split}");
        }
        let thirds = aggregate_reports(&samples[..30])
            .merge(&aggregate_reports(&samples[30..70]).merge(&aggregate_reports(&samples[70..])));
        assert_eq!(thirds, whole);
    }
}
