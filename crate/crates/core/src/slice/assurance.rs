use serde::{Deserialize, Serialize};

use super::{SliceId, SliceTable};
use crate::catalog::DemandField;
use crate::semantic::Tick;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Allocation below the SLA floor in one metric.
    Floor(DemandField),
    /// More UEs attached than the allocation carries.
    Scale { attached: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlaViolation {
    pub tick: Tick,
    pub slice_id: SliceId,
    pub kind: ViolationKind,
}

/// One record per under-floor metric of an occupied slice, plus one per
/// slice carrying more UEs than its concurrency allows.
pub fn assure_sla(table: &SliceTable, tick: Tick) -> Vec<SlaViolation> {
    let mut out = Vec::new();
    for slice in table.slices() {
        if slice.attached_ues.is_empty() {
            continue;
        }
        for field in slice.allocation.shortfalls(&slice.sla) {
            out.push(SlaViolation {
                tick,
                slice_id: slice.id.clone(),
                kind: ViolationKind::Floor(field),
            });
        }
        if slice.attached_count() > slice.ue_limit() {
            out.push(SlaViolation {
                tick,
                slice_id: slice.id.clone(),
                kind: ViolationKind::Scale {
                    attached: slice.attached_count(),
                    limit: slice.ue_limit(),
                },
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{quantify, QosCalibration, ResourceDemand, ServiceClass, SliceServiceType};
    use crate::slice::{DomainVector, SNssai, SliceInstance, SubnetRegistry};

    fn table_with(alloc_ues: u32, sla_ues: u32) -> SliceTable {
        let cal = QosCalibration::default();
        let class = ServiceClass::default_class();
        let mut t = SliceTable::new(DomainVector([1e4; 5]), SubnetRegistry::default());
        t.add_slice(SliceInstance::new(
            "s",
            SNssai::with_type(SliceServiceType::Embb, 1).unwrap(),
            class,
            quantify(&class.qos, &cal, alloc_ues).unwrap(),
            quantify(&class.qos, &cal, sla_ues).unwrap(),
            0.0,
        ))
        .unwrap();
        t
    }

    #[test]
    fn at_floor_is_clean() {
        let mut t = table_with(2, 2);
        t.admit("u", "s", &ResourceDemand::default()).unwrap();
        assert!(assure_sla(&t, 0).is_empty());
    }

    #[test]
    fn overfull_slice_reports_scale() {
        let mut t = table_with(1, 1);
        // Default class carries 10 UEs; force an 11th by lowering the limit.
        for i in 0..10 {
            t.admit(&format!("u{i}"), "s", &ResourceDemand::default()).unwrap();
        }
        let mut target = t.slice("s").unwrap().allocation;
        target.concurrent_ues = 10.0;
        t.scale_slice("s", &target, false).unwrap();
        assert!(t.admit("u10", "s", &ResourceDemand::default()).is_err());
        target.concurrent_ues = 9.0;
        t.scale_slice("s", &target, true).unwrap();
        let v = assure_sla(&t, 7);
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|x| x.kind == ViolationKind::Scale { attached: 10, limit: 9 }));
        assert!(v.iter().any(|x| x.kind == ViolationKind::Floor(DemandField::ConcurrentUes)));
    }

    #[test]
    fn forced_release_flags_each_metric() {
        let mut t = table_with(2, 2);
        t.admit("u", "s", &ResourceDemand::default()).unwrap();
        let d = ResourceDemand::volume(1.0, 1.0, 0.0);
        t.release("s", &d, true).unwrap();
        let fields: Vec<_> = assure_sla(&t, 3)
            .into_iter()
            .map(|v| v.kind)
            .collect();
        // Componentwise oracle against the floor.
        let alloc = t.slice("s").unwrap().allocation;
        let sla = t.slice("s").unwrap().sla;
        let expected: Vec<_> = DemandField::ALL
            .into_iter()
            .filter(|f| alloc.get(*f) < sla.get(*f))
            .map(ViolationKind::Floor)
            .collect();
        assert_eq!(fields, expected);
        assert_eq!(fields.len(), 2);
    }
}
