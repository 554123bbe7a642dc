use crate::catalog::{edge_share_of, QosCalibration, ResourceDemand};
use crate::policy::SwitchRequest;
use crate::slice::{SNssai, SliceError, SliceId, SliceInstance, SliceTable, SwitchTarget, UeContext};

use super::{keep_alive_floor, ue_demand};

/// First S-NSSAI differentiator handed to run-time instances.
pub const DYNAMIC_SD_BASE: u32 = 0x80_0000;

/// A concrete way to carry out a switch request.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchPlan {
    pub target: SwitchTarget,
    pub to_slice: SliceId,
    /// Volume the old slice gives back.
    pub release_share: ResourceDemand,
    /// Volume the target reserves for the arriving UE.
    pub marginal: ResourceDemand,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwitchDecision {
    Accept(SwitchPlan),
    Deny(SliceError),
}

/// Picks the target of a switch: an existing slice of the requested class
/// with room for one more UE, else a fresh instance of that class.
pub fn plan_switch(
    req: &SwitchRequest,
    table: &SliceTable,
    ue: &UeContext,
    cal: &QosCalibration,
    rho: f64,
) -> Result<SwitchPlan, SliceError> {
    let from = table
        .slice(&req.from_slice)
        .ok_or_else(|| SliceError::SliceNotFound(req.from_slice.clone()))?;
    let release_share = ue_demand(&from.service_class, rho, cal);
    let marginal = ue_demand(&req.to_class, rho, cal);

    let existing = table.slices().find(|s| {
        s.id != from.id
            && s.service_class == req.to_class
            && s.attached_count() < s.ue_limit()
            && ue.allowed_nssai.iter().any(|a| a.sst() == s.s_nssai.sst())
    });
    if let Some(s) = existing {
        return Ok(SwitchPlan {
            target: SwitchTarget::Existing(s.id.clone()),
            to_slice: s.id.clone(),
            release_share,
            marginal,
        });
    }

    let code = u32::from(req.to_class.id.0);
    let n = (0..256u32)
        .find(|n| {
            let id = format!("dyn-{}-{n}", req.to_class.id);
            table.slice(&id).is_none()
        })
        .ok_or_else(|| SliceError::ScaleLimit {
            slice: format!("dyn-{}", req.to_class.id),
            limit: 256,
        })?;
    let id = format!("dyn-{}-{n}", req.to_class.id);
    let s_nssai = SNssai::with_type(req.to_class.sst_hint, DYNAMIC_SD_BASE + code * 256 + n)
        .expect("class codes stay below 3^7, so the differentiator fits 24 bits");
    let mut instance = SliceInstance::new(
        &id,
        s_nssai,
        req.to_class,
        marginal,
        keep_alive_floor(cal),
        edge_share_of(&req.tasks),
    );
    instance.dynamic = true;
    Ok(SwitchPlan {
        target: SwitchTarget::New(Box::new(instance)),
        to_slice: id,
        release_share,
        marginal,
    })
}

/// Plans a switch and trial-runs it on a copy of the table.
pub fn decide_switch(
    req: &SwitchRequest,
    table: &SliceTable,
    ue: &UeContext,
    cal: &QosCalibration,
    rho: f64,
) -> SwitchDecision {
    let plan = match plan_switch(req, table, ue, cal, rho) {
        Ok(p) => p,
        Err(e) => return SwitchDecision::Deny(e),
    };
    let mut trial = table.clone();
    match trial.switch_ue(ue, plan.target.clone(), &plan.release_share, &plan.marginal) {
        Ok(_) => SwitchDecision::Accept(plan),
        Err(e) => SwitchDecision::Deny(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{aggregate_class, quantify, ServiceClass, SliceServiceType};
    use crate::semantic::TaskKind;
    use crate::slice::{AttachState, DomainVector, SubnetRegistry};
    use std::collections::BTreeSet;

    fn setup(capacity: f64, allowed: Vec<SNssai>) -> (SliceTable, UeContext) {
        let cal = QosCalibration::default();
        let class = ServiceClass::default_class();
        let mut t = SliceTable::new(DomainVector([capacity; 5]), SubnetRegistry::default());
        let d = quantify(&class.qos, &cal, 1).unwrap();
        t.add_slice(SliceInstance::new(
            "embb",
            SNssai::with_type(SliceServiceType::Embb, 1).unwrap(),
            class,
            d,
            d,
            0.0,
        ))
        .unwrap();
        t.admit("u", "embb", &ResourceDemand::default()).unwrap();
        let mut ue = UeContext::new("u", "u", allowed);
        ue.state = AttachState::Registered;
        ue.current_slice = Some("embb".into());
        (t, ue)
    }

    fn request(tasks: &[TaskKind]) -> SwitchRequest {
        let tasks: BTreeSet<_> = tasks.iter().copied().collect();
        SwitchRequest {
            ue_id: "u".into(),
            from_slice: "embb".into(),
            to_class: aggregate_class(&tasks),
            tasks,
            issued_at: 0,
        }
    }

    fn all_types() -> Vec<SNssai> {
        vec![
            SNssai::new(1, 1).unwrap(),
            SNssai::new(2, 1).unwrap(),
            SNssai::new(3, 1).unwrap(),
        ]
    }

    #[test]
    fn new_instance_when_no_match() {
        let (t, ue) = setup(1e4, all_types());
        let req = request(&[TaskKind::AlertNotification]);
        let SwitchDecision::Accept(plan) = decide_switch(&req, &t, &ue, &QosCalibration::default(), 1.0)
        else {
            panic!("denied")
        };
        let SwitchTarget::New(inst) = &plan.target else {
            panic!("expected new instance")
        };
        assert_eq!(inst.s_nssai.sst(), SliceServiceType::Urllc);
        assert!(inst.s_nssai.sd() >= DYNAMIC_SD_BASE);
        assert_eq!(plan.to_slice, format!("dyn-{}-0", req.to_class.id));

        let mut t2 = t.clone();
        t2.switch_ue(&ue, plan.target, &plan.release_share, &plan.marginal)
            .unwrap();
        t2.audit().unwrap();
        // A second UE of the same class reuses the instance.
        let (_, mut ue2) = setup(1e4, all_types());
        ue2.ue_id = "v".into();
        t2.admit("v", "embb", &ResourceDemand::default()).unwrap();
        let mut req2 = req.clone();
        req2.ue_id = "v".into();
        let SwitchDecision::Accept(p2) =
            decide_switch(&req2, &t2, &ue2, &QosCalibration::default(), 1.0)
        else {
            panic!("denied")
        };
        assert_eq!(p2.target, SwitchTarget::Existing(format!("dyn-{}-0", req.to_class.id)));
    }

    #[test]
    fn unsubscribed_type_is_denied() {
        let (t, ue) = setup(1e4, vec![SNssai::new(1, 1).unwrap()]);
        let req = request(&[TaskKind::AlertNotification]);
        assert!(matches!(
            decide_switch(&req, &t, &ue, &QosCalibration::default(), 1.0),
            SwitchDecision::Deny(SliceError::NotSubscribed { .. })
        ));
    }

    #[test]
    fn no_capacity_is_denied_without_side_effects() {
        let (t, ue) = setup(2.0, all_types());
        let before = t.clone();
        let req = request(&[TaskKind::SmartAmbulance]);
        assert!(matches!(
            decide_switch(&req, &t, &ue, &QosCalibration::default(), 1.0),
            SwitchDecision::Deny(SliceError::CapacityExceeded { .. })
        ));
        assert_eq!(t, before);
    }
}
