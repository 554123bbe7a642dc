use std::collections::{BTreeMap, BTreeSet};

use super::{
    quantize_down, quantize_up, Domain, DomainVector, ResourcePool, SNssai, SliceError, SliceId,
    SubnetRegistry, UeContext, UeId,
};
use crate::catalog::{DemandField, ResourceDemand, ServiceClass};

/// A network slice instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceInstance {
    pub id: SliceId,
    pub s_nssai: SNssai,
    pub service_class: ServiceClass,
    /// Currently reserved resources and configured service levels.
    pub allocation: ResourceDemand,
    /// Floor promised while UEs are attached.
    pub sla: ResourceDemand,
    pub attached_ues: BTreeSet<UeId>,
    pub isolation_tag: String,
    /// Fraction of compute delegated to the edge subnet; the rest goes to the core.
    pub edge_share: f64,
    /// Instantiated at run time from the catalog rather than declared up front.
    pub dynamic: bool,
}

impl SliceInstance {
    pub fn new(
        id: &str,
        s_nssai: SNssai,
        service_class: ServiceClass,
        allocation: ResourceDemand,
        sla: ResourceDemand,
        edge_share: f64,
    ) -> Self {
        Self {
            id: id.to_string(),
            s_nssai,
            service_class,
            allocation,
            sla,
            attached_ues: BTreeSet::new(),
            isolation_tag: format!("iso-{id}"),
            edge_share,
            dynamic: false,
        }
    }

    /// Per-domain commitment implied by an allocation of this slice.
    pub fn commitment_for(&self, allocation: &ResourceDemand) -> DomainVector {
        let edge = quantize_down(allocation.compute_units * self.edge_share);
        let mut v = DomainVector::ZERO;
        v[Domain::Ran] = allocation.bandwidth_mbps;
        v[Domain::Transport] = allocation.bandwidth_mbps;
        v[Domain::EdgeCompute] = edge;
        v[Domain::CoreCompute] = allocation.compute_units - edge;
        v[Domain::Storage] = allocation.storage_gb;
        v
    }

    pub fn commitment(&self) -> DomainVector {
        self.commitment_for(&self.allocation)
    }

    pub fn attached_count(&self) -> u64 {
        self.attached_ues.len() as u64
    }

    /// Concurrent UE limit of the current allocation.
    pub fn ue_limit(&self) -> u64 {
        self.allocation.concurrent_ues as u64
    }
}

/// Resources handed to one subnet for one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Delegation {
    pub subnet: String,
    pub domain: Domain,
    pub amount: f64,
}

/// Journal entry written whenever a slice's commitment changes.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitRecord {
    pub slice_id: SliceId,
    pub isolation_tag: String,
    pub before: DomainVector,
    pub after: DomainVector,
    pub delegations: Vec<Delegation>,
}

/// Where a switching UE lands.
#[derive(Debug, Clone, PartialEq)]
pub enum SwitchTarget {
    Existing(SliceId),
    /// A new instance whose allocation already covers the arriving UE.
    New(Box<SliceInstance>),
}

/// Slice table, shared pool and per-isolation-tag commitments.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceTable {
    pool: ResourcePool,
    registry: SubnetRegistry,
    slices: BTreeMap<SliceId, SliceInstance>,
    commitments: BTreeMap<String, DomainVector>,
    journal: Vec<CommitRecord>,
}

fn validate_demand(d: &ResourceDemand) -> Result<(), SliceError> {
    for f in DemandField::ALL {
        let v = d.get(f);
        if !v.is_finite() || v < 0.0 {
            return Err(SliceError::InvalidDemand(f));
        }
    }
    Ok(())
}

fn on_grid_up(d: &ResourceDemand) -> ResourceDemand {
    let mut out = *d;
    for f in DemandField::VOLUME {
        out.set(f, quantize_up(d.get(f)));
    }
    out.concurrent_ues = d.concurrent_ues.ceil();
    out
}

impl SliceTable {
    pub fn new(capacity: DomainVector, registry: SubnetRegistry) -> Self {
        Self {
            pool: ResourcePool::new(capacity),
            registry,
            slices: BTreeMap::new(),
            commitments: BTreeMap::new(),
            journal: Vec::new(),
        }
    }

    pub fn pool(&self) -> &ResourcePool {
        &self.pool
    }

    pub fn registry(&self) -> &SubnetRegistry {
        &self.registry
    }

    pub fn slices(&self) -> impl Iterator<Item = &SliceInstance> {
        self.slices.values()
    }

    pub fn slice(&self, id: &str) -> Option<&SliceInstance> {
        self.slices.get(id)
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn slice_by_snssai(&self, s: &SNssai) -> Option<&SliceInstance> {
        self.slices.values().find(|sl| sl.s_nssai == *s)
    }

    pub fn commitment(&self, isolation_tag: &str) -> Option<&DomainVector> {
        self.commitments.get(isolation_tag)
    }

    pub fn commitments(&self) -> &BTreeMap<String, DomainVector> {
        &self.commitments
    }

    pub fn journal(&self) -> &[CommitRecord] {
        &self.journal
    }

    pub fn drain_journal(&mut self) -> Vec<CommitRecord> {
        std::mem::take(&mut self.journal)
    }

    fn get(&self, id: &str) -> Result<&SliceInstance, SliceError> {
        self.slices
            .get(id)
            .ok_or_else(|| SliceError::SliceNotFound(id.to_string()))
    }

    /// Moves slice `id` to `next`, updating pool, commitments and journal.
    /// Refuses to newly undercut the SLA or the attached UE count unless `force`.
    /// Returns whether the slice ends below its SLA with UEs attached.
    fn commit_change(
        &mut self,
        id: &str,
        next: ResourceDemand,
        force: bool,
    ) -> Result<bool, SliceError> {
        validate_demand(&next)?;
        let slice = self.get(id)?;
        let occupied = !slice.attached_ues.is_empty();
        if occupied && !force {
            let now_short = slice.allocation.shortfalls(&slice.sla);
            for field in next.shortfalls(&slice.sla) {
                let worse = if field.lower_is_stricter() {
                    next.get(field) > slice.allocation.get(field)
                } else {
                    next.get(field) < slice.allocation.get(field)
                };
                if !now_short.contains(&field) || worse {
                    return Err(SliceError::SlaFloor {
                        slice: id.to_string(),
                        field,
                    });
                }
            }
            if (slice.attached_count() as f64) > next.concurrent_ues {
                return Err(SliceError::ScaleLimit {
                    slice: id.to_string(),
                    limit: next.concurrent_ues as u64,
                });
            }
        }
        let before = slice.commitment();
        let after = slice.commitment_for(&next);
        let net = after - before;
        self.pool.check(&net)?;
        let mut delegations = Vec::new();
        for (domain, amount) in after.iter() {
            if amount > 0.0 || net[domain] != 0.0 {
                let subnet = self
                    .registry
                    .subnet(domain)
                    .ok_or(SliceError::UnregisteredSubnet(domain))?;
                delegations.push(Delegation {
                    subnet: subnet.to_string(),
                    domain,
                    amount,
                });
            }
        }

        let tag = slice.isolation_tag.clone();
        self.pool.apply(&net);
        self.commitments.insert(tag.clone(), after);
        let slice = self.slices.get_mut(id).expect("checked above");
        slice.allocation = next;
        let below = occupied && !next.meets(&slice.sla);
        if before != after {
            self.journal.push(CommitRecord {
                slice_id: id.to_string(),
                isolation_tag: tag,
                before,
                after,
                delegations,
            });
        }
        Ok(below)
    }

    /// Instantiates a slice and commits its initial allocation.
    pub fn add_slice(&mut self, mut instance: SliceInstance) -> Result<(), SliceError> {
        if self.slices.contains_key(&instance.id) {
            return Err(SliceError::DuplicateSlice(instance.id));
        }
        if self.slice_by_snssai(&instance.s_nssai).is_some() {
            return Err(SliceError::DuplicateSnssai(instance.s_nssai));
        }
        if self.commitments.contains_key(&instance.isolation_tag) {
            return Err(SliceError::DuplicateSlice(instance.isolation_tag));
        }
        validate_demand(&instance.allocation)?;
        validate_demand(&instance.sla)?;
        let initial = on_grid_up(&instance.allocation);
        instance.allocation = ResourceDemand {
            bandwidth_mbps: 0.0,
            compute_units: 0.0,
            storage_gb: 0.0,
            ..initial
        };
        instance.attached_ues.clear();
        let id = instance.id.clone();
        let mut next = self.clone();
        next.commitments
            .insert(instance.isolation_tag.clone(), DomainVector::ZERO);
        next.slices.insert(id.clone(), instance);
        next.commit_change(&id, initial, false)?;
        *self = next;
        Ok(())
    }

    /// Reserves `delta` on top of the slice's allocation. All or nothing.
    pub fn allocate(&mut self, id: &str, delta: &ResourceDemand) -> Result<(), SliceError> {
        validate_demand(delta)?;
        let current = self.get(id)?.allocation;
        let next = current.add_volume(&on_grid_up(delta));
        self.commit_change(id, next, false).map(|_| ())
    }

    /// Returns `delta` to the pool. With `force` the SLA floor may be undercut;
    /// the return value reports whether that happened.
    pub fn release(
        &mut self,
        id: &str,
        delta: &ResourceDemand,
        force: bool,
    ) -> Result<bool, SliceError> {
        validate_demand(delta)?;
        let current = self.get(id)?.allocation;
        let mut next = current;
        for f in DemandField::VOLUME {
            let amount = quantize_down(delta.get(f));
            if amount > current.get(f) {
                return Err(SliceError::ReleaseUnderflow { field: f });
            }
            next.set(f, current.get(f) - amount);
        }
        self.commit_change(id, next, force)
    }

    /// Moves the allocation to `target`, volumes and service levels alike.
    pub fn scale_slice(
        &mut self,
        id: &str,
        target: &ResourceDemand,
        force: bool,
    ) -> Result<bool, SliceError> {
        validate_demand(target)?;
        self.commit_change(id, on_grid_up(target), force)
    }

    /// Adds `ue` to slice `id`, reserving `marginal` for it.
    pub(crate) fn admit(
        &mut self,
        ue: &str,
        id: &str,
        marginal: &ResourceDemand,
    ) -> Result<(), SliceError> {
        let slice = self.get(id)?;
        if slice.attached_count() + 1 > slice.ue_limit() {
            return Err(SliceError::ScaleLimit {
                slice: id.to_string(),
                limit: slice.ue_limit(),
            });
        }
        if !marginal.volume_is_zero() {
            self.allocate(id, marginal)?;
        }
        self.slices
            .get_mut(id)
            .expect("checked above")
            .attached_ues
            .insert(ue.to_string());
        Ok(())
    }

    /// Removes `ue` from its slice and returns up to `share` of volume, never
    /// going below the SLA floor while other UEs remain.
    fn detach(&mut self, ue: &str, id: &str, share: &ResourceDemand) -> Result<(), SliceError> {
        let slice = self
            .slices
            .get_mut(id)
            .ok_or_else(|| SliceError::SliceNotFound(id.to_string()))?;
        if !slice.attached_ues.remove(ue) {
            return Err(SliceError::NotAttached(ue.to_string()));
        }
        let remaining = !slice.attached_ues.is_empty();
        let mut release = ResourceDemand::default();
        for f in DemandField::VOLUME {
            let floor = if remaining { slice.sla.get(f) } else { 0.0 };
            let free = (slice.allocation.get(f) - floor).max(0.0);
            release.set(f, quantize_down(share.get(f).min(free)));
        }
        if !release.volume_is_zero() {
            self.release(id, &release, false)?;
        }
        Ok(())
    }

    /// Detaches `ue` from its current slice and admits it to `target` as one
    /// transaction. The old slice gives back `release_share` (bounded by its
    /// floor) before the new one reserves `marginal`.
    pub fn switch_ue(
        &mut self,
        ue: &UeContext,
        target: SwitchTarget,
        release_share: &ResourceDemand,
        marginal: &ResourceDemand,
    ) -> Result<UeContext, SliceError> {
        let from = ue
            .current_slice
            .clone()
            .ok_or_else(|| SliceError::NotAttached(ue.ue_id.clone()))?;
        let target_sst = match &target {
            SwitchTarget::Existing(id) => {
                let s = self.get(id)?;
                if s.attached_ues.contains(&ue.ue_id) {
                    return Err(SliceError::AlreadyAttached(ue.ue_id.clone(), id.clone()));
                }
                s.s_nssai.sst()
            }
            SwitchTarget::New(inst) => inst.s_nssai.sst(),
        };
        if !ue.allowed_nssai.iter().any(|s| s.sst() == target_sst) {
            return Err(SliceError::NotSubscribed {
                ue: ue.ue_id.clone(),
                sst: target_sst,
            });
        }

        let mut next = self.clone();
        next.detach(&ue.ue_id, &from, release_share)?;
        let to = match target {
            SwitchTarget::Existing(id) => {
                next.admit(&ue.ue_id, &id, marginal)?;
                id
            }
            SwitchTarget::New(inst) => {
                let id = inst.id.clone();
                next.add_slice(*inst)?;
                next.admit(&ue.ue_id, &id, &ResourceDemand::default())?;
                id
            }
        };
        *self = next;
        let mut ctx = ue.clone();
        ctx.current_slice = Some(to);
        Ok(ctx)
    }

    /// Re-derives every ledger total from scratch and compares.
    pub fn audit(&self) -> Result<(), String> {
        let mut by_tag = DomainVector::ZERO;
        for v in self.commitments.values() {
            by_tag = by_tag + *v;
        }
        let mut by_slice = DomainVector::ZERO;
        for s in self.slices.values() {
            let derived = s.commitment();
            match self.commitments.get(&s.isolation_tag) {
                Some(v) if *v == derived => {}
                other => {
                    return Err(format!(
                        "slice {} commitment {:?} disagrees with allocation {:?}",
                        s.id, other, derived
                    ))
                }
            }
            by_slice = by_slice + derived;
        }
        if self.commitments.len() != self.slices.len() {
            return Err("isolation tags and slices out of step".into());
        }
        if by_tag != *self.pool.committed() || by_slice != *self.pool.committed() {
            return Err(format!(
                "pool committed {:?} but slices sum to {:?}",
                self.pool.committed(),
                by_slice
            ));
        }
        if !self.pool.committed().le(self.pool.capacity()) {
            return Err("pool over-committed".into());
        }
        if Domain::ALL.iter().any(|d| self.pool.committed()[*d] < 0.0) {
            return Err("negative commitment".into());
        }
        Ok(())
    }
}
