use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use serde::{Deserialize, Serialize};

use super::SliceError;

/// Resource domains of the shared infrastructure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Ran,
    Transport,
    EdgeCompute,
    CoreCompute,
    Storage,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Ran,
        Domain::Transport,
        Domain::EdgeCompute,
        Domain::CoreCompute,
        Domain::Storage,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Ran => "ran",
            Domain::Transport => "tn",
            Domain::EdgeCompute => "edge",
            Domain::CoreCompute => "core",
            Domain::Storage => "storage",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One quantity per [`Domain`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DomainVector(pub [f64; 5]);

impl DomainVector {
    pub const ZERO: DomainVector = DomainVector([0.0; 5]);

    pub fn iter(&self) -> impl Iterator<Item = (Domain, f64)> + '_ {
        Domain::ALL.into_iter().map(|d| (d, self[d]))
    }

    pub fn le(&self, other: &DomainVector) -> bool {
        Domain::ALL.iter().all(|d| self[*d] <= other[*d])
    }

    /// `ran:1|tn:1|edge:0|core:1|storage:1`, used in log columns.
    pub fn encode(&self) -> String {
        self.iter()
            .map(|(d, v)| format!("{d}:{v}"))
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn decode(s: &str) -> Option<DomainVector> {
        let mut out = DomainVector::ZERO;
        let mut seen = 0;
        for part in s.split('|') {
            let (name, value) = part.split_once(':')?;
            let domain = Domain::ALL.into_iter().find(|d| d.as_str() == name)?;
            out[domain] = value.parse().ok()?;
            seen += 1;
        }
        (seen == Domain::ALL.len()).then_some(out)
    }
}

impl Index<Domain> for DomainVector {
    type Output = f64;

    fn index(&self, d: Domain) -> &f64 {
        &self.0[d.index()]
    }
}

impl IndexMut<Domain> for DomainVector {
    fn index_mut(&mut self, d: Domain) -> &mut f64 {
        &mut self.0[d.index()]
    }
}

impl Add for DomainVector {
    type Output = DomainVector;

    fn add(mut self, rhs: DomainVector) -> DomainVector {
        for d in Domain::ALL {
            self[d] += rhs[d];
        }
        self
    }
}

impl Sub for DomainVector {
    type Output = DomainVector;

    fn sub(mut self, rhs: DomainVector) -> DomainVector {
        for d in Domain::ALL {
            self[d] -= rhs[d];
        }
        self
    }
}

/// Finite per-domain capacity and the amount currently committed to slices.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePool {
    capacity: DomainVector,
    committed: DomainVector,
}

impl ResourcePool {
    pub fn new(capacity: DomainVector) -> Self {
        Self {
            capacity,
            committed: DomainVector::ZERO,
        }
    }

    pub fn capacity(&self) -> &DomainVector {
        &self.capacity
    }

    pub fn committed(&self) -> &DomainVector {
        &self.committed
    }

    pub fn headroom(&self, d: Domain) -> f64 {
        self.capacity[d] - self.committed[d]
    }

    pub fn utilization(&self, d: Domain) -> f64 {
        if self.capacity[d] == 0.0 {
            0.0
        } else {
            self.committed[d] / self.capacity[d]
        }
    }

    /// Checks that moving by `net` keeps every domain within `[0, capacity]`.
    pub(crate) fn check(&self, net: &DomainVector) -> Result<(), SliceError> {
        for d in Domain::ALL {
            if net[d] > 0.0 && self.committed[d] + net[d] > self.capacity[d] {
                return Err(SliceError::CapacityExceeded {
                    domain: d,
                    requested: net[d],
                    available: self.headroom(d),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn apply(&mut self, net: &DomainVector) {
        self.committed = self.committed + *net;
    }
}

/// Subnets exported for delegation, one per domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubnetRegistry {
    subnets: BTreeMap<Domain, String>,
}

impl SubnetRegistry {
    pub fn empty() -> Self {
        Self {
            subnets: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, domain: Domain, subnet: &str) {
        self.subnets.insert(domain, subnet.to_string());
    }

    pub fn subnet(&self, domain: Domain) -> Option<&str> {
        self.subnets.get(&domain).map(String::as_str)
    }
}

impl Default for SubnetRegistry {
    /// RAN, transport and edge subnets plus a core network subnet that carries
    /// both core compute and storage.
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Domain::Ran, "ran-1");
        r.register(Domain::Transport, "tn-1");
        r.register(Domain::EdgeCompute, "edge-1");
        r.register(Domain::CoreCompute, "cn-1");
        r.register(Domain::Storage, "cn-1");
        r
    }
}
