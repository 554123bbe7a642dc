use std::fmt;

use serde::{Deserialize, Serialize};

use super::CatalogError;

/// Quantified demand (or reservation) of a slice or UE.
///
/// Bandwidth, compute and storage are volume quantities that add up across
/// UEs. The remaining fields are service levels: a reservation satisfies a
/// requirement when its delay budget is no larger and every other level is
/// at least as large.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResourceDemand {
    pub bandwidth_mbps: f64,
    pub delay_budget_ms: f64,
    pub reliability_prob: f64,
    pub concurrent_ues: f64,
    pub compute_units: f64,
    pub storage_gb: f64,
    pub handover_rate_per_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandField {
    Bandwidth,
    DelayBudget,
    Reliability,
    ConcurrentUes,
    Compute,
    Storage,
    HandoverRate,
}

impl DemandField {
    pub const ALL: [DemandField; 7] = [
        DemandField::Bandwidth,
        DemandField::DelayBudget,
        DemandField::Reliability,
        DemandField::ConcurrentUes,
        DemandField::Compute,
        DemandField::Storage,
        DemandField::HandoverRate,
    ];

    pub const VOLUME: [DemandField; 3] = [
        DemandField::Bandwidth,
        DemandField::Compute,
        DemandField::Storage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DemandField::Bandwidth => "bandwidth_mbps",
            DemandField::DelayBudget => "delay_budget_ms",
            DemandField::Reliability => "reliability_prob",
            DemandField::ConcurrentUes => "concurrent_ues",
            DemandField::Compute => "compute_units",
            DemandField::Storage => "storage_gb",
            DemandField::HandoverRate => "handover_rate_per_min",
        }
    }

    /// Smaller is more demanding only for the delay budget.
    pub fn lower_is_stricter(self) -> bool {
        matches!(self, DemandField::DelayBudget)
    }
}

impl fmt::Display for DemandField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ResourceDemand {
    pub fn get(&self, field: DemandField) -> f64 {
        match field {
            DemandField::Bandwidth => self.bandwidth_mbps,
            DemandField::DelayBudget => self.delay_budget_ms,
            DemandField::Reliability => self.reliability_prob,
            DemandField::ConcurrentUes => self.concurrent_ues,
            DemandField::Compute => self.compute_units,
            DemandField::Storage => self.storage_gb,
            DemandField::HandoverRate => self.handover_rate_per_min,
        }
    }

    pub fn set(&mut self, field: DemandField, value: f64) {
        let slot = match field {
            DemandField::Bandwidth => &mut self.bandwidth_mbps,
            DemandField::DelayBudget => &mut self.delay_budget_ms,
            DemandField::Reliability => &mut self.reliability_prob,
            DemandField::ConcurrentUes => &mut self.concurrent_ues,
            DemandField::Compute => &mut self.compute_units,
            DemandField::Storage => &mut self.storage_gb,
            DemandField::HandoverRate => &mut self.handover_rate_per_min,
        };
        *slot = value;
    }

    /// Demand with only volume quantities set.
    pub fn volume(bandwidth_mbps: f64, compute_units: f64, storage_gb: f64) -> Self {
        Self {
            bandwidth_mbps,
            compute_units,
            storage_gb,
            ..Self::default()
        }
    }

    pub fn is_valid(&self) -> bool {
        DemandField::ALL
            .iter()
            .all(|f| self.get(*f).is_finite() && self.get(*f) >= 0.0)
            && self.reliability_prob < 1.0
    }

    pub fn volume_is_zero(&self) -> bool {
        DemandField::VOLUME.iter().all(|f| self.get(*f) == 0.0)
    }

    /// Fields in which `self` falls short of `required`.
    pub fn shortfalls(&self, required: &ResourceDemand) -> Vec<DemandField> {
        DemandField::ALL
            .into_iter()
            .filter(|f| {
                let have = self.get(*f);
                let need = required.get(*f);
                if f.lower_is_stricter() {
                    have > need
                } else {
                    have < need
                }
            })
            .collect()
    }

    pub fn meets(&self, required: &ResourceDemand) -> bool {
        self.shortfalls(required).is_empty()
    }

    /// Componentwise most demanding of the two.
    pub fn strictest(&self, other: &ResourceDemand) -> ResourceDemand {
        let mut out = *self;
        for f in DemandField::ALL {
            let v = if f.lower_is_stricter() {
                self.get(f).min(other.get(f))
            } else {
                self.get(f).max(other.get(f))
            };
            out.set(f, v);
        }
        out
    }

    /// Multiplies the volume quantities, leaving service levels alone.
    pub fn scale_volume(&self, factor: f64) -> ResourceDemand {
        let mut out = *self;
        for f in DemandField::VOLUME {
            out.set(f, self.get(f) * factor);
        }
        out
    }

    pub fn add_volume(&self, other: &ResourceDemand) -> ResourceDemand {
        let mut out = *self;
        for f in DemandField::VOLUME {
            out.set(f, self.get(f) + other.get(f));
        }
        out
    }
}

/// Trades bandwidth for encoder compute at compression ratio `rho`.
pub fn tradeoff_demand(
    demand: &ResourceDemand,
    rho: f64,
    kappa: f64,
) -> Result<ResourceDemand, CatalogError> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(CatalogError::InvalidRho(rho));
    }
    if rho == 1.0 {
        return Ok(*demand);
    }
    Ok(ResourceDemand {
        bandwidth_mbps: rho * demand.bandwidth_mbps,
        compute_units: demand.compute_units + kappa * (1.0 / rho - 1.0),
        ..*demand
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ResourceDemand {
        ResourceDemand {
            bandwidth_mbps: 10.0,
            delay_budget_ms: 50.0,
            reliability_prob: 0.999,
            concurrent_ues: 100.0,
            compute_units: 4.0,
            storage_gb: 10.0,
            handover_rate_per_min: 1.0,
        }
    }

    #[test]
    fn identity_at_rho_one() {
        assert_eq!(tradeoff_demand(&sample(), 1.0, 1.0).unwrap(), sample());
    }

    #[test]
    fn half_compression() {
        let d = tradeoff_demand(&sample(), 0.5, 1.0).unwrap();
        assert_eq!(d.bandwidth_mbps, 5.0);
        assert_eq!(d.compute_units, 5.0);
        assert_eq!(d.storage_gb, 10.0);
        assert_eq!(d.delay_budget_ms, 50.0);
    }

    #[test]
    fn invalid_rho() {
        for rho in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                tradeoff_demand(&sample(), rho, 1.0),
                Err(CatalogError::InvalidRho(_))
            ));
        }
    }

    #[test]
    fn shortfalls_respect_direction() {
        let need = sample();
        let mut have = sample();
        have.delay_budget_ms = 200.0;
        have.bandwidth_mbps = 9.0;
        have.storage_gb = 20.0;
        assert_eq!(
            have.shortfalls(&need),
            vec![DemandField::Bandwidth, DemandField::DelayBudget]
        );
        assert!(sample().meets(&sample()));
    }

    proptest! {
        #[test]
        fn compression_moves_bandwidth_into_compute(
            rho in 0.01f64..0.999,
            bw in 0.1f64..1000.0,
            cu in 0.0f64..100.0,
        ) {
            let mut d = sample();
            d.bandwidth_mbps = bw;
            d.compute_units = cu;
            let t = tradeoff_demand(&d, rho, 1.0).unwrap();
            prop_assert!(t.bandwidth_mbps < d.bandwidth_mbps);
            prop_assert!(t.compute_units > d.compute_units);
            let twice = tradeoff_demand(&tradeoff_demand(&d, 1.0, 1.0).unwrap(), 1.0, 1.0).unwrap();
            prop_assert_eq!(twice, d);
        }
    }
}
