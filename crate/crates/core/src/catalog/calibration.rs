use serde::{Deserialize, Serialize};

use super::{CatalogError, QosLevel, QosMetric};

/// Per-metric lookup from QoS level to a concrete quantity, indexed LOW, AVG, HIGH.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QosCalibration {
    /// Mbit/s per UE.
    pub bandwidth_mbps: [f64; 3],
    /// Delay budget in ms; shrinks as sensitivity grows.
    pub delay_budget_ms: [f64; 3],
    pub reliability: [f64; 3],
    /// Concurrent UEs the slice must carry.
    pub scale_ues: [f64; 3],
    /// Abstract compute units per UE.
    pub compute_units: [f64; 3],
    /// GB per UE.
    pub storage_gb: [f64; 3],
    pub handovers_per_min: [f64; 3],
    /// Compute cost of encoding, charged per unit of `1/rho - 1`.
    pub kappa: f64,
}

impl Default for QosCalibration {
    fn default() -> Self {
        Self {
            bandwidth_mbps: [1.0, 10.0, 50.0],
            delay_budget_ms: [200.0, 50.0, 10.0],
            reliability: [0.99, 0.999, 0.99999],
            scale_ues: [10.0, 100.0, 1000.0],
            compute_units: [1.0, 4.0, 16.0],
            storage_gb: [1.0, 10.0, 100.0],
            handovers_per_min: [0.0, 1.0, 10.0],
            kappa: 1.0,
        }
    }
}

impl QosCalibration {
    pub fn table(&self, metric: QosMetric) -> &[f64; 3] {
        match metric {
            QosMetric::Bandwidth => &self.bandwidth_mbps,
            QosMetric::DelaySensitivity => &self.delay_budget_ms,
            QosMetric::Reliability => &self.reliability,
            QosMetric::Scale => &self.scale_ues,
            QosMetric::Compute => &self.compute_units,
            QosMetric::Storage => &self.storage_gb,
            QosMetric::Mobility => &self.handovers_per_min,
        }
    }

    pub fn table_mut(&mut self, metric: QosMetric) -> &mut [f64; 3] {
        match metric {
            QosMetric::Bandwidth => &mut self.bandwidth_mbps,
            QosMetric::DelaySensitivity => &mut self.delay_budget_ms,
            QosMetric::Reliability => &mut self.reliability,
            QosMetric::Scale => &mut self.scale_ues,
            QosMetric::Compute => &mut self.compute_units,
            QosMetric::Storage => &mut self.storage_gb,
            QosMetric::Mobility => &mut self.handovers_per_min,
        }
    }

    pub fn lookup(&self, metric: QosMetric, level: QosLevel) -> f64 {
        self.table(metric)[level.index()]
    }

    /// Checks finiteness, ranges and strict monotonicity in level.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for metric in QosMetric::ALL {
            let t = self.table(metric);
            if t.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(CatalogError::InvalidCalibration {
                    metric,
                    reason: "values must be finite and non-negative".into(),
                });
            }
            let increasing = t[0] < t[1] && t[1] < t[2];
            let decreasing = t[0] > t[1] && t[1] > t[2];
            let ok = match metric {
                QosMetric::DelaySensitivity => decreasing,
                _ => increasing,
            };
            if !ok {
                return Err(CatalogError::NonMonotoneCalibration { metric });
            }
        }
        if self.reliability.iter().any(|p| *p >= 1.0) {
            return Err(CatalogError::InvalidCalibration {
                metric: QosMetric::Reliability,
                reason: "success probability must be below 1".into(),
            });
        }
        if self.scale_ues.iter().any(|u| u.fract() != 0.0) {
            return Err(CatalogError::InvalidCalibration {
                metric: QosMetric::Scale,
                reason: "concurrent UE counts must be whole numbers".into(),
            });
        }
        if !self.kappa.is_finite() || self.kappa < 0.0 {
            return Err(CatalogError::InvalidCalibration {
                metric: QosMetric::Compute,
                reason: "kappa must be finite and non-negative".into(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        QosCalibration::default().validate().unwrap();
    }

    #[test]
    fn rejects_flat_table() {
        let mut cal = QosCalibration::default();
        cal.compute_units = [4.0, 4.0, 16.0];
        assert_eq!(
            cal.validate(),
            Err(CatalogError::NonMonotoneCalibration {
                metric: QosMetric::Compute
            })
        );
    }

    #[test]
    fn rejects_increasing_delay() {
        let mut cal = QosCalibration::default();
        cal.delay_budget_ms = [10.0, 50.0, 200.0];
        assert!(cal.validate().is_err());
    }

    #[test]
    fn rejects_certain_reliability() {
        let mut cal = QosCalibration::default();
        cal.reliability = [0.9, 0.99, 1.0];
        assert!(cal.validate().is_err());
    }
}
