use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CatalogError;

/// Ordinal QoS level used in the task catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QosLevel {
    Low,
    Avg,
    High,
}

impl QosLevel {
    pub const ALL: [QosLevel; 3] = [QosLevel::Low, QosLevel::Avg, QosLevel::High];

    pub fn index(self) -> usize {
        match self {
            QosLevel::Low => 0,
            QosLevel::Avg => 1,
            QosLevel::High => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QosLevel::Low => "LOW",
            QosLevel::Avg => "AVG",
            QosLevel::High => "HIGH",
        }
    }
}

impl fmt::Display for QosLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QosLevel {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LOW" => Ok(QosLevel::Low),
            "AVG" => Ok(QosLevel::Avg),
            "HIGH" => Ok(QosLevel::High),
            other => Err(CatalogError::UnknownLevel(other.to_string())),
        }
    }
}

/// The seven QoS dimensions of the task catalog, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QosMetric {
    Bandwidth,
    DelaySensitivity,
    Reliability,
    Scale,
    Compute,
    Storage,
    Mobility,
}

impl QosMetric {
    pub const ALL: [QosMetric; 7] = [
        QosMetric::Bandwidth,
        QosMetric::DelaySensitivity,
        QosMetric::Reliability,
        QosMetric::Scale,
        QosMetric::Compute,
        QosMetric::Storage,
        QosMetric::Mobility,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QosMetric::Bandwidth => "bandwidth",
            QosMetric::DelaySensitivity => "delay_sensitivity",
            QosMetric::Reliability => "reliability",
            QosMetric::Scale => "scale",
            QosMetric::Compute => "compute",
            QosMetric::Storage => "storage",
            QosMetric::Mobility => "mobility",
        }
    }
}

impl fmt::Display for QosMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Qualitative requirement vector of a task or service class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QosVector {
    pub bandwidth: QosLevel,
    pub delay_sensitivity: QosLevel,
    pub reliability: QosLevel,
    pub scale: QosLevel,
    pub compute: QosLevel,
    pub storage: QosLevel,
    pub mobility: QosLevel,
}

impl QosVector {
    pub const fn uniform(level: QosLevel) -> Self {
        Self {
            bandwidth: level,
            delay_sensitivity: level,
            reliability: level,
            scale: level,
            compute: level,
            storage: level,
            mobility: level,
        }
    }

    /// Builds a vector from levels given in column order.
    pub const fn from_array(levels: [QosLevel; 7]) -> Self {
        Self {
            bandwidth: levels[0],
            delay_sensitivity: levels[1],
            reliability: levels[2],
            scale: levels[3],
            compute: levels[4],
            storage: levels[5],
            mobility: levels[6],
        }
    }

    pub fn to_array(self) -> [QosLevel; 7] {
        [
            self.bandwidth,
            self.delay_sensitivity,
            self.reliability,
            self.scale,
            self.compute,
            self.storage,
            self.mobility,
        ]
    }

    pub fn get(&self, metric: QosMetric) -> QosLevel {
        match metric {
            QosMetric::Bandwidth => self.bandwidth,
            QosMetric::DelaySensitivity => self.delay_sensitivity,
            QosMetric::Reliability => self.reliability,
            QosMetric::Scale => self.scale,
            QosMetric::Compute => self.compute,
            QosMetric::Storage => self.storage,
            QosMetric::Mobility => self.mobility,
        }
    }

    pub fn set(&mut self, metric: QosMetric, level: QosLevel) {
        let slot = match metric {
            QosMetric::Bandwidth => &mut self.bandwidth,
            QosMetric::DelaySensitivity => &mut self.delay_sensitivity,
            QosMetric::Reliability => &mut self.reliability,
            QosMetric::Scale => &mut self.scale,
            QosMetric::Compute => &mut self.compute,
            QosMetric::Storage => &mut self.storage,
            QosMetric::Mobility => &mut self.mobility,
        };
        *slot = level;
    }

    /// Componentwise maximum.
    pub fn join(self, other: QosVector) -> QosVector {
        let a = self.to_array();
        let b = other.to_array();
        let mut out = [QosLevel::Low; 7];
        for i in 0..7 {
            out[i] = a[i].max(b[i]);
        }
        QosVector::from_array(out)
    }

    /// True when every component of `self` is at most the matching component of `other`.
    pub fn dominated_by(&self, other: &QosVector) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .all(|(a, b)| a <= b)
    }

    /// Base-3 code of the vector, column order most significant first. Injective over all 3^7 vectors.
    pub fn code(&self) -> u16 {
        self.to_array()
            .iter()
            .fold(0u16, |acc, level| acc * 3 + level.index() as u16)
    }
}

impl Default for QosVector {
    fn default() -> Self {
        QosVector::uniform(QosLevel::Low)
    }
}

impl fmt::Display for QosVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels = self.to_array();
        write!(f, "(")?;
        for (i, level) in levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{level}")?;
        }
        write!(f, ")")
    }
}
