use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SemanticError;

/// The closed set of first-responder computational tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    ContinuousMonitoring,
    ObjectDetection,
    EventDetection,
    AlertNotification,
    TrackingObjectOfInterest,
    TeleHealth,
    RemoteControl,
    PushToTalk,
    SmartAmbulance,
}

impl TaskKind {
    pub const ALL: [TaskKind; 9] = [
        TaskKind::ContinuousMonitoring,
        TaskKind::ObjectDetection,
        TaskKind::EventDetection,
        TaskKind::AlertNotification,
        TaskKind::TrackingObjectOfInterest,
        TaskKind::TeleHealth,
        TaskKind::RemoteControl,
        TaskKind::PushToTalk,
        TaskKind::SmartAmbulance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::ContinuousMonitoring => "ContinuousMonitoring",
            TaskKind::ObjectDetection => "ObjectDetection",
            TaskKind::EventDetection => "EventDetection",
            TaskKind::AlertNotification => "AlertNotification",
            TaskKind::TrackingObjectOfInterest => "TrackingObjectOfInterest",
            TaskKind::TeleHealth => "TeleHealth",
            TaskKind::RemoteControl => "RemoteControl",
            TaskKind::PushToTalk => "PushToTalk",
            TaskKind::SmartAmbulance => "SmartAmbulance",
        }
    }

    /// Detection and monitoring style tasks whose compute is served at the edge.
    pub fn prefers_edge(self) -> bool {
        matches!(
            self,
            TaskKind::ContinuousMonitoring
                | TaskKind::ObjectDetection
                | TaskKind::EventDetection
                | TaskKind::TrackingObjectOfInterest
        )
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = SemanticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| SemanticError::UnknownTask(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_format_round_trip() {
        for task in TaskKind::ALL {
            assert_eq!(task.to_string().parse::<TaskKind>().unwrap(), task);
        }
        assert!("Telehealth".parse::<TaskKind>().is_err());
    }
}
