//! Semantic representation pipeline.
//!
//! Raw per-stream events are folded into a timestamped triple store, and a
//! rulebook of conjunctive graph patterns distills the live graph into the
//! set of computational tasks the stream currently implies.

mod dictionary;
mod extract;
mod graph;
mod task;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dictionary::{update_dictionary, Dictionary, ExtractionRule, Term, TripleTemplate};
pub use extract::{extract_tasks, incident_active, matching_rules};
pub use graph::{encode_window, ingest_event, FactTimes, KnowledgeGraph};
pub use task::TaskKind;

/// Simulation time in abstract ticks.
pub type Tick = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("label `{0}` is not in the dictionary vocabulary")]
    UnknownLabel(String),
    #[error("stream `{stream}` went back in time: {time} after {last}")]
    TimeRegression { stream: String, time: Tick, last: Tick },
    #[error("event at tick {time} ingested at earlier tick {now}")]
    FutureEvent { time: Tick, now: Tick },
    #[error("event {index}: {source}")]
    InEvent {
        index: usize,
        #[source]
        source: Box<SemanticError>,
    },
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error("rule `{0}` has an empty pattern")]
    EmptyPattern(String),
    #[error("malformed triple `{0}`: expected three whitespace-separated tokens")]
    MalformedTriple(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("ttl must be positive")]
    ZeroTtl,
}

/// A ground fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl Triple {
    pub fn new(subject: &str, predicate: &str, object: &str) -> Self {
        Self {
            subject: subject.to_string(),
            predicate: predicate.to_string(),
            object: object.to_string(),
        }
    }

    pub fn labels(&self) -> [&str; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

impl FromStr for Triple {
    type Err = SemanticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let [subject, predicate, object] = tokens.as_slice() else {
            return Err(SemanticError::MalformedTriple(s.to_string()));
        };
        for label in [subject, predicate, object] {
            if !is_valid_label(label) {
                return Err(SemanticError::InvalidLabel(label.to_string()));
            }
        }
        Ok(Triple::new(subject, predicate, object))
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A label is a non-empty token that cannot be confused with a variable or wildcard.
pub fn is_valid_label(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('?') && s != "*" && !s.chars().any(char::is_whitespace)
}

/// How long a fact stays valid after ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ttl {
    Ticks(Tick),
    Persistent,
}

impl Serialize for Ttl {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Ttl::Ticks(n) => serializer.serialize_u64(*n),
            Ttl::Persistent => serializer.serialize_str("persistent"),
        }
    }
}

impl<'de> Deserialize<'de> for Ttl {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Ticks(u64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Ticks(0) => Err(serde::de::Error::custom("ttl must be positive")),
            Raw::Ticks(n) => Ok(Ttl::Ticks(n)),
            Raw::Word(w) if w == "persistent" => Ok(Ttl::Persistent),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "ttl must be a positive integer or \"persistent\", got `{w}`"
            ))),
        }
    }
}

/// One element of a raw data stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticEvent {
    #[serde(rename = "stream")]
    pub stream_id: String,
    pub time: Tick,
    pub triple: Triple,
    pub ttl: Ttl,
}

impl SemanticEvent {
    pub fn new(stream_id: &str, time: Tick, triple: Triple, ttl: Ttl) -> Self {
        Self {
            stream_id: stream_id.to_string(),
            time,
            triple,
            ttl,
        }
    }
}
