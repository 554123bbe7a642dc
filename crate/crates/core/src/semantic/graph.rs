use std::collections::{BTreeMap, BTreeSet};

use super::{Dictionary, SemanticError, SemanticEvent, Tick, Triple, Ttl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactTimes {
    pub inserted_at: Tick,
    /// `None` for persistent facts.
    pub expires_at: Option<Tick>,
}

/// Timestamped triple store holding the live semantic state of one or more streams.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    facts: BTreeMap<Triple, FactTimes>,
    stream_clock: BTreeMap<String, Tick>,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.facts.keys()
    }

    pub fn facts(&self) -> impl Iterator<Item = (&Triple, &FactTimes)> {
        self.facts.iter()
    }

    pub fn get(&self, triple: &Triple) -> Option<&FactTimes> {
        self.facts.get(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.facts.contains_key(triple)
    }

    /// Labels in subject or object position of a live triple.
    pub fn entities(&self) -> BTreeSet<&str> {
        self.facts
            .keys()
            .flat_map(|t| [t.subject.as_str(), t.object.as_str()])
            .collect()
    }

    /// Ingests one event at tick `now`, then sweeps facts expired at `now`.
    /// On error the graph is left untouched.
    pub fn ingest(
        &mut self,
        event: &SemanticEvent,
        dict: &Dictionary,
        now: Tick,
    ) -> Result<(), SemanticError> {
        for label in event.triple.labels() {
            if !dict.knows(label) {
                return Err(SemanticError::UnknownLabel(label.to_string()));
            }
        }
        if event.time > now {
            return Err(SemanticError::FutureEvent {
                time: event.time,
                now,
            });
        }
        if let Some(&last) = self.stream_clock.get(&event.stream_id) {
            if event.time < last {
                return Err(SemanticError::TimeRegression {
                    stream: event.stream_id.clone(),
                    time: event.time,
                    last,
                });
            }
        }
        if let Ttl::Ticks(0) = event.ttl {
            return Err(SemanticError::ZeroTtl);
        }

        self.stream_clock.insert(event.stream_id.clone(), event.time);
        let expires_at = match event.ttl {
            Ttl::Ticks(n) => Some(now + n),
            Ttl::Persistent => None,
        };
        self.insert_fact(
            event.triple.clone(),
            FactTimes {
                inserted_at: now,
                expires_at,
            },
        );
        self.sweep(now);
        Ok(())
    }

    /// Re-insertion keeps the earliest insertion time and the latest expiry, so
    /// the result does not depend on insertion order.
    fn insert_fact(&mut self, triple: Triple, times: FactTimes) {
        self.facts
            .entry(triple)
            .and_modify(|existing| {
                existing.inserted_at = existing.inserted_at.min(times.inserted_at);
                existing.expires_at = match (existing.expires_at, times.expires_at) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            })
            .or_insert(times);
    }

    /// Drops every fact with `expires_at <= now`; returns how many were removed.
    pub fn sweep(&mut self, now: Tick) -> usize {
        let before = self.facts.len();
        self.facts
            .retain(|_, times| times.expires_at.is_none_or(|exp| exp > now));
        before - self.facts.len()
    }

    /// Union of two graphs, as seen by an observer of both streams.
    pub fn merge(&mut self, other: &KnowledgeGraph) {
        for (triple, times) in &other.facts {
            self.insert_fact(triple.clone(), *times);
        }
        for (stream, &t) in &other.stream_clock {
            let slot = self.stream_clock.entry(stream.clone()).or_insert(t);
            *slot = (*slot).max(t);
        }
    }
}

/// Copy-on-update form of [`KnowledgeGraph::ingest`].
pub fn ingest_event(
    kg: &KnowledgeGraph,
    event: &SemanticEvent,
    dict: &Dictionary,
    now: Tick,
) -> Result<KnowledgeGraph, SemanticError> {
    let mut next = kg.clone();
    next.ingest(event, dict, now)?;
    Ok(next)
}

/// Builds the graph of a window of events, each ingested at its own time, swept at `now`.
pub fn encode_window(
    events: &[SemanticEvent],
    dict: &Dictionary,
    now: Tick,
) -> Result<KnowledgeGraph, SemanticError> {
    let mut kg = KnowledgeGraph::new();
    for (index, event) in events.iter().enumerate() {
        if event.time > now {
            return Err(SemanticError::InEvent {
                index,
                source: Box::new(SemanticError::FutureEvent {
                    time: event.time,
                    now,
                }),
            });
        }
        kg.ingest(event, dict, event.time)
            .map_err(|e| SemanticError::InEvent {
                index,
                source: Box::new(e),
            })?;
    }
    kg.sweep(now);
    Ok(kg)
}
