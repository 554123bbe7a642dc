use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_valid_label, SemanticError, TaskKind};

/// One position of a triple template.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    /// Named variable; repeated names must bind to the same label.
    Var(String),
    Wildcard,
}

impl FromStr for Term {
    type Err = SemanticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "*" {
            Ok(Term::Wildcard)
        } else if let Some(name) = s.strip_prefix('?') {
            if name.is_empty() || !is_valid_label(name) {
                Err(SemanticError::InvalidLabel(s.to_string()))
            } else {
                Ok(Term::Var(name.to_string()))
            }
        } else if is_valid_label(s) {
            Ok(Term::Const(s.to_string()))
        } else {
            Err(SemanticError::InvalidLabel(s.to_string()))
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => write!(f, "?{v}"),
            Term::Wildcard => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleTemplate {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl TripleTemplate {
    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    fn constants(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(|t| match t {
            Term::Const(c) => Some(c.as_str()),
            _ => None,
        })
    }
}

impl FromStr for TripleTemplate {
    type Err = SemanticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let [subject, predicate, object] = tokens.as_slice() else {
            return Err(SemanticError::MalformedTriple(s.to_string()));
        };
        Ok(Self {
            subject: subject.parse()?,
            predicate: predicate.parse()?,
            object: object.parse()?,
        })
    }
}

impl fmt::Display for TripleTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

impl Serialize for TripleTemplate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TripleTemplate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conjunctive pattern that emits `task` when it has a satisfying assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRule {
    pub id: String,
    pub pattern: Vec<TripleTemplate>,
    pub task: TaskKind,
    /// Matches of critical rules signal an ongoing incident.
    #[serde(default)]
    pub critical: bool,
}

impl ExtractionRule {
    pub fn new(id: &str, pattern: &[&str], task: TaskKind, critical: bool) -> Self {
        Self {
            id: id.to_string(),
            pattern: pattern
                .iter()
                .map(|p| p.parse().expect("well-formed template"))
                .collect(),
            task,
            critical,
        }
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.pattern.iter().flat_map(TripleTemplate::constants)
    }
}

/// Shared vocabulary plus the ordered rulebook.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dictionary {
    vocabulary: BTreeSet<String>,
    rules: Vec<ExtractionRule>,
}

impl Dictionary {
    pub fn new<I, S>(vocabulary: I, rules: Vec<ExtractionRule>) -> Result<Self, SemanticError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = BTreeSet::new();
        for label in vocabulary {
            let label = label.into();
            if !is_valid_label(&label) {
                return Err(SemanticError::InvalidLabel(label));
            }
            vocab.insert(label);
        }
        let mut ids = HashSet::new();
        for rule in &rules {
            if !ids.insert(rule.id.as_str()) {
                return Err(SemanticError::DuplicateRuleId(rule.id.clone()));
            }
            if rule.pattern.is_empty() {
                return Err(SemanticError::EmptyPattern(rule.id.clone()));
            }
            if let Some(label) = rule.constants().find(|c| !vocab.contains(*c)) {
                return Err(SemanticError::UnknownLabel(label.to_string()));
            }
        }
        Ok(Self {
            vocabulary: vocab,
            rules,
        })
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn rules(&self) -> &[ExtractionRule] {
        &self.rules
    }

    pub fn knows(&self, label: &str) -> bool {
        self.vocabulary.contains(label)
    }

    /// Default first-responder rulebook and vocabulary.
    pub fn first_responder() -> Self {
        use TaskKind::*;
        let rules = vec![
            ExtractionRule::new("r1", &["?c observes ?x"], ContinuousMonitoring, false),
            ExtractionRule::new("r2", &["?a hits ?b"], EventDetection, true),
            ExtractionRule::new(
                "r3",
                &["?a hits ?b", "?p injured_in ?e"],
                AlertNotification,
                true,
            ),
            ExtractionRule::new("r4", &["?p injured_in ?e"], TeleHealth, false),
            ExtractionRule::new("r5", &["?v catches fire"], AlertNotification, true),
            ExtractionRule::new("r6", &["?f extinguishes fire"], RemoteControl, false),
            ExtractionRule::new("r7", &["?u tracks ?s"], TrackingObjectOfInterest, false),
            ExtractionRule::new("r8", &["?u speaks_on ptt_channel"], PushToTalk, false),
            ExtractionRule::new("r9", &["ambulance dispatched_to ?e"], SmartAmbulance, false),
            ExtractionRule::new("r10", &["?c detects ?o"], ObjectDetection, false),
        ];
        let vocabulary = [
            "accident",
            "ambulance",
            "bus",
            "camera",
            "car",
            "catches",
            "detects",
            "dispatched_to",
            "driver",
            "extinguishes",
            "fire",
            "firefighter",
            "hits",
            "injured_in",
            "monitors",
            "observes",
            "officer",
            "ptt_channel",
            "road",
            "speaks_on",
            "suspect",
            "tracks",
        ];
        Dictionary::new(vocabulary, rules).expect("built-in rulebook is consistent")
    }
}

/// Appends `rule`, extending the vocabulary with any new constants it uses.
pub fn update_dictionary(
    dict: &Dictionary,
    rule: ExtractionRule,
) -> Result<Dictionary, SemanticError> {
    if dict.rules.iter().any(|r| r.id == rule.id) {
        return Err(SemanticError::DuplicateRuleId(rule.id));
    }
    if rule.pattern.is_empty() {
        return Err(SemanticError::EmptyPattern(rule.id));
    }
    let mut next = dict.clone();
    for label in rule.constants() {
        next.vocabulary.insert(label.to_string());
    }
    next.rules.push(rule);
    Ok(next)
}
