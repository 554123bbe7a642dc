use std::collections::BTreeSet;

use super::{Dictionary, ExtractionRule, KnowledgeGraph, TaskKind, Term, Tick, Triple, TripleTemplate};

type Bindings<'a> = Vec<(&'a str, &'a str)>;

fn bound<'a>(bindings: &Bindings<'a>, var: &str) -> Option<&'a str> {
    bindings.iter().find(|(v, _)| *v == var).map(|(_, l)| *l)
}

/// Unifies one template with one triple, extending `bindings` on success.
fn unify<'a>(template: &'a TripleTemplate, triple: &'a Triple, bindings: &mut Bindings<'a>) -> bool {
    let mark = bindings.len();
    for (term, label) in template.terms().into_iter().zip(triple.labels()) {
        let ok = match term {
            Term::Wildcard => true,
            Term::Const(c) => c == label,
            Term::Var(v) => match bound(bindings, v) {
                Some(existing) => existing == label,
                None => {
                    bindings.push((v.as_str(), label));
                    true
                }
            },
        };
        if !ok {
            bindings.truncate(mark);
            return false;
        }
    }
    true
}

fn satisfiable<'a>(
    pattern: &'a [TripleTemplate],
    triples: &[&'a Triple],
    bindings: &mut Bindings<'a>,
) -> bool {
    let Some((first, rest)) = pattern.split_first() else {
        return true;
    };
    for triple in triples {
        let mark = bindings.len();
        if unify(first, triple, bindings) {
            if satisfiable(rest, triples, bindings) {
                return true;
            }
            bindings.truncate(mark);
        }
    }
    false
}

fn rule_matches(rule: &ExtractionRule, triples: &[&Triple]) -> bool {
    satisfiable(&rule.pattern, triples, &mut Vec::new())
}

fn live_triples(kg: &KnowledgeGraph, now: Tick) -> Vec<&Triple> {
    kg.facts()
        .filter(|(_, t)| t.expires_at.is_none_or(|e| e > now))
        .map(|(tr, _)| tr)
        .collect()
}

/// Rules with at least one satisfying assignment over the live triples.
pub fn matching_rules<'d>(kg: &KnowledgeGraph, dict: &'d Dictionary, now: Tick) -> Vec<&'d ExtractionRule> {
    let triples = live_triples(kg, now);
    dict.rules()
        .iter()
        .filter(|rule| rule_matches(rule, &triples))
        .collect()
}

/// Tasks implied by the live graph under the rulebook.
pub fn extract_tasks(kg: &KnowledgeGraph, dict: &Dictionary, now: Tick) -> BTreeSet<TaskKind> {
    matching_rules(kg, dict, now)
        .into_iter()
        .map(|r| r.task)
        .collect()
}

/// True while any critical rule matches.
pub fn incident_active(kg: &KnowledgeGraph, dict: &Dictionary, now: Tick) -> bool {
    let triples = live_triples(kg, now);
    dict.rules()
        .iter()
        .filter(|r| r.critical)
        .any(|r| rule_matches(r, &triples))
}
