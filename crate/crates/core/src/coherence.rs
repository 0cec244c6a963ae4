//! Coherence relations between adjacent clauses.
//!
//! Narration is the default reading of two adjacent clauses. It is withdrawn
//! by an overt cue: an explicit connective, a past-perfect second clause, or
//! a topic-setting question. Each relation contributes at most one ordering
//! constraint between the two event times.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::discourse::{CausalAxiom, Clause, ConnectiveForm, Discourse, TenseForm};
use crate::network::PointRelation;
use crate::tense::event_point_id;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationKind {
    Narration,
    Explanation,
    Parallel,
    CauseEffect,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] =
        [RelationKind::Narration, RelationKind::Explanation, RelationKind::Parallel, RelationKind::CauseEffect];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Narration => "NARRATION",
            RelationKind::Explanation => "EXPLANATION",
            RelationKind::Parallel => "PARALLEL",
            RelationKind::CauseEffect => "CAUSE_EFFECT",
        }
    }

    /// The relation an explicit connective signals.
    pub fn cued_by(conn: ConnectiveForm) -> Self {
        match conn {
            ConnectiveForm::Because => RelationKind::Explanation,
            ConnectiveForm::AndSo => RelationKind::CauseEffect,
            ConnectiveForm::AndAlso => RelationKind::Parallel,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoherenceRelation {
    pub kind: RelationKind,
    /// Clause id of the earlier clause (A).
    pub first: String,
    /// Clause id of the later clause (B).
    pub second: String,
}

impl CoherenceRelation {
    pub fn new(kind: RelationKind, first: impl Into<String>, second: impl Into<String>) -> Self {
        CoherenceRelation { kind, first: first.into(), second: second.into() }
    }
}

impl fmt::Display for CoherenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind, self.first, self.second)
    }
}

/// Overt signals bearing on the relation between a clause and its
/// predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CueSet {
    pub connective: Option<ConnectiveForm>,
    /// The second clause is in the past perfect.
    pub tense_cue: bool,
    /// The discourse answers a topic-setting question.
    pub parallel_context: bool,
}

impl CueSet {
    pub fn for_clause(discourse: &Discourse, second: &Clause) -> Self {
        CueSet {
            connective: second.connective,
            tense_cue: second.tense == TenseForm::PPerf,
            parallel_context: discourse.context_question().is_some(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.connective.is_none() && !self.tense_cue && !self.parallel_context
    }
}

impl fmt::Display for CueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conn = self.connective.map(|c| c.as_str()).unwrap_or("none");
        write!(f, "connective={conn} tense_cue={} parallel_context={}", self.tense_cue, self.parallel_context)
    }
}

/// The ordering a relation imposes, as `(before, after, Precedes)` over event
/// point ids. Parallel imposes none.
pub fn relation_constraint(rel: &CoherenceRelation) -> Option<(String, String, PointRelation)> {
    let a = event_point_id(&rel.first);
    let b = event_point_id(&rel.second);
    match rel.kind {
        RelationKind::Narration | RelationKind::CauseEffect => Some((a, b, PointRelation::Precedes)),
        RelationKind::Explanation => Some((b, a, PointRelation::Precedes)),
        RelationKind::Parallel => None,
    }
}

fn causes(axioms: &[CausalAxiom], cause: &str, effect: &str) -> bool {
    axioms.iter().any(|ax| ax.cause == cause && ax.effect == effect)
}

fn supported(kind: RelationKind, a: &Clause, b: &Clause, cues: &CueSet, axioms: &[CausalAxiom]) -> bool {
    match kind {
        RelationKind::Narration => true,
        RelationKind::Explanation => causes(axioms, &b.verb, &a.verb),
        RelationKind::CauseEffect => causes(axioms, &a.verb, &b.verb),
        RelationKind::Parallel => cues.parallel_context || cues.connective == Some(ConnectiveForm::AndAlso),
    }
}

/// Whether world knowledge and context license `rel` without an explicit
/// connective. Returns false if either clause is missing from `discourse`.
pub fn semantic_support(rel: &CoherenceRelation, discourse: &Discourse, axioms: &[CausalAxiom]) -> bool {
    let (Some(a), Some(b)) = (discourse.clause(&rel.first), discourse.clause(&rel.second)) else {
        return false;
    };
    supported(rel.kind, a, b, &CueSet::for_clause(discourse, b), axioms)
}

/// Candidate relations for an adjacent pair, best first.
///
/// A connective names its relation outright and is not second-guessed. A
/// past-perfect second clause rules out Narration and leaves Explanation and
/// Parallel, each only if licensed. A topic question selects Parallel.
/// Otherwise Narration is assumed.
pub fn candidate_relations(pair: (&Clause, &Clause), cues: &CueSet, axioms: &[CausalAxiom]) -> Vec<CoherenceRelation> {
    let (a, b) = pair;
    let make = |kind| CoherenceRelation::new(kind, a.id.clone(), b.id.clone());

    if let Some(conn) = cues.connective {
        return vec![make(RelationKind::cued_by(conn))];
    }
    if cues.tense_cue {
        return [RelationKind::Explanation, RelationKind::Parallel]
            .into_iter()
            .filter(|&k| supported(k, a, b, cues, axioms))
            .map(make)
            .collect();
    }
    if cues.parallel_context {
        return vec![make(RelationKind::Parallel)];
    }
    vec![make(RelationKind::Narration)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discourse::{parse_axioms, parse_discourse, parse_lexicon, Lexicon};

    fn lex() -> Lexicon {
        parse_lexicon(
            "verb slip class=achievement\nverb spill class=accomplishment\nverb pour class=accomplishment\nverb enter class=achievement",
        )
        .unwrap()
    }

    fn disc(text: &str) -> Discourse {
        parse_discourse(text, &lex()).unwrap()
    }

    fn candidates(d: &Discourse, axioms: &[CausalAxiom]) -> Vec<RelationKind> {
        let (a, b) = d.adjacent_pairs().next().unwrap();
        candidate_relations((a, b), &CueSet::for_clause(d, b), axioms).into_iter().map(|r| r.kind).collect()
    }

    #[test]
    fn constraints_per_relation() {
        let t = |k| relation_constraint(&CoherenceRelation::new(k, "c1", "c2"));
        let p = PointRelation::Precedes;
        assert_eq!(t(RelationKind::Narration), Some(("t_c1".into(), "t_c2".into(), p)));
        assert_eq!(t(RelationKind::Explanation), Some(("t_c2".into(), "t_c1".into(), p)));
        assert_eq!(t(RelationKind::CauseEffect), Some(("t_c1".into(), "t_c2".into(), p)));
        assert_eq!(t(RelationKind::Parallel), None);
    }

    #[test]
    fn support() {
        let spill = parse_axioms("cause spill slip").unwrap();
        let d = disc("clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 subj=he verb=spill tense=SPAST");
        let rel = |k| CoherenceRelation::new(k, "c1", "c2");
        assert!(semantic_support(&rel(RelationKind::Explanation), &d, &spill));
        assert!(!semantic_support(&rel(RelationKind::CauseEffect), &d, &spill));
        assert!(semantic_support(&rel(RelationKind::Narration), &d, &[]));
        assert!(!semantic_support(&rel(RelationKind::Parallel), &d, &spill));
        assert!(!semantic_support(&CoherenceRelation::new(RelationKind::Narration, "c1", "nope"), &d, &spill));

        let coffee = disc("clause id=c1 subj=Max verb=pour tense=SPAST\nclause id=c2 subj=he verb=enter tense=PPERF");
        assert!(!semantic_support(&rel(RelationKind::Explanation), &coffee, &[]));

        let q = disc("@context question=\"q\"\nclause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 subj=he verb=spill tense=SPAST");
        assert!(semantic_support(&rel(RelationKind::Parallel), &q, &[]));
        let also = disc("clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 conn=and_also subj=he verb=spill tense=SPAST");
        assert!(semantic_support(&rel(RelationKind::Parallel), &also, &[]));
    }

    #[test]
    fn default_is_narration() {
        let d = disc("clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 subj=he verb=spill tense=SPAST");
        assert_eq!(candidates(&d, &parse_axioms("cause spill slip").unwrap()), vec![RelationKind::Narration]);
    }

    #[test]
    fn past_perfect_cues_explanation() {
        let d = disc("clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 subj=he verb=spill tense=PPERF");
        assert_eq!(candidates(&d, &parse_axioms("cause spill slip").unwrap()), vec![RelationKind::Explanation]);
        assert!(candidates(&d, &[]).is_empty());
    }

    #[test]
    fn past_perfect_with_question_keeps_parallel() {
        let d = disc("@context question=\"q\"\nclause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 subj=he verb=spill tense=PPERF");
        let ax = parse_axioms("cause spill slip").unwrap();
        assert_eq!(candidates(&d, &ax), vec![RelationKind::Explanation, RelationKind::Parallel]);
        assert_eq!(candidates(&d, &[]), vec![RelationKind::Parallel]);
    }

    #[test]
    fn because_cues_explanation() {
        let d = disc("clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 conn=because subj=he verb=spill tense=SPAST");
        assert_eq!(candidates(&d, &[]), vec![RelationKind::Explanation]);
    }

    #[test]
    fn each_connective_names_one_relation() {
        for (conn, kind) in [
            ("because", RelationKind::Explanation),
            ("and_so", RelationKind::CauseEffect),
            ("and_also", RelationKind::Parallel),
        ] {
            for tense in ["SPAST", "PPERF"] {
                let d = disc(&format!(
                    "@context question=\"q\"\nclause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 conn={conn} subj=he verb=spill tense={tense}"
                ));
                assert_eq!(candidates(&d, &[]), vec![kind]);
            }
        }
    }

    #[test]
    fn kind_serialises_upper_snake() {
        assert_eq!(serde_json::to_string(&RelationKind::CauseEffect).unwrap(), "\"CAUSE_EFFECT\"");
        for k in RelationKind::ALL {
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
    }
}
