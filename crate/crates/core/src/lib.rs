//! Temporal interpretation of short discourses.
//!
//! A discourse is a sequence of annotated clauses. Each main-verb tense
//! introduces a new event time ordered against a reference time, which is the
//! speech time for simple tenses and an earlier event time for the past
//! perfect. Coherence relations between adjacent clauses (Narration,
//! Explanation, Parallel, Cause-Effect) then refine the ordering. A
//! discourse is felicitous when every adjacent pair receives a relation and
//! the resulting point-algebra network stays consistent.

pub mod batch;
pub mod coherence;
pub mod corpus;
pub mod discourse;
pub mod interpret;
pub mod network;
pub mod tense;

pub use coherence::{candidate_relations, relation_constraint, semantic_support, CoherenceRelation, CueSet, RelationKind};
pub use discourse::{
    check_axioms, parse_axioms, parse_discourse, parse_lexicon, AspectClass, CausalAxiom, Clause, ConnectiveForm,
    Discourse, Lexicon, ParseError, ParseErrorKind, TenseForm,
};
pub use interpret::{interpret, tense_stage, Diagnostic, DiagnosticCode, InterpretOptions, Interpretation, OrderFact};
pub use network::{NetworkError, PointKind, PointRelation, TemporalNetwork, TimePoint};
pub use tense::{resolve_tense, TenseError, TenseResolutionContext, TenseResult};
