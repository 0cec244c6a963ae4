//! Tense as indefinite reference.
//!
//! Every main-verb tense mints a fresh event point and orders it against the
//! discourse reference time. Simple tenses take the speech time as their
//! reference time. The auxiliary of a past perfect is anaphoric: its
//! reference time is the most recent salient event time, and the event is
//! placed before it.

use thiserror::Error;

use crate::discourse::{Clause, TenseForm};
use crate::network::{PointRelation, TimePoint};

/// Id of the event point minted for a clause.
pub fn event_point_id(clause_id: &str) -> String {
    format!("t_{clause_id}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenseResolutionContext {
    pub speech_time: TimePoint,
    /// Event points of earlier clauses, most recent last.
    pub salient_event_times: Vec<TimePoint>,
}

impl Default for TenseResolutionContext {
    fn default() -> Self {
        Self::new()
    }
}

impl TenseResolutionContext {
    pub fn new() -> Self {
        TenseResolutionContext { speech_time: TimePoint::speech(), salient_event_times: Vec::new() }
    }

    /// Makes `event` available as an antecedent for later auxiliaries.
    pub fn push(&mut self, event: TimePoint) {
        self.salient_event_times.push(event);
    }

    fn contains(&self, id: &str) -> bool {
        self.speech_time.id == id || self.salient_event_times.iter().any(|p| p.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenseResult {
    pub event_time: TimePoint,
    pub reference_time: TimePoint,
    pub new_constraints: Vec<(TimePoint, TimePoint, PointRelation)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TenseError {
    /// A complex tense with no earlier time to pick up.
    #[error("clause `{clause}`: the past perfect needs a salient earlier time, but none has been introduced")]
    UnresolvedReferenceTime { clause: String },
    #[error("clause `{clause}`: event point `{point}` already exists in the context")]
    PointCollision { clause: String, point: String },
}

pub fn resolve_tense(clause: &Clause, ctx: &TenseResolutionContext) -> Result<TenseResult, TenseError> {
    let event = TimePoint::event(event_point_id(&clause.id), clause.id.clone());
    if ctx.contains(&event.id) {
        return Err(TenseError::PointCollision { clause: clause.id.clone(), point: event.id });
    }
    let speech = ctx.speech_time.clone();

    let (reference, constraints) = match clause.tense {
        TenseForm::SPast => (speech.clone(), vec![(event.clone(), speech, PointRelation::Precedes)]),
        TenseForm::SPres => (speech.clone(), vec![(event.clone(), speech, PointRelation::Equals)]),
        TenseForm::SFut => (speech.clone(), vec![(speech, event.clone(), PointRelation::Precedes)]),
        TenseForm::PPerf => {
            let reference = ctx
                .salient_event_times
                .last()
                .cloned()
                .ok_or_else(|| TenseError::UnresolvedReferenceTime { clause: clause.id.clone() })?;
            let constraints = vec![
                (event.clone(), reference.clone(), PointRelation::Precedes),
                (reference.clone(), speech, PointRelation::Precedes),
            ];
            (reference, constraints)
        }
    };

    Ok(TenseResult { event_time: event, reference_time: reference, new_constraints: constraints })
}
