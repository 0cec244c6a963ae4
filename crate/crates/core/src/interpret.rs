//! Whole-discourse interpretation.
//!
//! Tense is resolved clause by clause first, which fixes every event time
//! relative to speech time and to anaphoric reference times. Coherence
//! relations are then chosen for each adjacent pair in cue-priority order,
//! backtracking to earlier pairs if a later pair cannot be made consistent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coherence::{candidate_relations, relation_constraint, CoherenceRelation, CueSet};
use crate::discourse::{CausalAxiom, Discourse};
use crate::network::{PointKind, PointRelation, TemporalNetwork};
use crate::tense::{event_point_id, resolve_tense, TenseError, TenseResolutionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    UnresolvedReferenceTime,
    NoCoherenceRelation,
    TemporalClash,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::UnresolvedReferenceTime => "UNRESOLVED_REFERENCE_TIME",
            DiagnosticCode::NoCoherenceRelation => "NO_COHERENCE_RELATION",
            DiagnosticCode::TemporalClash => "TEMPORAL_CLASH",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    #[serde(rename = "clauses")]
    pub clause_ids: Vec<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, clause_ids: Vec<String>) -> Self {
        let ids = clause_ids.join(", ");
        let message = match code {
            DiagnosticCode::UnresolvedReferenceTime => {
                format!("clause {ids}: the past perfect needs a salient earlier time, but none has been introduced")
            }
            DiagnosticCode::NoCoherenceRelation => {
                format!("clauses {ids}: no coherence relation is licensed by the available cues and causal knowledge")
            }
            DiagnosticCode::TemporalClash => {
                format!("clauses {ids}: the temporal constraints cannot all hold")
            }
        };
        Diagnostic { code, clause_ids, message }
    }
}

/// An entailed ordering between two event times, named by clause id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderFact {
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InterpretOptions {
    /// Also enumerate every consistent relation assignment.
    pub all: bool,
    /// Record the staged derivation.
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub felicitous: bool,
    /// One per adjacent pair; empty when infelicitous.
    pub relations: Vec<CoherenceRelation>,
    /// Closed. On infelicity this is the network reached before the
    /// blocking step.
    pub network: TemporalNetwork,
    /// Empty when infelicitous.
    pub event_order: Vec<OrderFact>,
    pub diagnostics: Vec<Diagnostic>,
    /// Every consistent assignment, in search order. Only filled with
    /// [`InterpretOptions::all`].
    pub alternatives: Vec<Vec<CoherenceRelation>>,
    pub trace: Vec<String>,
}

/// Result of running tense resolution alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenseStage {
    pub network: TemporalNetwork,
    pub trace: Vec<String>,
}

struct Tracer {
    on: bool,
    lines: Vec<String>,
}

impl Tracer {
    fn log(&mut self, line: impl FnOnce() -> String) {
        if self.on {
            self.lines.push(line());
        }
    }
}

fn tense_stage_inner(discourse: &Discourse, tracer: &mut Tracer) -> Result<TemporalNetwork, (TemporalNetwork, Diagnostic)> {
    let mut net = TemporalNetwork::new();
    let mut ctx = TenseResolutionContext::new();
    for clause in discourse.clauses() {
        let result = match resolve_tense(clause, &ctx) {
            Ok(r) => r,
            Err(TenseError::UnresolvedReferenceTime { clause }) => {
                tracer.log(|| format!("tense {clause}: no antecedent for the past perfect"));
                let diag = Diagnostic::new(DiagnosticCode::UnresolvedReferenceTime, vec![clause]);
                return Err((net.close(), diag));
            }
            Err(e @ TenseError::PointCollision { .. }) => {
                unreachable!("clause ids are unique within a discourse: {e}")
            }
        };
        tracer.log(|| format!("mint {} for {} ({}, {})", result.event_time.id, clause.id, clause.verb, clause.tense));
        net = net.add_point(result.event_time.clone()).expect("fresh event point");
        for (a, b, rel) in &result.new_constraints {
            tracer.log(|| format!("tense {}: {} {} {}", clause.id, a.id, rel, b.id));
            net = net.assert_constraint(&a.id, &b.id, *rel).expect("points are in the network");
        }
        net = net.close();
        if !net.is_consistent() {
            let mut ids = Vec::new();
            if let Some(src) = &result.reference_time.source_clause {
                ids.push(src.clone());
            }
            ids.push(clause.id.clone());
            tracer.log(|| format!("tense {}: clash", clause.id));
            return Err((net, Diagnostic::new(DiagnosticCode::TemporalClash, ids)));
        }
        ctx.push(result.event_time);
    }
    Ok(net)
}

/// Tense constraints only, closed, before any coherence relation is chosen.
pub fn tense_stage(discourse: &Discourse) -> Result<TenseStage, Diagnostic> {
    let mut tracer = Tracer { on: true, lines: Vec::new() };
    tense_stage_inner(discourse, &mut tracer)
        .map(|network| TenseStage { network, trace: tracer.lines })
        .map_err(|(_, d)| d)
}

fn apply_relation(net: &TemporalNetwork, rel: &CoherenceRelation) -> TemporalNetwork {
    match relation_constraint(rel) {
        Some((a, b, r)) => net.clone().assert_constraint(&a, &b, r).expect("event points exist").close(),
        None => net.clone(),
    }
}

struct Search<'a> {
    pairs: &'a [Vec<CoherenceRelation>],
    all: bool,
    chosen: Vec<CoherenceRelation>,
    first: Option<(Vec<CoherenceRelation>, TemporalNetwork)>,
    alternatives: Vec<Vec<CoherenceRelation>>,
    deepest_failure: Option<usize>,
    tracer: &'a mut Tracer,
}

impl Search<'_> {
    /// Returns true once the search may stop.
    fn run(&mut self, depth: usize, net: &TemporalNetwork) -> bool {
        if depth == self.pairs.len() {
            if self.first.is_none() {
                self.first = Some((self.chosen.clone(), net.clone()));
            }
            self.alternatives.push(self.chosen.clone());
            return !self.all;
        }
        for rel in &self.pairs[depth] {
            let next = apply_relation(net, rel);
            let consistent = next.is_consistent();
            self.tracer.log(|| {
                let c = relation_constraint(rel).map(|(a, b, r)| format!("{a} {r} {b}")).unwrap_or_else(|| "no constraint".into());
                format!("try {rel}: {c} -> {}", if consistent { "consistent" } else { "clash" })
            });
            if !consistent {
                continue;
            }
            self.chosen.push(rel.clone());
            let stop = self.run(depth + 1, &next);
            self.chosen.pop();
            if stop {
                return true;
            }
        }
        if self.first.is_none() {
            self.deepest_failure = Some(self.deepest_failure.map_or(depth, |d| d.max(depth)));
        }
        false
    }
}

/// Entailed precedence facts between event times, in clause order.
pub fn event_order(discourse: &Discourse, net: &TemporalNetwork) -> Vec<OrderFact> {
    let ids: Vec<(&str, String)> = discourse
        .clauses()
        .iter()
        .map(|c| (c.id.as_str(), event_point_id(&c.id)))
        .filter(|(_, p)| net.point(p).is_some_and(|p| p.kind == PointKind::Event))
        .collect();
    let mut out = Vec::new();
    for (ci, pi) in &ids {
        for (cj, pj) in &ids {
            if pi != pj && net.query(pi, pj) == Ok(PointRelation::Precedes) {
                out.push(OrderFact { before: ci.to_string(), after: cj.to_string() });
            }
        }
    }
    out
}

pub fn interpret(discourse: &Discourse, axioms: &[CausalAxiom], opts: InterpretOptions) -> Interpretation {
    let mut tracer = Tracer { on: opts.trace, lines: Vec::new() };

    let infelicitous = |network: TemporalNetwork, diag: Diagnostic, tracer: Tracer| Interpretation {
        felicitous: false,
        relations: Vec::new(),
        network,
        event_order: Vec::new(),
        diagnostics: vec![diag],
        alternatives: Vec::new(),
        trace: tracer.lines,
    };

    let tense_net = match tense_stage_inner(discourse, &mut tracer) {
        Ok(net) => net,
        Err((net, diag)) => return infelicitous(net, diag, tracer),
    };

    let mut pairs = Vec::new();
    for (a, b) in discourse.adjacent_pairs() {
        let cues = CueSet::for_clause(discourse, b);
        let candidates = candidate_relations((a, b), &cues, axioms);
        tracer.log(|| format!("cues {}, {}: {cues}", a.id, b.id));
        tracer.log(|| {
            let list: Vec<String> = candidates.iter().map(|r| r.kind.to_string()).collect();
            format!("candidates {}, {}: [{}]", a.id, b.id, list.join(", "))
        });
        if candidates.is_empty() {
            let diag = Diagnostic::new(DiagnosticCode::NoCoherenceRelation, vec![a.id.clone(), b.id.clone()]);
            return infelicitous(tense_net, diag, tracer);
        }
        pairs.push(candidates);
    }

    let mut search = Search {
        pairs: &pairs,
        all: opts.all,
        chosen: Vec::new(),
        first: None,
        alternatives: Vec::new(),
        deepest_failure: None,
        tracer: &mut tracer,
    };
    search.run(0, &tense_net);
    let Search { first, alternatives, deepest_failure, .. } = search;

    match first {
        Some((relations, network)) => {
            tracer.log(|| format!("selected [{}]", relations.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")));
            tracer.log(|| {
                let facts: Vec<String> = network.constraints().iter().map(|c| c.to_string()).collect();
                format!("closure: {}", facts.join(", "))
            });
            Interpretation {
                felicitous: true,
                event_order: event_order(discourse, &network),
                relations,
                network,
                diagnostics: Vec::new(),
                alternatives: if opts.all { alternatives } else { Vec::new() },
                trace: tracer.lines,
            }
        }
        None => {
            let depth = deepest_failure.unwrap_or(0);
            let blocking = &pairs[depth][0];
            let diag = Diagnostic::new(DiagnosticCode::TemporalClash, vec![blocking.first.clone(), blocking.second.clone()]);
            tracer.log(|| format!("no consistent assignment; blocked at {}, {}", blocking.first, blocking.second));
            infelicitous(tense_net, diag, tracer)
        }
    }
}

// ---------------------------------------------------------------------------
// Output

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpretationJson {
    pub felicitous: bool,
    pub relations: Vec<CoherenceRelation>,
    pub event_order: Vec<OrderFact>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternatives: Option<Vec<Vec<CoherenceRelation>>>,
}

impl Interpretation {
    pub fn to_json_value(&self, include_alternatives: bool) -> InterpretationJson {
        InterpretationJson {
            felicitous: self.felicitous,
            relations: self.relations.clone(),
            event_order: self.event_order.clone(),
            diagnostics: self.diagnostics.clone(),
            alternatives: include_alternatives.then(|| self.alternatives.clone()),
        }
    }

    /// Two-space indented JSON with a trailing newline.
    pub fn to_json(&self, include_alternatives: bool) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(include_alternatives)).expect("serialisable");
        s.push('\n');
        s
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.felicitous { "felicitous" } else { "infelicitous" })?;
        for r in &self.relations {
            writeln!(f, "  relation {r}")?;
        }
        for o in &self.event_order {
            writeln!(f, "  order {} < {}", o.before, o.after)?;
        }
        for d in &self.diagnostics {
            writeln!(f, "  {}: {}", d.code, d.message)?;
        }
        for (i, alt) in self.alternatives.iter().enumerate() {
            let list: Vec<String> = alt.iter().map(|r| r.to_string()).collect();
            writeln!(f, "  alternative {}: {}", i + 1, list.join(", "))?;
        }
        Ok(())
    }
}
