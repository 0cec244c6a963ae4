//! Point-algebra constraint network over event, reference and speech times.
//!
//! Labels are subsets of the three basic relations `{<, =, >}`. Asserting a
//! constraint intersects it into the stored label for that pair, and closure
//! runs path consistency to a fixpoint. For the relation set used here
//! (single basic relations plus "unconstrained") path consistency yields the
//! minimal network, so the closed labels are exactly the entailed relations.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub const SPEECH_POINT_ID: &str = "speech";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    Event,
    Reference,
    Speech,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimePoint {
    pub id: String,
    pub kind: PointKind,
    pub source_clause: Option<String>,
}

impl TimePoint {
    pub fn event(id: impl Into<String>, clause: impl Into<String>) -> Self {
        TimePoint { id: id.into(), kind: PointKind::Event, source_clause: Some(clause.into()) }
    }

    pub fn reference(id: impl Into<String>, clause: impl Into<String>) -> Self {
        TimePoint { id: id.into(), kind: PointKind::Reference, source_clause: Some(clause.into()) }
    }

    pub fn speech() -> Self {
        TimePoint { id: SPEECH_POINT_ID.to_string(), kind: PointKind::Speech, source_clause: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRelation {
    Precedes,
    Follows,
    Equals,
    Unconstrained,
}

impl PointRelation {
    pub const ALL: [PointRelation; 4] =
        [PointRelation::Precedes, PointRelation::Follows, PointRelation::Equals, PointRelation::Unconstrained];

    pub fn converse(self) -> Self {
        match self {
            PointRelation::Precedes => PointRelation::Follows,
            PointRelation::Follows => PointRelation::Precedes,
            r => r,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PointRelation::Precedes => "<",
            PointRelation::Follows => ">",
            PointRelation::Equals => "=",
            PointRelation::Unconstrained => "?",
        }
    }
}

impl fmt::Display for PointRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A set of basic point relations, as a 3-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RelSet(u8);

impl RelSet {
    const EMPTY: RelSet = RelSet(0);
    const LT: RelSet = RelSet(0b001);
    const EQ: RelSet = RelSet(0b010);
    const GT: RelSet = RelSet(0b100);
    const ALL: RelSet = RelSet(0b111);

    fn from_relation(r: PointRelation) -> Self {
        match r {
            PointRelation::Precedes => RelSet::LT,
            PointRelation::Follows => RelSet::GT,
            PointRelation::Equals => RelSet::EQ,
            PointRelation::Unconstrained => RelSet::ALL,
        }
    }

    /// The relation this label entails. Labels outside the four expressible
    /// relations (such as `<=`) entail nothing stronger than "unconstrained".
    fn to_relation(self) -> PointRelation {
        match self {
            RelSet::LT => PointRelation::Precedes,
            RelSet::GT => PointRelation::Follows,
            RelSet::EQ => PointRelation::Equals,
            _ => PointRelation::Unconstrained,
        }
    }

    fn is_empty(self) -> bool {
        self.0 == 0
    }

    fn contains(self, other: RelSet) -> bool {
        self.0 & other.0 == other.0
    }

    fn meet(self, other: RelSet) -> RelSet {
        RelSet(self.0 & other.0)
    }

    fn converse(self) -> RelSet {
        let lt = self.0 & 0b001;
        let eq = self.0 & 0b010;
        let gt = self.0 & 0b100;
        RelSet((lt << 2) | eq | (gt >> 2))
    }

    fn compose(self, other: RelSet) -> RelSet {
        // Basic composition table:
        //   < . < = <    < . = = <    < . > = all
        //   = . r = r
        //   > . > = >    > . = = >    > . < = all
        let mut out = 0u8;
        for a in [RelSet::LT, RelSet::EQ, RelSet::GT] {
            if !self.contains(a) {
                continue;
            }
            for b in [RelSet::LT, RelSet::EQ, RelSet::GT] {
                if !other.contains(b) {
                    continue;
                }
                out |= match (a, b) {
                    (RelSet::EQ, b) => b.0,
                    (a, RelSet::EQ) => a.0,
                    (a, b) if a == b => a.0,
                    _ => RelSet::ALL.0,
                };
            }
        }
        RelSet(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("unknown time point `{0}`")]
    UnknownPoint(String),
    #[error("time point `{0}` already exists")]
    DuplicatePoint(String),
    #[error("a network has exactly one speech point")]
    SecondSpeechPoint,
    #[error("time point `{0}` needs a source clause")]
    MissingSourceClause(String),
    #[error("the network is inconsistent")]
    Inconsistent,
}

/// A canonical stored fact: `before < after` or `left = right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub a: String,
    pub b: String,
    pub rel: PointRelation,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.rel, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalNetwork {
    points: BTreeMap<String, TimePoint>,
    // Keyed by (a, b) with a < b as strings; the label is the relation of a
    // to b. Missing pairs are unconstrained.
    labels: BTreeMap<(String, String), RelSet>,
    closed: bool,
}

impl Default for TemporalNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl TemporalNetwork {
    /// A network holding only the speech point.
    pub fn new() -> Self {
        let speech = TimePoint::speech();
        let mut points = BTreeMap::new();
        points.insert(speech.id.clone(), speech);
        TemporalNetwork { points, labels: BTreeMap::new(), closed: true }
    }

    pub fn speech(&self) -> &TimePoint {
        &self.points[SPEECH_POINT_ID]
    }

    pub fn points(&self) -> impl Iterator<Item = &TimePoint> {
        self.points.values()
    }

    pub fn point(&self, id: &str) -> Option<&TimePoint> {
        self.points.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.points.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn add_point(mut self, point: TimePoint) -> Result<Self, NetworkError> {
        if point.kind == PointKind::Speech {
            return Err(NetworkError::SecondSpeechPoint);
        }
        if point.source_clause.is_none() {
            return Err(NetworkError::MissingSourceClause(point.id));
        }
        if self.points.contains_key(&point.id) {
            return Err(NetworkError::DuplicatePoint(point.id));
        }
        self.points.insert(point.id.clone(), point);
        Ok(self)
    }

    fn check(&self, id: &str) -> Result<(), NetworkError> {
        if self.points.contains_key(id) {
            Ok(())
        } else {
            Err(NetworkError::UnknownPoint(id.to_string()))
        }
    }

    fn label(&self, a: &str, b: &str) -> RelSet {
        use std::cmp::Ordering::*;
        match a.cmp(b) {
            Equal => {
                // Reflexive pairs are always `=`, unless the network has
                // collapsed into contradiction.
                if self.labels.values().any(|l| l.is_empty()) {
                    RelSet::EMPTY
                } else {
                    RelSet::EQ
                }
            }
            Less => self.labels.get(&(a.to_string(), b.to_string())).copied().unwrap_or(RelSet::ALL),
            Greater => self.label(b, a).converse(),
        }
    }

    fn set_label(&mut self, a: &str, b: &str, label: RelSet) {
        let (key, label) = if a < b {
            ((a.to_string(), b.to_string()), label)
        } else {
            ((b.to_string(), a.to_string()), label.converse())
        };
        if label == RelSet::ALL {
            self.labels.remove(&key);
        } else {
            self.labels.insert(key, label);
        }
    }

    /// Intersects `rel` into the current constraint between `a` and `b`.
    /// A contradiction leaves the network inconsistent; it is not an error.
    pub fn assert_constraint(mut self, a: &str, b: &str, rel: PointRelation) -> Result<Self, NetworkError> {
        self.check(a)?;
        self.check(b)?;
        let wanted = RelSet::from_relation(rel);
        if a == b {
            if !wanted.contains(RelSet::EQ) {
                // a < a: force a contradiction on some stored pair.
                self.collapse();
            }
            return Ok(self);
        }
        let current = self.label(a, b);
        let next = current.meet(wanted);
        if next != current {
            self.set_label(a, b, next);
            self.closed = false;
        }
        Ok(self)
    }

    /// Marks the network as contradictory. Needs some pair to hold the empty
    /// label; with a single point the reflexive contradiction is kept on a
    /// self-keyed entry.
    fn collapse(&mut self) {
        let ids: Vec<String> = self.points.keys().cloned().collect();
        self.labels.clear();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                self.labels.insert((a.clone(), b.clone()), RelSet::EMPTY);
            }
        }
        if ids.len() < 2 {
            let id = ids.first().cloned().unwrap_or_default();
            self.labels.insert((id.clone(), id), RelSet::EMPTY);
        }
        self.closed = true;
    }

    /// Path-consistency closure. Idempotent, and independent of the order in
    /// which constraints were asserted.
    pub fn close(mut self) -> Self {
        if self.closed {
            return self;
        }
        let ids: Vec<String> = self.points.keys().cloned().collect();
        let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let n = ids.len();
        let mut m = vec![vec![RelSet::ALL; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = RelSet::EQ;
        }
        let mut contradiction = false;
        for ((a, b), &label) in &self.labels {
            if label.is_empty() {
                contradiction = true;
            }
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            m[i][j] = m[i][j].meet(label);
            m[j][i] = m[j][i].meet(label.converse());
        }

        if !contradiction {
            contradiction = !path_consistency(&mut m);
        }

        if contradiction {
            self.collapse();
            return self;
        }

        self.labels.clear();
        for i in 0..n {
            for j in i + 1..n {
                if m[i][j] != RelSet::ALL {
                    self.labels.insert((ids[i].clone(), ids[j].clone()), m[i][j]);
                }
            }
        }
        self.closed = true;
        self
    }

    /// True iff some total preorder over the points satisfies every stored
    /// constraint.
    pub fn is_consistent(&self) -> bool {
        if self.closed {
            !self.labels.values().any(|l| l.is_empty())
        } else {
            self.clone().close().is_consistent()
        }
    }

    /// The strongest relation between `a` and `b` entailed by the network.
    /// Closes a copy first if the network is not already closed.
    pub fn query(&self, a: &str, b: &str) -> Result<PointRelation, NetworkError> {
        self.check(a)?;
        self.check(b)?;
        if !self.closed {
            return self.clone().close().query(a, b);
        }
        if !self.is_consistent() {
            return Err(NetworkError::Inconsistent);
        }
        Ok(self.label(a, b).to_relation())
    }

    pub fn entails(&self, a: &str, b: &str, rel: PointRelation) -> bool {
        match self.query(a, b) {
            Ok(r) => rel == PointRelation::Unconstrained || r == rel,
            Err(_) => false,
        }
    }

    /// Stored facts in canonical form: `Follows` is reported as `Precedes`
    /// with the arguments swapped, `Equals` with the arguments sorted.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self
            .labels
            .iter()
            .filter_map(|((a, b), &label)| match label.to_relation() {
                PointRelation::Precedes => Some(Constraint { a: a.clone(), b: b.clone(), rel: PointRelation::Precedes }),
                PointRelation::Follows => Some(Constraint { a: b.clone(), b: a.clone(), rel: PointRelation::Precedes }),
                PointRelation::Equals => Some(Constraint { a: a.clone(), b: b.clone(), rel: PointRelation::Equals }),
                PointRelation::Unconstrained => None,
            })
            .collect();
        out.sort();
        out
    }
}

/// Runs path consistency to a fixpoint over a square label matrix. Returns
/// false if some label becomes empty.
fn path_consistency(m: &mut [Vec<RelSet>]) -> bool {
    let n = m.len();
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..n {
            for i in 0..n {
                if i == k || m[i][k] == RelSet::ALL {
                    continue;
                }
                for j in 0..n {
                    if j == k || j == i {
                        continue;
                    }
                    let refined = m[i][j].meet(m[i][k].compose(m[k][j]));
                    if refined != m[i][j] {
                        if refined.is_empty() {
                            return false;
                        }
                        m[i][j] = refined;
                        m[j][i] = refined.converse();
                        changed = true;
                    }
                }
            }
        }
    }
    true
}
