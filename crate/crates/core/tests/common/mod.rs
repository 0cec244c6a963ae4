//! Test-only oracles and generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use tense_coherence::{
    parse_lexicon, AspectClass, CausalAxiom, Clause, ConnectiveForm, Discourse, Lexicon, PointRelation,
    TemporalNetwork, TenseForm, TimePoint,
};

/// One asserted constraint, by point index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Asserted {
    pub a: usize,
    pub b: usize,
    pub rel: PointRelation,
}

#[derive(Debug, Clone)]
pub struct RandomNetwork {
    pub ids: Vec<String>,
    pub constraints: Vec<Asserted>,
}

impl RandomNetwork {
    pub fn generate(rng: &mut StdRng, max_points: usize, max_constraints: usize) -> Self {
        let n = rng.gen_range(1..=max_points);
        let mut ids = vec!["speech".to_string()];
        ids.extend((1..n).map(|i| format!("p{i}")));
        let m = rng.gen_range(0..=max_constraints);
        let constraints = (0..m)
            .map(|_| {
                let a = rng.gen_range(0..n);
                // Reflexive pairs only occasionally.
                let b = if n > 1 && rng.gen_bool(0.9) {
                    loop {
                        let b = rng.gen_range(0..n);
                        if b != a {
                            break b;
                        }
                    }
                } else {
                    a
                };
                let rel = *PointRelation::ALL.choose(rng).unwrap();
                Asserted { a, b, rel }
            })
            .collect();
        RandomNetwork { ids, constraints }
    }

    pub fn build(&self) -> TemporalNetwork {
        self.build_in_order(&(0..self.constraints.len()).collect::<Vec<_>>())
    }

    pub fn build_in_order(&self, order: &[usize]) -> TemporalNetwork {
        let mut net = TemporalNetwork::new();
        for id in &self.ids[1..] {
            net = net.add_point(TimePoint::event(id.clone(), id.clone())).unwrap();
        }
        for &i in order {
            let c = self.constraints[i];
            net = net.assert_constraint(&self.ids[c.a], &self.ids[c.b], c.rel).unwrap();
        }
        net
    }
}

/// Every total preorder on `n` points, as a rank per point. Ranks are
/// surjective onto `0..k` for some `k`, so each preorder appears once.
pub fn total_preorders(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut ranks = vec![0; n];
    fn rec(i: usize, n: usize, ranks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            let used: BTreeSet<usize> = ranks.iter().copied().collect();
            if used.len() == used.iter().max().map_or(0, |m| m + 1) {
                out.push(ranks.clone());
            }
            return;
        }
        for r in 0..n {
            ranks[i] = r;
            rec(i + 1, n, ranks, out);
        }
    }
    rec(0, n, &mut ranks, &mut out);
    out
}

fn holds(ranks: &[usize], c: &Asserted) -> bool {
    let (x, y) = (ranks[c.a], ranks[c.b]);
    match c.rel {
        PointRelation::Precedes => x < y,
        PointRelation::Follows => x > y,
        PointRelation::Equals => x == y,
        PointRelation::Unconstrained => true,
    }
}

/// Satisfying preorders of a random network.
pub fn models(net: &RandomNetwork, preorders: &[Vec<usize>]) -> Vec<Vec<usize>> {
    preorders.iter().filter(|r| net.constraints.iter().all(|c| holds(r, c))).cloned().collect()
}

/// Basic relations between points `a` and `b` across all models, as
/// (`<` seen, `=` seen, `>` seen).
pub fn observed(models: &[Vec<usize>], a: usize, b: usize) -> (bool, bool, bool) {
    let mut seen = (false, false, false);
    for r in models {
        match r[a].cmp(&r[b]) {
            std::cmp::Ordering::Less => seen.0 = true,
            std::cmp::Ordering::Equal => seen.1 = true,
            std::cmp::Ordering::Greater => seen.2 = true,
        }
    }
    seen
}

/// The relation true in every model, if it is one of the four expressible
/// relations; `None` for a disjunction such as `<=`.
pub fn entailed(models: &[Vec<usize>], a: usize, b: usize) -> Option<PointRelation> {
    match observed(models, a, b) {
        (true, false, false) => Some(PointRelation::Precedes),
        (false, true, false) => Some(PointRelation::Equals),
        (false, false, true) => Some(PointRelation::Follows),
        (true, true, true) => Some(PointRelation::Unconstrained),
        _ => None,
    }
}

/// Compares the network against the oracle. Returns a description of the
/// first disagreement.
pub fn check_against_oracle(net: &RandomNetwork, preorders: &[Vec<usize>]) -> Result<(), String> {
    let built = net.build();
    let ms = models(net, preorders);
    let consistent = !ms.is_empty();
    if built.is_consistent() != consistent {
        return Err(format!("is_consistent={} oracle={} for {net:?}", built.is_consistent(), consistent));
    }
    if !consistent {
        return Ok(());
    }
    for a in 0..net.ids.len() {
        for b in 0..net.ids.len() {
            let expect = entailed(&ms, a, b).ok_or_else(|| format!("non-expressible entailment {a},{b} in {net:?}"))?;
            let got = built.query(&net.ids[a], &net.ids[b]).map_err(|e| e.to_string())?;
            if got != expect {
                return Err(format!("query({}, {}) = {got:?}, oracle {expect:?} for {net:?}", net.ids[a], net.ids[b]));
            }
        }
    }
    Ok(())
}

pub const VERBS: [&str; 4] = ["slip", "spill", "pour", "enter"];

pub fn lexicon() -> Lexicon {
    parse_lexicon(
        "verb slip class=achievement\nverb spill class=accomplishment\nverb pour class=accomplishment\nverb enter class=achievement",
    )
    .unwrap()
}

pub fn clause(id: String, verb: &str, tense: TenseForm, connective: Option<ConnectiveForm>) -> Clause {
    Clause {
        id,
        subject: "Max".into(),
        verb: verb.into(),
        object: None,
        tense,
        connective,
        aspect: lexicon().get(verb).unwrap_or(AspectClass::Accomplishment),
    }
}

/// Random discourse of 1..=max_clauses clauses over the test lexicon.
pub fn random_discourse(rng: &mut StdRng, max_clauses: usize) -> Discourse {
    let n = rng.gen_range(1..=max_clauses);
    let clauses = (0..n)
        .map(|i| {
            let verb = *VERBS.choose(rng).unwrap();
            let tense = *TenseForm::ALL.choose(rng).unwrap();
            let conn = if i > 0 && rng.gen_bool(0.4) { Some(*ConnectiveForm::ALL.choose(rng).unwrap()) } else { None };
            clause(format!("c{i}"), verb, tense, conn)
        })
        .collect();
    let question = rng.gen_bool(0.3).then(|| "What happened?".to_string());
    Discourse::new(clauses, question).unwrap()
}

pub fn random_axioms(rng: &mut StdRng) -> Vec<CausalAxiom> {
    let mut out = Vec::new();
    for cause in VERBS {
        for effect in VERBS {
            if rng.gen_bool(0.25) {
                out.push(CausalAxiom::new(cause, effect));
            }
        }
    }
    out
}
