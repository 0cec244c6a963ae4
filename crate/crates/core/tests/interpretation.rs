mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{random_axioms, random_discourse};
use tense_coherence::{
    candidate_relations, interpret, tense_stage, CueSet, Discourse, InterpretOptions, PointRelation, RelationKind,
};

fn arb_case() -> impl Strategy<Value = (Discourse, Vec<tense_coherence::CausalAxiom>)> {
    any::<u64>().prop_map(|seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        (random_discourse(&mut rng, 5), random_axioms(&mut rng))
    })
}

proptest! {
    #[test]
    fn connective_supremacy((d, axioms) in arb_case()) {
        for (a, b) in d.adjacent_pairs() {
            let cues = CueSet::for_clause(&d, b);
            if let Some(conn) = cues.connective {
                let cands = candidate_relations((a, b), &cues, &axioms);
                prop_assert_eq!(cands.len(), 1);
                prop_assert_eq!(cands[0].kind, RelationKind::cued_by(conn));
            }
        }
    }

    #[test]
    fn narration_only_without_cues((d, axioms) in arb_case()) {
        for (a, b) in d.adjacent_pairs() {
            let cues = CueSet::for_clause(&d, b);
            let has_narration = candidate_relations((a, b), &cues, &axioms).iter().any(|r| r.kind == RelationKind::Narration);
            prop_assert_eq!(has_narration, cues.is_empty());
        }
    }

    #[test]
    fn relations_fix_the_order((d, axioms) in arb_case()) {
        let i = interpret(&d, &axioms, InterpretOptions::default());
        if i.felicitous {
            prop_assert!(i.network.is_consistent());
            prop_assert_eq!(i.relations.len(), d.clauses().len() - 1);
            for r in &i.relations {
                let (ta, tb) = (format!("t_{}", r.first), format!("t_{}", r.second));
                match r.kind {
                    RelationKind::Narration | RelationKind::CauseEffect => {
                        prop_assert_eq!(i.network.query(&ta, &tb).unwrap(), PointRelation::Precedes)
                    }
                    RelationKind::Explanation => prop_assert_eq!(i.network.query(&tb, &ta).unwrap(), PointRelation::Precedes),
                    RelationKind::Parallel => {}
                }
            }
            for o in &i.event_order {
                prop_assert_eq!(i.network.query(&format!("t_{}", o.before), &format!("t_{}", o.after)).unwrap(), PointRelation::Precedes);
            }
        } else {
            prop_assert!(!i.diagnostics.is_empty());
            prop_assert!(i.relations.is_empty());
        }
    }

    #[test]
    fn interpretation_is_deterministic((d, axioms) in arb_case()) {
        let opts = InterpretOptions { all: true, trace: true };
        let x = interpret(&d, &axioms, opts);
        let y = interpret(&d, &axioms, opts);
        prop_assert_eq!(x.to_json(true), y.to_json(true));
        prop_assert_eq!(x, y);
    }

    #[test]
    fn leading_past_perfect_is_unresolved((d, axioms) in arb_case()) {
        let starts_pperf = d.clauses()[0].tense == tense_coherence::TenseForm::PPerf;
        let i = interpret(&d, &axioms, InterpretOptions::default());
        if starts_pperf {
            prop_assert_eq!(i.diagnostics[0].code, tense_coherence::DiagnosticCode::UnresolvedReferenceTime);
            prop_assert!(tense_stage(&d).is_err());
        }
    }
}
