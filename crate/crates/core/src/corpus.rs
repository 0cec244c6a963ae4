//! Golden-corpus regression runner.
//!
//! A corpus directory holds discourse files `<name>.disc`, each paired with
//! an expectation file `<name>.expect.json`. The expectation has the shape
//! of the interpreter's JSON output. `felicitous` is required; `relations`,
//! `event_order` and `diagnostics` are compared when present. Diagnostic
//! messages are ignored; codes and (when given) clause lists must match.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::batch;
use crate::coherence::CoherenceRelation;
use crate::discourse::{parse_discourse, CausalAxiom, Lexicon};
use crate::interpret::{interpret, DiagnosticCode, InterpretOptions, Interpretation, OrderFact};

pub const DISCOURSE_EXT: &str = "disc";
pub const EXPECTATION_SUFFIX: &str = ".expect.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}: missing expectation file")]
    MissingExpectation(PathBuf),
    #[error("{path}: malformed expectation: {message}")]
    MalformedExpectation { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedDiagnostic {
    pub code: DiagnosticCode,
    #[serde(default)]
    pub clauses: Option<Vec<String>>,
    #[serde(default)]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub felicitous: bool,
    #[serde(default)]
    pub relations: Option<Vec<CoherenceRelation>>,
    #[serde(default)]
    pub event_order: Option<Vec<OrderFact>>,
    #[serde(default)]
    pub diagnostics: Option<Vec<ExpectedDiagnostic>>,
}

impl Expectation {
    /// Human-readable mismatches; empty when `actual` meets the expectation.
    pub fn check(&self, actual: &Interpretation) -> Vec<String> {
        let mut out = Vec::new();
        if self.felicitous != actual.felicitous {
            out.push(format!("felicitous: expected {}, got {}", self.felicitous, actual.felicitous));
        }
        if let Some(rels) = &self.relations {
            if rels != &actual.relations {
                out.push(format!("relations: expected [{}], got [{}]", join(rels), join(&actual.relations)));
            }
        }
        if let Some(order) = &self.event_order {
            if order != &actual.event_order {
                let show = |v: &[OrderFact]| v.iter().map(|o| format!("{}<{}", o.before, o.after)).collect::<Vec<_>>().join(", ");
                out.push(format!("event_order: expected [{}], got [{}]", show(order), show(&actual.event_order)));
            }
        }
        if let Some(diags) = &self.diagnostics {
            let codes_match = diags.len() == actual.diagnostics.len()
                && diags.iter().zip(&actual.diagnostics).all(|(e, a)| {
                    e.code == a.code && e.clauses.as_ref().is_none_or(|c| c == &a.clause_ids)
                });
            if !codes_match {
                let show_e: Vec<String> = diags.iter().map(|d| d.code.to_string()).collect();
                let show_a: Vec<String> = actual.diagnostics.iter().map(|d| format!("{}[{}]", d.code, d.clause_ids.join(","))).collect();
                out.push(format!("diagnostics: expected [{}], got [{}]", show_e.join(", "), show_a.join(", ")));
            }
        }
        out
    }
}

fn join(rels: &[CoherenceRelation]) -> String {
    rels.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn parse_expectation(text: &str) -> Result<Expectation, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
    /// Interpreter JSON for the case, empty if the discourse did not parse.
    #[serde(skip)]
    pub output: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub cases: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            total: usize,
            passed: usize,
            failed: usize,
            cases: &'a [CaseResult],
        }
        let mut s = serde_json::to_string_pretty(&Summary {
            total: self.cases.len(),
            passed: self.passed(),
            failed: self.failed(),
            cases: &self.cases,
        })
        .expect("serialisable");
        s.push('\n');
        s
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for case in &self.cases {
            writeln!(f, "{} {}", if case.passed { "PASS" } else { "FAIL" }, case.name)?;
            for msg in &case.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        writeln!(f, "{}/{} passed", self.passed(), self.cases.len())
    }
}

struct Case {
    name: String,
    discourse_text: String,
    expectation: Expectation,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

fn load_cases(dir: &Path) -> Result<Vec<Case>, CorpusError> {
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|e| e == DISCOURSE_EXT) {
            paths.push(path);
        }
    }
    paths.sort();

    paths
        .into_iter()
        .map(|path| {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let expect_path = path.with_file_name(format!("{name}{EXPECTATION_SUFFIX}"));
            if !expect_path.is_file() {
                return Err(CorpusError::MissingExpectation(expect_path));
            }
            let expectation = parse_expectation(&read(&expect_path)?)
                .map_err(|e| CorpusError::MalformedExpectation { path: expect_path.clone(), message: e.to_string() })?;
            Ok(Case { name, discourse_text: read(&path)?, expectation })
        })
        .collect()
}

fn run_case(case: &Case, lexicon: &Lexicon, axioms: &[CausalAxiom]) -> CaseResult {
    match parse_discourse(&case.discourse_text, lexicon) {
        Ok(d) => {
            let interp = interpret(&d, axioms, InterpretOptions::default());
            let failures = case.expectation.check(&interp);
            CaseResult { name: case.name.clone(), passed: failures.is_empty(), failures, output: interp.to_json(false) }
        }
        Err(e) => CaseResult {
            name: case.name.clone(),
            passed: false,
            failures: vec![format!("parse error at {e}")],
            output: String::new(),
        },
    }
}

/// Runs every case in `dir`. Cases run concurrently when the `parallel`
/// feature is on; the report is always in filename order.
pub fn run_corpus(dir: &Path, lexicon: &Lexicon, axioms: &[CausalAxiom]) -> Result<CorpusReport, CorpusError> {
    let cases = load_cases(dir)?;
    let results = batch::map(&cases, |c| run_case(c, lexicon, axioms));
    Ok(CorpusReport { cases: results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discourse::{parse_axioms, parse_lexicon};

    fn lex() -> Lexicon {
        parse_lexicon("verb slip class=achievement\nverb spill class=accomplishment").unwrap()
    }

    fn write(dir: &Path, name: &str, text: &str) {
        fs::write(dir.join(name), text).unwrap();
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_corpus(dir.path(), &lex(), &[]).unwrap();
        assert!(report.cases.is_empty());
        assert!(report.all_passed());
    }

    #[test]
    fn missing_expectation() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.disc", "clause id=c1 subj=Max verb=slip tense=SPAST");
        assert!(matches!(run_corpus(dir.path(), &lex(), &[]), Err(CorpusError::MissingExpectation(_))));
    }

    #[test]
    fn malformed_expectation() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.disc", "clause id=c1 subj=Max verb=slip tense=SPAST");
        write(dir.path(), "a.expect.json", r#"{"felicitous": "yes"}"#);
        assert!(matches!(run_corpus(dir.path(), &lex(), &[]), Err(CorpusError::MalformedExpectation { .. })));
        write(dir.path(), "a.expect.json", r#"{"felicitous": true, "colour": 1}"#);
        assert!(matches!(run_corpus(dir.path(), &lex(), &[]), Err(CorpusError::MalformedExpectation { .. })));
    }

    #[test]
    fn mismatch_names_the_case() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "5c.disc", "clause id=c1 subj=Max verb=slip tense=SPAST\nclause id=c2 conn=because subj=he verb=spill tense=SPAST");
        write(
            dir.path(),
            "5c.expect.json",
            r#"{"felicitous": true, "relations": [{"kind": "NARRATION", "first": "c1", "second": "c2"}]}"#,
        );
        write(dir.path(), "ok.disc", "clause id=c1 subj=Max verb=slip tense=SPAST");
        write(dir.path(), "ok.expect.json", r#"{"felicitous": true, "relations": [], "diagnostics": []}"#);
        let report = run_corpus(dir.path(), &lex(), &parse_axioms("cause spill slip").unwrap()).unwrap();
        assert_eq!(report.cases.len(), 2);
        assert_eq!(report.failed(), 1);
        let bad = &report.cases[0];
        assert_eq!(bad.name, "5c");
        assert!(!bad.passed);
        assert!(bad.failures[0].contains("EXPLANATION(c1, c2)"), "{:?}", bad.failures);
        assert!(report.to_string().contains("FAIL 5c"));
        assert!(report.cases[1].passed);
    }

    #[test]
    fn parse_failure_is_a_case_failure() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "x.disc", "clause id=c1 subj=Max verb=jump tense=SPAST");
        write(dir.path(), "x.expect.json", r#"{"felicitous": true}"#);
        let report = run_corpus(dir.path(), &lex(), &[]).unwrap();
        assert!(!report.all_passed());
        assert!(report.cases[0].failures[0].contains("unknown verb"));
    }

    #[test]
    fn diagnostic_clauses_are_optional() {
        let e = parse_expectation(r#"{"felicitous": false, "diagnostics": [{"code": "UNRESOLVED_REFERENCE_TIME"}]}"#).unwrap();
        let d = parse_discourse("clause id=c1 subj=Max verb=spill tense=PPERF", &lex()).unwrap();
        let i = interpret(&d, &[], InterpretOptions::default());
        assert!(e.check(&i).is_empty());
        let e = parse_expectation(r#"{"felicitous": false, "diagnostics": [{"code": "UNRESOLVED_REFERENCE_TIME", "clauses": ["c9"]}]}"#).unwrap();
        assert_eq!(e.check(&i).len(), 1);
    }
}
