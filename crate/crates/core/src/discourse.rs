//! Annotated discourse notation, verb lexicon and causal axioms.
//!
//! All three inputs are line oriented. Blank lines and lines whose first
//! non-blank character is `#` are ignored. Every other line either parses
//! or produces a [`ParseError`] carrying a 1-based line and column.
//!
//! ```text
//! @context question="What bad things happened to Max today?"
//! clause id=c1 subj=Max verb=slip tense=SPAST
//! clause id=c2 conn=because subj=he verb=spill obj="a bucket of water" tense=PPERF
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown verb lemma `{0}`")]
    UnknownVerb(String),
    #[error("duplicate clause id `{0}`")]
    DuplicateClauseId(String),
    #[error("connective on the first clause `{0}`")]
    ConnectiveOnFirstClause(String),
    #[error("duplicate lemma `{0}`")]
    DuplicateLemma(String),
    #[error("unknown aspect class `{0}` (expected accomplishment or achievement)")]
    UnknownAspectClass(String),
    #[error("discourse contains no clauses")]
    EmptyDiscourse,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }

    fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Self::new(line, column, ParseErrorKind::Syntax(msg.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TenseForm {
    /// Simple past.
    SPast,
    /// Simple present.
    SPres,
    /// Simple future.
    SFut,
    /// Past perfect: a tensed auxiliary plus a past main verb.
    PPerf,
}

impl TenseForm {
    pub const ALL: [TenseForm; 4] = [TenseForm::SPast, TenseForm::SPres, TenseForm::SFut, TenseForm::PPerf];

    pub fn as_str(self) -> &'static str {
        match self {
            TenseForm::SPast => "SPAST",
            TenseForm::SPres => "SPRES",
            TenseForm::SFut => "SFUT",
            TenseForm::PPerf => "PPERF",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, TenseForm::PPerf)
    }
}

impl fmt::Display for TenseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Explicit conjunction linking a clause to the one before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectiveForm {
    Because,
    AndSo,
    AndAlso,
}

impl ConnectiveForm {
    pub const ALL: [ConnectiveForm; 3] = [ConnectiveForm::Because, ConnectiveForm::AndSo, ConnectiveForm::AndAlso];

    pub fn as_str(self) -> &'static str {
        match self {
            ConnectiveForm::Because => "because",
            ConnectiveForm::AndSo => "and_so",
            ConnectiveForm::AndAlso => "and_also",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ConnectiveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AspectClass {
    Accomplishment,
    Achievement,
}

impl AspectClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AspectClass::Accomplishment => "accomplishment",
            AspectClass::Achievement => "achievement",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "accomplishment" => Some(AspectClass::Accomplishment),
            "achievement" => Some(AspectClass::Achievement),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: String,
    pub subject: String,
    pub verb: String,
    pub object: Option<String>,
    pub tense: TenseForm,
    /// Relation to the immediately preceding clause.
    pub connective: Option<ConnectiveForm>,
    /// Looked up from the lexicon when the clause is parsed.
    pub aspect: AspectClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discourse {
    clauses: Vec<Clause>,
    context_question: Option<String>,
}

impl Discourse {
    /// Builds a discourse, enforcing the same invariants the parser does
    /// (non-empty, unique ids, no connective on the first clause).
    pub fn new(clauses: Vec<Clause>, context_question: Option<String>) -> Result<Self, ParseErrorKind> {
        let first = clauses.first().ok_or(ParseErrorKind::EmptyDiscourse)?;
        if first.connective.is_some() {
            return Err(ParseErrorKind::ConnectiveOnFirstClause(first.id.clone()));
        }
        let mut seen = HashSet::new();
        for c in &clauses {
            if !seen.insert(c.id.as_str()) {
                return Err(ParseErrorKind::DuplicateClauseId(c.id.clone()));
            }
        }
        Ok(Discourse { clauses, context_question })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn context_question(&self) -> Option<&str> {
        self.context_question.as_deref()
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.clauses.iter().position(|c| c.id == id)
    }

    /// Adjacent clause pairs in utterance order.
    pub fn adjacent_pairs(&self) -> impl Iterator<Item = (&Clause, &Clause)> {
        self.clauses.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// Writes the canonical form: header first, then one clause per line with
/// attributes in a fixed order.
impl fmt::Display for Discourse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = &self.context_question {
            writeln!(f, "@context question={}", quote(q))?;
        }
        for c in &self.clauses {
            write!(f, "clause id={}", c.id)?;
            if let Some(conn) = c.connective {
                write!(f, " conn={conn}")?;
            }
            let subj = if is_ident(&c.subject) { c.subject.clone() } else { quote(&c.subject) };
            write!(f, " subj={subj} verb={}", c.verb)?;
            if let Some(obj) = &c.object {
                write!(f, " obj={}", quote(obj))?;
            }
            writeln!(f, " tense={}", c.tense)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, AspectClass>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and leaves the lexicon unchanged) if the lemma exists.
    pub fn insert(&mut self, lemma: impl Into<String>, class: AspectClass) -> bool {
        use std::collections::btree_map::Entry;
        match self.entries.entry(lemma.into()) {
            Entry::Occupied(_) => false,
            Entry::Vacant(v) => {
                v.insert(class);
                true
            }
        }
    }

    pub fn get(&self, lemma: &str) -> Option<AspectClass> {
        self.entries.get(lemma).copied()
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, AspectClass)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// World knowledge of the form "events of type `cause` can cause events of
/// type `effect`".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CausalAxiom {
    pub cause: String,
    pub effect: String,
}

impl CausalAxiom {
    pub fn new(cause: impl Into<String>, effect: impl Into<String>) -> Self {
        CausalAxiom { cause: cause.into(), effect: effect.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("axiom `cause {cause} {effect}` mentions lemma `{missing}` which is not in the lexicon")]
pub struct UnresolvedAxiom {
    pub cause: String,
    pub effect: String,
    pub missing: String,
}

/// Checks that both lemmas of every axiom resolve against the lexicon.
pub fn check_axioms(axioms: &[CausalAxiom], lexicon: &Lexicon) -> Result<(), UnresolvedAxiom> {
    for ax in axioms {
        for lemma in [&ax.cause, &ax.effect] {
            if !lexicon.contains(lemma) {
                return Err(UnresolvedAxiom {
                    cause: ax.cause.clone(),
                    effect: ax.effect.clone(),
                    missing: lemma.clone(),
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Line scanner

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Ident(String),
    Quoted(String),
}

impl Value {
    fn into_string(self) -> String {
        match self {
            Value::Ident(s) | Value::Quoted(s) => s,
        }
    }
}

#[derive(Debug)]
enum Token {
    Word(String),
    Attr { key: String, value: Value, value_col: usize },
}

/// Cursor over one line. Columns are counted in characters, 1-based.
struct Scanner<'a> {
    line_no: usize,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(line_no: usize, text: &'a str) -> Self {
        Scanner { line_no, chars: text.char_indices().peekable(), col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next().map(|(_, c)| c);
        if c.is_some() {
            self.col += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.bump();
        }
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line_no, col, msg)
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| is_ident_char(c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn quoted(&mut self) -> Result<String, ParseError> {
        let start = self.col;
        self.bump(); // opening quote
        let mut s = String::new();
        loop {
            let col = self.col;
            match self.bump() {
                None => return Err(self.err(start, "unterminated string")),
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(c) => return Err(self.err(col, format!("unknown escape `\\{c}`"))),
                    None => return Err(self.err(start, "unterminated string")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    /// Next whitespace-separated token with its starting column.
    fn token(&mut self) -> Result<Option<(usize, Token)>, ParseError> {
        self.skip_ws();
        let col = self.col;
        let Some(c) = self.peek() else { return Ok(None) };
        if c == '@' {
            self.bump();
            let word = self.ident();
            if word.is_empty() {
                return Err(self.err(col, "expected directive name after `@`"));
            }
            self.expect_boundary()?;
            return Ok(Some((col, Token::Word(format!("@{word}")))));
        }
        if !is_ident_char(c) {
            return Err(self.err(col, format!("unexpected character `{c}`")));
        }
        let word = self.ident();
        if self.peek() != Some('=') {
            self.expect_boundary()?;
            return Ok(Some((col, Token::Word(word))));
        }
        self.bump();
        let value_col = self.col;
        let value = match self.peek() {
            Some('"') => Value::Quoted(self.quoted()?),
            Some(c) if is_ident_char(c) => Value::Ident(self.ident()),
            Some(c) => return Err(self.err(self.col, format!("unexpected character `{c}` in value of `{word}`"))),
            None => return Err(self.err(self.col, format!("missing value for `{word}`"))),
        };
        self.expect_boundary()?;
        Ok(Some((col, Token::Attr { key: word, value, value_col })))
    }

    fn expect_boundary(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None | Some(' ') | Some('\t') => Ok(()),
            Some(c) => Err(self.err(self.col, format!("unexpected character `{c}`"))),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut out = Vec::new();
        while let Some(t) = self.token()? {
            out.push(t);
        }
        Ok(out)
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers. A trailing
/// `\r` is stripped so CRLF files parse.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Attribute bag for one line, rejecting duplicates and unknown keys.
struct Attrs {
    line: usize,
    head_col: usize,
    map: BTreeMap<String, (usize, Value)>,
}

impl Attrs {
    fn collect(
        line: usize,
        head_col: usize,
        tokens: impl Iterator<Item = (usize, Token)>,
        allowed: &[&str],
    ) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for (col, tok) in tokens {
            match tok {
                Token::Word(w) => return Err(ParseError::syntax(line, col, format!("expected key=value, found `{w}`"))),
                Token::Attr { key, value, value_col } => {
                    if !allowed.contains(&key.as_str()) {
                        return Err(ParseError::syntax(line, col, format!("unknown attribute `{key}`")));
                    }
                    if map.contains_key(&key) {
                        return Err(ParseError::syntax(line, col, format!("duplicate attribute `{key}`")));
                    }
                    map.insert(key, (value_col, value));
                }
            }
        }
        Ok(Attrs { line, head_col, map })
    }

    fn take(&mut self, key: &str) -> Option<(usize, Value)> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<(usize, Value), ParseError> {
        self.take(key)
            .ok_or_else(|| ParseError::syntax(self.line, self.head_col, format!("missing attribute `{key}`")))
    }

    fn require_ident(&mut self, key: &str) -> Result<(usize, String), ParseError> {
        match self.require(key)? {
            (col, Value::Ident(s)) => Ok((col, s)),
            (col, Value::Quoted(_)) => {
                Err(ParseError::syntax(self.line, col, format!("`{key}` must be an identifier, not a quoted string")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Entry points

pub fn parse_discourse(text: &str, lexicon: &Lexicon) -> Result<Discourse, ParseError> {
    const CLAUSE_KEYS: &[&str] = &["id", "conn", "subj", "verb", "obj", "tense"];

    let mut clauses: Vec<Clause> = Vec::new();
    let mut context_question = None;
    let mut ids = HashSet::new();
    let mut last_line = 0;

    for (line_no, line) in content_lines(text) {
        last_line = line_no;
        let mut tokens = Scanner::new(line_no, line).tokens()?.into_iter();
        let (head_col, head) = tokens.next().expect("content lines are non-blank");
        let Token::Word(head) = head else {
            return Err(ParseError::syntax(line_no, head_col, "expected `clause` or `@context`"));
        };
        match head.as_str() {
            "@context" => {
                if !clauses.is_empty() {
                    return Err(ParseError::syntax(line_no, head_col, "`@context` must precede all clauses"));
                }
                if context_question.is_some() {
                    return Err(ParseError::syntax(line_no, head_col, "duplicate `@context` header"));
                }
                let mut attrs = Attrs::collect(line_no, head_col, tokens, &["question"])?;
                let (col, q) = attrs.require("question")?;
                match q {
                    Value::Quoted(q) => context_question = Some(q),
                    Value::Ident(_) => return Err(ParseError::syntax(line_no, col, "`question` must be quoted")),
                }
            }
            "clause" => {
                let mut attrs = Attrs::collect(line_no, head_col, tokens, CLAUSE_KEYS)?;
                let (id_col, id) = attrs.require_ident("id")?;
                let connective = match attrs.take("conn") {
                    None => None,
                    Some((col, Value::Ident(s))) => Some(ConnectiveForm::parse(&s).ok_or_else(|| {
                        ParseError::syntax(line_no, col, format!("unknown connective `{s}` (expected because, and_so or and_also)"))
                    })?),
                    Some((col, Value::Quoted(_))) => {
                        return Err(ParseError::syntax(line_no, col, "`conn` must be an identifier"));
                    }
                };
                let (_, subject) = attrs.require("subj")?;
                let (verb_col, verb) = attrs.require_ident("verb")?;
                let object = attrs.take("obj").map(|(_, v)| v.into_string());
                let (tense_col, tense) = attrs.require_ident("tense")?;
                let tense = TenseForm::parse(&tense).ok_or_else(|| {
                    ParseError::syntax(line_no, tense_col, format!("unknown tense `{tense}` (expected SPAST, SPRES, SFUT or PPERF)"))
                })?;

                let aspect = lexicon
                    .get(&verb)
                    .ok_or_else(|| ParseError::new(line_no, verb_col, ParseErrorKind::UnknownVerb(verb.clone())))?;
                if !ids.insert(id.clone()) {
                    return Err(ParseError::new(line_no, id_col, ParseErrorKind::DuplicateClauseId(id)));
                }
                if clauses.is_empty() && connective.is_some() {
                    return Err(ParseError::new(line_no, head_col, ParseErrorKind::ConnectiveOnFirstClause(id)));
                }
                clauses.push(Clause {
                    id,
                    subject: subject.into_string(),
                    verb,
                    object,
                    tense,
                    connective,
                    aspect,
                });
            }
            other => {
                return Err(ParseError::syntax(line_no, head_col, format!("expected `clause` or `@context`, found `{other}`")));
            }
        }
    }

    if clauses.is_empty() {
        return Err(ParseError::new(last_line.max(1), 1, ParseErrorKind::EmptyDiscourse));
    }
    Ok(Discourse { clauses, context_question })
}

pub fn parse_lexicon(text: &str) -> Result<Lexicon, ParseError> {
    let mut lexicon = Lexicon::new();
    for (line_no, line) in content_lines(text) {
        let mut tokens = Scanner::new(line_no, line).tokens()?.into_iter();
        let (head_col, head) = tokens.next().expect("content lines are non-blank");
        if !matches!(&head, Token::Word(w) if w == "verb") {
            return Err(ParseError::syntax(line_no, head_col, "expected `verb <lemma> class=<class>`"));
        }
        let (lemma_col, lemma) = match tokens.next() {
            Some((col, Token::Word(w))) if is_ident(&w) => (col, w),
            Some((col, _)) => return Err(ParseError::syntax(line_no, col, "expected a verb lemma")),
            None => return Err(ParseError::syntax(line_no, head_col, "missing verb lemma")),
        };
        let mut attrs = Attrs::collect(line_no, head_col, tokens, &["class"])?;
        let (class_col, class) = attrs.require_ident("class")?;
        let class = AspectClass::parse(&class)
            .ok_or_else(|| ParseError::new(line_no, class_col, ParseErrorKind::UnknownAspectClass(class)))?;
        if !lexicon.insert(lemma.clone(), class) {
            return Err(ParseError::new(line_no, lemma_col, ParseErrorKind::DuplicateLemma(lemma)));
        }
    }
    Ok(lexicon)
}

/// Axioms in file order with repeats dropped.
pub fn parse_axioms(text: &str) -> Result<Vec<CausalAxiom>, ParseError> {
    let mut out: Vec<CausalAxiom> = Vec::new();
    for (line_no, line) in content_lines(text) {
        let tokens = Scanner::new(line_no, line).tokens()?;
        let words: Vec<(usize, &str)> = tokens
            .iter()
            .map(|(col, t)| match t {
                Token::Word(w) if !w.starts_with('@') => Ok((*col, w.as_str())),
                _ => Err(ParseError::syntax(line_no, *col, "expected `cause <lemma> <lemma>`")),
            })
            .collect::<Result<_, _>>()?;
        match words.as_slice() {
            [(_, "cause"), (_, cause), (_, effect)] => {
                let ax = CausalAxiom::new(*cause, *effect);
                if !out.contains(&ax) {
                    out.push(ax);
                }
            }
            [(col, "cause"), ..] => {
                return Err(ParseError::syntax(line_no, *col, "`cause` takes exactly two lemmas"));
            }
            [(col, _), ..] => return Err(ParseError::syntax(line_no, *col, "expected `cause <lemma> <lemma>`")),
            [] => unreachable!("content lines are non-blank"),
        }
    }
    Ok(out)
}
