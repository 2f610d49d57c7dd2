//! TOML machine files.
//!
//! A transducer file declares `alphabet_in`, `alphabet_out`, `states`, `initial`, a `[finals]`
//! table mapping states to final output words, and `transitions` rows `[src, letter, output,
//! dst]`. A relation file sets `kind = "relation"`, declares `alphabet`, lists `finals` as
//! states and uses rows `[src, left, right, dst]` whose words may be empty or longer than one
//! letter.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;
use transdist::automata::StateId;
use transdist::pair::{add_chain, PairAutomaton};
use transdist::relations::RationalRelation;
use transdist::transducer::{Edge, Transducer};
use transdist::{Alphabet, Word};

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: Option<Spanned<String>>,
    alphabet: Option<Spanned<String>>,
    alphabet_in: Option<Spanned<String>>,
    alphabet_out: Option<Spanned<String>>,
    states: Spanned<usize>,
    initial: Spanned<Initial>,
    finals: Spanned<Finals>,
    #[serde(default)]
    transitions: Vec<Spanned<(usize, String, String, usize)>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Initial {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Finals {
    Outputs(BTreeMap<String, String>),
    States(Vec<usize>),
}

/// A parsed file together with its source, for locating semantic errors.
struct Source<'a> {
    path: &'a Path,
    text: String,
}

impl Source<'_> {
    fn error(&self, span: Option<Range<usize>>, msg: impl Into<String>) -> CliError {
        let location = span.map(|s| {
            let before = &self.text[..s.start.min(self.text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            format!(":{line}:{col}")
        });
        CliError::Format(format!("{}{}: {}", self.path.display(), location.unwrap_or_default(), msg.into()))
    }

    fn alphabet(&self, field: &Spanned<String>) -> Result<Alphabet, CliError> {
        Alphabet::from_symbols(field.get_ref()).map_err(|e| self.error(Some(field.span()), e.to_string()))
    }

    fn state(&self, q: usize, n: usize, span: Range<usize>) -> Result<StateId, CliError> {
        if q < n {
            Ok(q)
        } else {
            Err(self.error(Some(span), format!("state {q} is not declared (the machine has {n} states)")))
        }
    }

    fn word(&self, a: &Alphabet, w: &str, span: Range<usize>) -> Result<Word, CliError> {
        a.parse_word(w).map_err(|e| self.error(Some(span), e.to_string()))
    }
}

fn read(path: &Path) -> Result<(Source<'_>, RawFile), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let src = Source { path, text };
    let raw: RawFile = toml::from_str(&src.text).map_err(|e| src.error(e.span(), e.message().to_string()))?;
    Ok((src, raw))
}

fn initial_states(src: &Source, raw: &RawFile) -> Result<Vec<StateId>, CliError> {
    let n = *raw.states.get_ref();
    let list = match raw.initial.get_ref() {
        Initial::One(q) => vec![*q],
        Initial::Many(qs) => qs.clone(),
    };
    list.into_iter().map(|q| src.state(q, n, raw.initial.span())).collect()
}

fn is_relation(raw: &RawFile) -> bool {
    raw.kind.as_ref().is_some_and(|k| k.get_ref() == "relation")
}

fn check_kind(src: &Source, raw: &RawFile) -> Result<(), CliError> {
    match &raw.kind {
        Some(k) if !matches!(k.get_ref().as_str(), "relation" | "transducer") => {
            Err(src.error(Some(k.span()), format!("unknown kind {:?}", k.get_ref())))
        }
        _ => Ok(()),
    }
}

pub fn load_transducer(path: &Path) -> Result<Transducer, CliError> {
    let (src, raw) = read(path)?;
    check_kind(&src, &raw)?;
    if is_relation(&raw) {
        return Err(src.error(raw.kind.as_ref().map(Spanned::span), "expected a transducer, found a relation"));
    }
    let field = |f: &Option<Spanned<String>>, name: &str| -> Result<Alphabet, CliError> {
        match f.as_ref().or(raw.alphabet.as_ref()) {
            Some(a) => src.alphabet(a),
            None => Err(src.error(None, format!("missing {name}"))),
        }
    };
    let (input, output) = (field(&raw.alphabet_in, "alphabet_in")?, field(&raw.alphabet_out, "alphabet_out")?);
    let n = *raw.states.get_ref();
    let initial = initial_states(&src, &raw)?;
    let finals = match raw.finals.get_ref() {
        Finals::Outputs(map) => map
            .iter()
            .map(|(q, w)| {
                let q: usize = q.parse().map_err(|_| src.error(Some(raw.finals.span()), format!("final state {q:?} is not a number")))?;
                Ok((src.state(q, n, raw.finals.span())?, src.word(&output, w, raw.finals.span())?))
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        Finals::States(_) => return Err(src.error(Some(raw.finals.span()), "transducer finals must map states to output words")),
    };
    let mut edges = Vec::new();
    for row in &raw.transitions {
        let (s, a, out, d) = row.get_ref();
        let span = row.span();
        let letter = match &src.word(&input, a, span.clone())?[..] {
            [l] => *l,
            _ => return Err(src.error(Some(span), format!("input {a:?} must be a single letter"))),
        };
        edges.push(Edge {
            src: src.state(*s, n, span.clone())?,
            input: letter,
            output: src.word(&output, out, span.clone())?,
            dst: src.state(*d, n, span)?,
        });
    }
    Transducer::new(input, output, n, initial, finals, edges).map_err(|e| src.error(None, e.to_string()))
}

pub fn load_relation(path: &Path) -> Result<RationalRelation, CliError> {
    let (src, raw) = read(path)?;
    check_kind(&src, &raw)?;
    if !is_relation(&raw) {
        return Err(src.error(None, "expected kind = \"relation\""));
    }
    let alphabet = match (&raw.alphabet, &raw.alphabet_in, &raw.alphabet_out) {
        (Some(a), _, _) => src.alphabet(a)?,
        (None, Some(i), Some(o)) => src.alphabet(i)?.union(&src.alphabet(o)?),
        _ => return Err(src.error(None, "missing alphabet")),
    };
    let n = *raw.states.get_ref();
    let mut p = PairAutomaton::new(n);
    for q in initial_states(&src, &raw)? {
        p.set_initial(q);
    }
    match raw.finals.get_ref() {
        Finals::States(qs) => {
            for &q in qs {
                p.set_final(src.state(q, n, raw.finals.span())?, true);
            }
        }
        Finals::Outputs(_) => return Err(src.error(Some(raw.finals.span()), "relation finals must be a list of states")),
    }
    for row in &raw.transitions {
        let (s, l, r, d) = row.get_ref();
        let span = row.span();
        let (s, d) = (src.state(*s, n, span.clone())?, src.state(*d, n, span.clone())?);
        let (l, r) = (src.word(&alphabet, l, span.clone())?, src.word(&alphabet, r, span)?);
        add_chain(&mut p, s, &l, &r, &[], d);
    }
    RationalRelation::new(alphabet, p).map_err(|e| src.error(None, e.to_string()))
}
