//! Knowledge-base text format.
//!
//! ```text
//! # penguins
//! vars: f, b, p
//! P(f | b) = 9/10
//! P(b | p) = 1
//! P(f | p) = 0
//! evidence: p
//! ```
//!
//! `P(x) = α` is shorthand for `P(x | 1) = α`. Inside `P(...)` the
//! conditional bar is the only `|` outside parentheses.

use std::path::Path;

use num_rational::BigRational;

use crate::conditional::{split_conditional, ConditionalEvent};
use crate::entailment::{ConditionalAssessment, KnowledgeBase};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Event, Vocabulary};
use crate::scalar::parse_rational;

#[derive(Debug, Clone, PartialEq)]
pub struct KbFile {
    pub kb: KnowledgeBase,
    /// Source text of each assessment, with its line number.
    pub labels: Vec<(usize, String)>,
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::KbSyntax { .. } => e,
        other => Error::KbSyntax { line, message: other.to_string() },
    }
}

fn formula_event(text: &str, offset: usize, vocab: &Vocabulary) -> Result<Event> {
    parse_formula(text, vocab)
        .map_err(|e| match e {
            Error::Syntax { offset: o, message } => Error::Syntax { offset: o + offset, message },
            other => other,
        })?
        .evaluate(vocab)
}

/// Parses `P(<formula> | <formula>)` or `P(<formula>)` at the start of
/// `text` and returns the conditional plus the unparsed remainder.
pub fn parse_probability_term<'t>(text: &'t str, vocab: &Vocabulary) -> Result<(ConditionalEvent, &'t str)> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim_start();
    let Some(rest) = body.strip_prefix('P') else {
        return Err(Error::Syntax { offset: lead, message: "expected `P(`".into() });
    };
    let open = lead + 1 + (rest.len() - rest.trim_start().len());
    if !text[open..].starts_with('(') {
        return Err(Error::Syntax { offset: open, message: "expected `(` after `P`".into() });
    }
    let mut depth = 0i32;
    let mut close = None;
    for (i, c) in text[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(open + i);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(close) = close else {
        return Err(Error::Syntax { offset: open, message: "unclosed `P(`".into() });
    };
    let inner = &text[open + 1..close];
    let (consequent, antecedent) = split_conditional(inner, open + 1)?;
    let consequent = formula_event(consequent, open + 1, vocab)?;
    let antecedent = match antecedent {
        Some((offset, a)) => formula_event(a, offset, vocab)?,
        None => vocab.one(),
    };
    Ok((ConditionalEvent::new(&consequent, &antecedent)?, &text[close + 1..]))
}

/// Parses a query: `P(f1 | f2)` or `P(f1)`.
pub fn parse_query(text: &str, vocab: &Vocabulary) -> Result<ConditionalEvent> {
    let (ce, rest) = parse_probability_term(text, vocab)?;
    if !rest.trim().is_empty() {
        return Err(Error::Syntax {
            offset: text.len() - rest.len(),
            message: "unexpected text after query".into(),
        });
    }
    Ok(ce)
}

fn parse_assessment(text: &str, vocab: &Vocabulary) -> Result<ConditionalAssessment> {
    let (cond, rest) = parse_probability_term(text, vocab)?;
    let offset = text.len() - rest.len();
    let Some(value) = rest.trim_start().strip_prefix('=') else {
        return Err(Error::Syntax { offset, message: "expected `= <number>`".into() });
    };
    let alpha: BigRational = parse_rational(value).ok_or_else(|| Error::Syntax {
        offset,
        message: format!("`{}` is not a decimal or p/q number", value.trim()),
    })?;
    ConditionalAssessment::new(cond, alpha)
}

pub fn parse_kb(source: &str) -> Result<KbFile> {
    let mut vocab: Option<Vocabulary> = None;
    let mut kb: Option<KnowledgeBase> = None;
    let mut labels = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |message: &str| Error::KbSyntax { line, message: message.to_string() };
        if let Some(names) = text.strip_prefix("vars:") {
            if vocab.is_some() {
                return Err(err("duplicate `vars:` declaration"));
            }
            let names: Vec<&str> = names.split(',').map(str::trim).collect();
            let v = Vocabulary::new(names).map_err(at_line(line))?;
            kb = Some(KnowledgeBase::new(v.clone()));
            vocab = Some(v);
            continue;
        }
        let (Some(v), Some(kb)) = (vocab.as_ref(), kb.as_mut()) else {
            return Err(err("`vars:` must be declared before use"));
        };
        if let Some(formula) = text.strip_prefix("evidence:") {
            let fact = v.event(formula).map_err(at_line(line))?;
            kb.observe(&fact).map_err(at_line(line))?;
        } else if text.starts_with('P') {
            let assessment = parse_assessment(text, v).map_err(at_line(line))?;
            kb.assert(assessment).map_err(at_line(line))?;
            labels.push((line, text.to_string()));
        } else {
            return Err(err("expected `vars:`, `evidence:` or `P(...) = <number>`"));
        }
    }
    let kb = kb.ok_or(Error::KbSyntax { line: 0, message: "missing `vars:` declaration".into() })?;
    Ok(KbFile { kb, labels })
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: Error },
}

pub fn load_kb(path: &Path) -> std::result::Result<KbFile, LoadError> {
    let shown = path.display().to_string();
    let source =
        std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: shown.clone(), source })?;
    parse_kb(&source).map_err(|source| LoadError::Parse { path: shown, source })
}
