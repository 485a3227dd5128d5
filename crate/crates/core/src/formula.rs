//! Propositional formulas over a finite vocabulary and their compilation
//! to events, i.e. bit vectors indexed by truth assignments (atoms).
//!
//! Atom `j` assigns variable `i` the value of bit `i` of `j`, so for
//! `vars: a, b` atom 1 is `a & ~b` and atom 2 is `~a & b`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    vars: Vec<String>,
    id: u64,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Vocabulary {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = names.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(Error::InvalidVocabulary("at least one variable is required".into()));
        }
        if vars.len() > MAX_VARIABLES {
            return Err(Error::InvalidVocabulary(format!(
                "{} variables given, at most {MAX_VARIABLES} are supported",
                vars.len()
            )));
        }
        for (i, name) in vars.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidVocabulary(format!("`{name}` is not an identifier")));
            }
            if vars[..i].contains(name) {
                return Err(Error::InvalidVocabulary(format!("duplicate variable `{name}`")));
            }
        }
        // FNV-1a over the ordered names.
        let mut id: u64 = 0xcbf2_9ce4_8422_2325;
        for name in &vars {
            for byte in name.bytes().chain(std::iter::once(0)) {
                id ^= u64::from(byte);
                id = id.wrapping_mul(0x0100_0000_01b3);
            }
        }
        Ok(Vocabulary { vars, id })
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        1 << self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Event {
        Event {
            vocab_id: self.id,
            atoms: self.atom_count(),
            words: vec![0; words_for(self.atom_count())],
        }
    }

    pub fn one(&self) -> Event {
        let mut e = self.zero();
        e.words.iter_mut().for_each(|w| *w = u64::MAX);
        e.mask_tail();
        e
    }

    pub fn atom(&self, index: usize) -> Event {
        let mut e = self.zero();
        e.set(index);
        e
    }

    /// The event "variable `index` is true".
    pub fn variable(&self, index: usize) -> Event {
        assert!(index < self.len(), "variable index out of range");
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut e = self.zero();
        if index < 6 {
            e.words.iter_mut().for_each(|w| *w = PATTERNS[index]);
        } else {
            let period = 1usize << (index - 6);
            for (w, word) in e.words.iter_mut().enumerate() {
                if (w / period) % 2 == 1 {
                    *word = u64::MAX;
                }
            }
        }
        e.mask_tail();
        e
    }

    pub fn variable_named(&self, name: &str) -> Result<Event> {
        self.index_of(name)
            .map(|i| self.variable(i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Parses and evaluates in one step.
    pub fn event(&self, text: &str) -> Result<Event> {
        parse_formula(text, self)?.evaluate(self)
    }

    pub(crate) fn owns(&self, event: &Event) -> bool {
        event.vocab_id == self.id && event.atoms == self.atom_count()
    }

    /// Conjunction of literals describing atom `j`.
    pub fn atom_term(&self, atom: usize) -> String {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| if atom >> i & 1 == 1 { v.clone() } else { format!("~{v}") })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

fn words_for(atoms: usize) -> usize {
    atoms.div_ceil(64)
}

/// A set of atoms: an element of the Boolean ring of events.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    vocab_id: u64,
    atoms: usize,
    words: Vec<u64>,
}

impl Event {
    fn mask_tail(&mut self) {
        let rem = self.atoms % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn set(&mut self, atom: usize) {
        assert!(atom < self.atoms, "atom index out of range");
        self.words[atom / 64] |= 1 << (atom % 64);
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < self.atoms && self.words[atom / 64] >> (atom % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.count() == self.atoms
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the atoms in this event, ascending.
    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }

    pub fn same_vocabulary(&self, other: &Event) -> bool {
        self.vocab_id == other.vocab_id && self.atoms == other.atoms
    }

    fn check(&self, other: &Event) -> Result<()> {
        if self.same_vocabulary(other) {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch)
        }
    }

    fn zip_with(&self, other: &Event, f: impl Fn(u64, u64) -> u64) -> Event {
        Event {
            vocab_id: self.vocab_id,
            atoms: self.atoms,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn and(&self, other: &Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    pub fn or(&self, other: &Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn xor(&self, other: &Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a ^ b))
    }

    /// `self ∧ ¬other`.
    pub fn minus(&self, other: &Event) -> Result<Event> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a & !b))
    }

    pub fn complement(&self) -> Event {
        let mut e = Event {
            vocab_id: self.vocab_id,
            atoms: self.atoms,
            words: self.words.iter().map(|w| !w).collect(),
        };
        e.mask_tail();
        e
    }

    /// Material implication `self → consequent`, i.e. `¬self ∨ consequent`.
    pub fn implies(&self, consequent: &Event) -> Result<Event> {
        self.complement().or(consequent)
    }

    /// Ring order: `self ≤ other` iff `self · other = self`.
    pub fn leq(&self, other: &Event) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Event) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0))
    }

    /// Disjunctive normal form over full atom terms; re-parses to this event.
    pub fn to_dnf(&self, vocab: &Vocabulary) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.is_one() {
            return "1".into();
        }
        let terms: Vec<String> = self.atoms().map(|a| vocab.atom_term(a)).collect();
        if terms.len() == 1 {
            return terms.into_iter().next().unwrap_or_default();
        }
        terms
            .into_iter()
            .map(|t| if vocab.len() > 1 { format!("({t})") } else { t })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

// Operator forms panic on vocabulary mismatch; the `Result` methods above
// are the checked API.
impl BitAnd for &Event {
    type Output = Event;
    fn bitand(self, rhs: &Event) -> Event {
        self.and(rhs).expect("vocabulary mismatch")
    }
}

impl BitOr for &Event {
    type Output = Event;
    fn bitor(self, rhs: &Event) -> Event {
        self.or(rhs).expect("vocabulary mismatch")
    }
}

impl BitXor for &Event {
    type Output = Event;
    fn bitxor(self, rhs: &Event) -> Event {
        self.xor(rhs).expect("vocabulary mismatch")
    }
}

impl Not for &Event {
    type Output = Event;
    fn not(self) -> Event {
        self.complement()
    }
}

/// Binary string, highest atom first (atom 0 rightmost).
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.atoms)
            .rev()
            .map(|j| if self.contains(j) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Event({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn xor(l: Formula, r: Formula) -> Formula {
        Formula::Xor(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    /// Truth-table compilation onto the atoms of `vocab`.
    pub fn evaluate(&self, vocab: &Vocabulary) -> Result<Event> {
        Ok(match self {
            Formula::Const(false) => vocab.zero(),
            Formula::Const(true) => vocab.one(),
            Formula::Var(name) => vocab.variable_named(name)?,
            Formula::Not(f) => f.evaluate(vocab)?.complement(),
            Formula::And(l, r) => &l.evaluate(vocab)? & &r.evaluate(vocab)?,
            Formula::Or(l, r) => &l.evaluate(vocab)? | &r.evaluate(vocab)?,
            Formula::Xor(l, r) => &l.evaluate(vocab)? ^ &r.evaluate(vocab)?,
            Formula::Implies(l, r) => l.evaluate(vocab)?.implies(&r.evaluate(vocab)?)?,
        })
    }
}

/// Fully parenthesized; parsing the output yields the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{}", u8::from(*b)),
            Formula::Var(name) => f.write_str(name),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::Xor(l, r) => write!(f, "({l} ^ {r})"),
            Formula::Implies(l, r) => write!(f, "({l} -> {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Zero,
    One,
    Ident(String),
    Tilde,
    Amp,
    Caret,
    Bar,
    Arrow,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => Token::Tilde,
            '&' => Token::Amp,
            '^' => Token::Caret,
            '|' => Token::Bar,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' => {
                if chars.get(i + 1).map(|&(_, c)| c) == Some('>') {
                    i += 1;
                    Token::Arrow
                } else {
                    return Err(Error::Syntax { offset, message: "expected `->`".into() });
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let token = match word.as_str() {
                    "0" => Token::Zero,
                    "1" => Token::One,
                    w if is_identifier(w) => Token::Ident(word),
                    _ => {
                        return Err(Error::Syntax {
                            offset,
                            message: format!("invalid token `{word}`"),
                        })
                    }
                };
                tokens.push((offset, token));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    offset,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push((offset, token));
        i += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    // implies := or ('->' implies)?
    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn binary_level(
        &mut self,
        op: Token,
        build: fn(Formula, Formula) -> Formula,
        next: fn(&mut Self) -> Result<Formula>,
    ) -> Result<Formula> {
        let mut lhs = next(self)?;
        while self.peek() == Some(&op) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        self.binary_level(Token::Bar, Formula::or, Self::xor)
    }

    fn xor(&mut self) -> Result<Formula> {
        self.binary_level(Token::Caret, Formula::xor, Self::and)
    }

    fn and(&mut self) -> Result<Formula> {
        self.binary_level(Token::Amp, Formula::and, Self::unary)
    }

    fn unary(&mut self) -> Result<Formula> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Zero) => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(Token::One) => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some(Token::Ident(name)) => {
                if self.vocab.index_of(&name).is_none() {
                    return Err(Error::UnknownVariable(name));
                }
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implies()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error(format!("unclosed parenthesis opened at offset {offset}"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected a variable, constant, `~` or `(`"),
            None => self.error("unexpected end of formula"),
        }
    }
}

/// Parses formula text against `vocab`.
///
/// Precedence from tightest: `~`, `&`, `^`, `|`, `->`. Binary operators
/// associate to the left except `->`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty formula".into() });
    }
    let mut parser = Parser { tokens, pos: 0, end: text.len(), vocab };
    let formula = parser.implies()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(formula)
}

/// Groups atoms by their membership signature across `events`.
///
/// Cells come out ordered by their smallest atom. An empty input yields
/// the single cell `1`.
pub fn canonical_partition(vocab: &Vocabulary, events: &[Event]) -> Result<Vec<Event>> {
    if events.iter().any(|e| !vocab.owns(e)) {
        return Err(Error::VocabularyMismatch);
    }
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut cells: Vec<Event> = Vec::new();
    let sig_words = words_for(events.len().max(1));
    let mut signature = vec![0u64; sig_words];
    for atom in 0..vocab.atom_count() {
        signature.iter_mut().for_each(|w| *w = 0);
        for (i, e) in events.iter().enumerate() {
            if e.contains(atom) {
                signature[i / 64] |= 1 << (i % 64);
            }
        }
        let cell = *index.entry(signature.clone()).or_insert_with(|| {
            cells.push(vocab.zero());
            cells.len() - 1
        });
        cells[cell].set(atom);
    }
    Ok(cells)
}
