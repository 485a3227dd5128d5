//! Measure-free conditional events `(a|b)`.
//!
//! A conditional event is the coset `a + R·b'` of the event ring, which is
//! the same thing as the interval `[ab, b → a]`. Values are stored in the
//! normal form `(ab | b)`, so structural equality is coset equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{parse_formula, Event, Vocabulary};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConditionalEvent {
    numerator: Event,
    antecedent: Event,
}

/// The events `x` with `low ≤ x ≤ high`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub low: Event,
    pub high: Event,
}

impl ConditionalEvent {
    /// Builds `(a|b)`, normalized to `(ab|b)`. `b = 0` is allowed here.
    pub fn new(consequent: &Event, antecedent: &Event) -> Result<Self> {
        Ok(ConditionalEvent {
            numerator: consequent.and(antecedent)?,
            antecedent: antecedent.clone(),
        })
    }

    /// The embedding `a ↦ (a|1)`.
    pub fn unconditional(event: &Event, vocab: &Vocabulary) -> Result<Self> {
        Self::new(event, &vocab.one())
    }

    /// `ab`.
    pub fn numerator(&self) -> &Event {
        &self.numerator
    }

    /// `b`.
    pub fn antecedent(&self) -> &Event {
        &self.antecedent
    }

    /// `a'b`: the part of the antecedent where the conditional is false.
    pub fn refuter(&self) -> Event {
        self.antecedent.minus(&self.numerator).expect("normalized pair")
    }

    pub fn is_degenerate(&self) -> bool {
        self.antecedent.is_zero()
    }

    pub fn interval(&self) -> Interval {
        Interval {
            low: self.numerator.clone(),
            high: &self.antecedent.complement() | &self.numerator,
        }
    }

    pub fn contains(&self, x: &Event) -> Result<bool> {
        let Interval { low, high } = self.interval();
        Ok(low.leq(x)? && x.leq(&high)?)
    }

    /// `(a|b)' = (a'|b)`.
    pub fn negate(&self) -> ConditionalEvent {
        ConditionalEvent { numerator: self.refuter(), antecedent: self.antecedent.clone() }
    }

    /// `(a|b)·(c|d) = (ac | a'b ∨ c'd ∨ bd)`.
    pub fn and(&self, other: &ConditionalEvent) -> Result<ConditionalEvent> {
        self.check(other)?;
        let antecedent = &(&self.refuter() | &other.refuter())
            | &(&self.antecedent & &other.antecedent);
        let consequent = &self.numerator & &other.numerator;
        ConditionalEvent::new(&consequent, &antecedent)
    }

    /// `(a|b) ∨ (c|d) = (a ∨ c | ab ∨ cd ∨ bd)`.
    pub fn or(&self, other: &ConditionalEvent) -> Result<ConditionalEvent> {
        self.check(other)?;
        let antecedent = &(&self.numerator | &other.numerator)
            | &(&self.antecedent & &other.antecedent);
        let consequent = &self.numerator | &other.numerator;
        ConditionalEvent::new(&consequent, &antecedent)
    }

    /// The conditional order: `ab ≤ cd` and `c'd ≤ a'b`.
    pub fn leq(&self, other: &ConditionalEvent) -> Result<bool> {
        self.check(other)?;
        Ok(self.numerator.leq(&other.numerator)? && other.refuter().leq(&self.refuter())?)
    }

    pub fn comparable(&self, other: &ConditionalEvent) -> Result<bool> {
        Ok(self.leq(other)? || other.leq(self)?)
    }

    /// `(a | b ∧ e)`.
    pub fn with_evidence(&self, evidence: &Event) -> Result<ConditionalEvent> {
        ConditionalEvent::new(&self.numerator, &self.antecedent.and(evidence)?)
    }

    pub fn same_vocabulary(&self, other: &ConditionalEvent) -> bool {
        self.antecedent.same_vocabulary(&other.antecedent)
    }

    fn check(&self, other: &ConditionalEvent) -> Result<()> {
        if self.same_vocabulary(other) {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch)
        }
    }

    /// Parses `(f1 | f2)` or `f1 | f2`; the conditional bar must be the only
    /// `|` outside parentheses.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<ConditionalEvent> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        let (body, base) = match trimmed.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            Some(inner) if balanced(inner) => (inner, lead + 1),
            _ => (trimmed, lead),
        };
        let (consequent, antecedent) = split_conditional(body, base)?;
        let antecedent = match antecedent {
            Some((offset, a)) => parse_at(a, offset, vocab)?,
            None => vocab.one(),
        };
        let consequent = parse_at(consequent, base, vocab)?;
        ConditionalEvent::new(&consequent, &antecedent)
    }

    /// Normalized text form with DNF components.
    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a ConditionalEvent, &'a Vocabulary);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let part = |e: &Event| {
                    let dnf = e.to_dnf(self.1);
                    if dnf.contains('|') {
                        format!("({dnf})")
                    } else {
                        dnf
                    }
                };
                write!(f, "({} | {})", part(&self.0.numerator), part(&self.0.antecedent))
            }
        }
        Show(self, vocab)
    }
}

fn parse_at(text: &str, offset: usize, vocab: &Vocabulary) -> Result<Event> {
    parse_formula(text, vocab)
        .map_err(|e| match e {
            Error::Syntax { offset: o, message } => Error::Syntax { offset: o + offset, message },
            other => other,
        })?
        .evaluate(vocab)
}

fn balanced(text: &str) -> bool {
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Splits `consequent | antecedent` at the unique top-level bar.
///
/// Returns the consequent text and, when a bar is present, the antecedent
/// text with its offset (relative to `base`). A disjunction at top level
/// must be parenthesized, so a second bar is an error.
pub fn split_conditional(text: &str, base: usize) -> Result<(&str, Option<(usize, &str)>)> {
    let mut depth = 0i32;
    let mut bars = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => bars.push(i),
            _ => {}
        }
    }
    match bars.as_slice() {
        [] => Ok((text, None)),
        [bar] => Ok((&text[..*bar], Some((base + bar + 1, &text[bar + 1..])))),
        [_, second, ..] => Err(Error::Syntax {
            offset: base + second,
            message: "more than one top-level `|`; parenthesize disjunctions, e.g. P((a | b) | c)"
                .into(),
        }),
    }
}

impl fmt::Debug for ConditionalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.numerator, self.antecedent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(names: &[&str]) -> Vocabulary {
        Vocabulary::new(names.iter().copied()).unwrap()
    }

    fn ce(v: &Vocabulary, a: &str, b: &str) -> ConditionalEvent {
        ConditionalEvent::new(&v.event(a).unwrap(), &v.event(b).unwrap()).unwrap()
    }

    #[test]
    fn construction() {
        let v = vocab(&["a", "b"]);
        let a = v.event("a").unwrap();
        let p = ce(&v, "a", "1");
        assert_eq!(p.numerator(), &a);
        assert_eq!(ce(&v, "a", "a"), ConditionalEvent::new(&a, &a).unwrap());
        let d = ce(&v, "a", "0");
        assert!(d.numerator().is_zero() && d.is_degenerate());
        assert_eq!(d.interval(), Interval { low: v.zero(), high: v.one() });
        // (a|b) = (ab|b)
        assert_eq!(ce(&v, "a", "b"), ce(&v, "a & b", "b"));
    }

    #[test]
    fn intervals() {
        let v = vocab(&["a", "b"]);
        let i = ce(&v, "a", "1").interval();
        assert_eq!(i.low, i.high);
        // (a|b): low = ab = 1000, high = b' ∨ a = 1011
        let i = ce(&v, "a", "b").interval();
        assert_eq!(i.low.to_string(), "1000");
        assert_eq!(i.high.to_string(), "1011");
    }

    #[test]
    fn coset_membership() {
        let v = vocab(&["a", "b"]);
        let p = ce(&v, "a", "b");
        assert!(p.contains(&v.event("a & b").unwrap()).unwrap());
        assert!(p.contains(&v.event("b -> a").unwrap()).unwrap());
        // a·b' = 0010 misses the lower endpoint ab = 1000
        assert!(!p.contains(&v.event("a & ~b").unwrap()).unwrap());
    }

    #[test]
    fn negation() {
        let v = vocab(&["a", "b"]);
        assert_eq!(ce(&v, "a", "1").negate(), ce(&v, "~a", "1"));
        let p = ce(&v, "a", "b");
        assert_eq!(p.negate().negate(), p);
        let z = ce(&v, "0", "b").negate();
        assert_eq!(z.numerator(), &v.event("b").unwrap());
    }

    #[test]
    fn conjunction_and_disjunction() {
        let v = vocab(&["a", "b", "c", "d"]);
        assert_eq!(ce(&v, "a", "1").and(&ce(&v, "c", "1")).unwrap(), ce(&v, "a & c", "1"));
        assert_eq!(ce(&v, "a", "1").or(&ce(&v, "c", "1")).unwrap(), ce(&v, "a | c", "1"));
        let p = ce(&v, "a", "b");
        assert_eq!(p.and(&p).unwrap(), p);
        assert_eq!(p.or(&p).unwrap(), p);
        let q = ce(&v, "c", "d");
        // hand-derived normal forms over 16 atoms
        assert_eq!(
            p.and(&q).unwrap(),
            ce(&v, "a & b & c & d", "~a & b | ~c & d | b & d")
        );
        assert_eq!(p.or(&q).unwrap(), ce(&v, "a | c", "a & b | c & d | b & d"));
        let lhs = p.and(&q).unwrap().negate();
        let rhs = p.negate().or(&q.negate()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn order() {
        let v = vocab(&["a", "b", "c"]);
        assert!(ce(&v, "0", "b").leq(&ce(&v, "a", "b")).unwrap());
        assert!(ce(&v, "a", "b").leq(&ce(&v, "b", "b")).unwrap());
        let p = ce(&v, "a", "b");
        let q = ce(&v, "a", "b & c");
        assert!(!p.leq(&q).unwrap());
        assert!(!q.leq(&p).unwrap());
        assert!(!p.comparable(&q).unwrap());
        assert!(p.comparable(&p).unwrap());
        assert!(ce(&v, "0", "1").comparable(&ce(&v, "1", "1")).unwrap());
    }

    #[test]
    fn mismatch() {
        let v = vocab(&["a", "b"]);
        let w = vocab(&["x", "y"]);
        let p = ce(&v, "a", "b");
        let q = ce(&w, "x", "y");
        assert_eq!(p.and(&q), Err(Error::VocabularyMismatch));
        assert_eq!(p.leq(&q), Err(Error::VocabularyMismatch));
        assert_eq!(p.contains(&w.one()), Err(Error::VocabularyMismatch));
    }

    #[test]
    fn text_forms() {
        let v = vocab(&["a", "b", "c"]);
        assert_eq!(ConditionalEvent::parse("(a | b)", &v).unwrap(), ce(&v, "a", "b"));
        assert_eq!(ConditionalEvent::parse("(a | b) | c", &v).unwrap(), ce(&v, "a | b", "c"));
        assert_eq!(ConditionalEvent::parse("a", &v).unwrap(), ce(&v, "a", "1"));
        assert!(matches!(
            ConditionalEvent::parse("a | b | c", &v),
            Err(Error::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            ConditionalEvent::parse("(a | b &)", &v),
            Err(Error::Syntax { offset: 8, .. })
        ));
        for (a, b) in [("a", "b"), ("a | c", "b | c"), ("0", "1"), ("a ^ b", "~c")] {
            let p = ce(&v, a, b);
            let shown = p.display(&v).to_string();
            assert_eq!(ConditionalEvent::parse(&shown, &v).unwrap(), p, "{shown}");
        }
    }
}
