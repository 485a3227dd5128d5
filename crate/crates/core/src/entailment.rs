//! Bounds on a query conditional probability entailed by a knowledge base
//! of conditional assessments `P(a_i | b_i) = α_i`.
//!
//! Masses live on the canonical partition generated by every consequent
//! and antecedent involved. Each assessment becomes the linear row
//! `P(a_i b_i) = α_i · P(b_i)`; the query ratio `P(a*)/P(b*)` is
//! linearized by scaling the masses with `1/P(b*)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::conditional::ConditionalEvent;
use crate::error::{Error, Result};
use crate::formula::{canonical_partition, Event, Vocabulary};
use crate::lp::{solve, LinearProgram, LpOutcome, Relation, Sense};
use crate::probability::ProbabilityModel;
use crate::scalar::Scalar;

/// Float-mode threshold for a positive antecedent mass.
pub const CONDITIONABLE_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalAssessment {
    pub cond: ConditionalEvent,
    pub alpha: BigRational,
}

impl ConditionalAssessment {
    pub fn new(cond: ConditionalEvent, alpha: BigRational) -> Result<Self> {
        if alpha < BigRational::zero() || alpha > BigRational::one() {
            return Err(Error::AlphaOutOfRange(alpha.to_string()));
        }
        if cond.is_degenerate() {
            return Err(Error::DegenerateConditional);
        }
        Ok(ConditionalAssessment { cond, alpha })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    vocab: Vocabulary,
    assessments: Vec<ConditionalAssessment>,
    evidence: Event,
}

impl KnowledgeBase {
    pub fn new(vocab: Vocabulary) -> Self {
        let evidence = vocab.one();
        KnowledgeBase { vocab, assessments: Vec::new(), evidence }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn assessments(&self) -> &[ConditionalAssessment] {
        &self.assessments
    }

    pub fn evidence(&self) -> &Event {
        &self.evidence
    }

    pub fn len(&self) -> usize {
        self.assessments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assessments.is_empty()
    }

    pub fn assert(&mut self, assessment: ConditionalAssessment) -> Result<&mut Self> {
        if !self.vocab.owns(assessment.cond.antecedent()) {
            return Err(Error::VocabularyMismatch);
        }
        self.assessments.push(assessment);
        Ok(self)
    }

    /// Adds `P(consequent | antecedent) = alpha`.
    pub fn assess(&mut self, consequent: &Event, antecedent: &Event, alpha: BigRational) -> Result<&mut Self> {
        let cond = ConditionalEvent::new(consequent, antecedent)?;
        self.assert(ConditionalAssessment::new(cond, alpha)?)
    }

    /// Conjoins `fact` into the evidence.
    pub fn observe(&mut self, fact: &Event) -> Result<&mut Self> {
        self.evidence = self.evidence.and(fact)?;
        Ok(self)
    }

    /// Parses both formulas against this KB's vocabulary and adds the
    /// assessment.
    pub fn assess_text(&mut self, consequent: &str, antecedent: &str, alpha: BigRational) -> Result<&mut Self> {
        let a = self.vocab.event(consequent)?;
        let b = self.vocab.event(antecedent)?;
        self.assess(&a, &b, alpha)
    }
}

/// Entry of the coding matrix: where a cell sits relative to `a_i b_i`,
/// `a_i' b_i` and `b_i'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Zero,
    One,
    AlphaSlot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub cells: Vec<Event>,
    pub pi: Vec<Vec<Tag>>,
    pub alphas: Vec<BigRational>,
    /// `a*`: query numerator conjoined with the evidence.
    pub target: Event,
    /// `b*`: query antecedent conjoined with the evidence.
    pub condition: Event,
}

fn tag_cell(cell: &Event, cond: &ConditionalEvent) -> Result<Tag> {
    if cell.leq(cond.numerator())? {
        Ok(Tag::One)
    } else if cell.leq(&cond.refuter())? {
        Ok(Tag::Zero)
    } else if cell.is_disjoint(cond.antecedent())? {
        Ok(Tag::AlphaSlot)
    } else {
        unreachable!("cells refine every generating event")
    }
}

fn assemble(kb: &KnowledgeBase, target: Event, condition: Event) -> Result<ConstraintSystem> {
    let mut generators = Vec::with_capacity(2 * kb.len() + 2);
    for a in &kb.assessments {
        generators.push(a.cond.numerator().clone());
        generators.push(a.cond.antecedent().clone());
    }
    generators.push(target.clone());
    generators.push(condition.clone());
    let cells = canonical_partition(&kb.vocab, &generators)?;
    let pi = kb
        .assessments
        .iter()
        .map(|a| cells.iter().map(|c| tag_cell(c, &a.cond)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let alphas = kb.assessments.iter().map(|a| a.alpha.clone()).collect();
    Ok(ConstraintSystem { cells, pi, alphas, target, condition })
}

/// Canonical partition and coding matrix for `query` against `kb`.
pub fn build_system(kb: &KnowledgeBase, query: &ConditionalEvent) -> Result<ConstraintSystem> {
    if !kb.vocab.owns(query.antecedent()) {
        return Err(Error::VocabularyMismatch);
    }
    if query.is_degenerate() {
        return Err(Error::DegenerateConditional);
    }
    let conditioned = query.with_evidence(&kb.evidence)?;
    assemble(kb, conditioned.numerator().clone(), conditioned.antecedent().clone())
}

impl ConstraintSystem {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.pi.len()
    }

    fn check_row<S>(&self, masses: &[S], row: usize) -> Result<()> {
        if row >= self.pi.len() {
            return Err(Error::IndexOutOfRange { index: row, len: self.pi.len() });
        }
        if masses.len() != self.cells.len() {
            return Err(Error::DimensionMismatch { expected: self.cells.len(), found: masses.len() });
        }
        Ok(())
    }

    /// Both residual forms of a row: `|Σ_j Λ_j π_ij − α_i|` with `α_i`
    /// substituted in the slots, and `|P(a_i b_i) − α_i P(b_i)|`.
    pub fn row_residuals<S: Scalar>(&self, masses: &[S], row: usize) -> Result<(S, S)> {
        self.check_row(masses, row)?;
        let alpha = S::from_rational(&self.alphas[row]);
        let mut coded = S::zero();
        let (mut joint, mut condition) = (S::zero(), S::zero());
        for (tag, mass) in self.pi[row].iter().zip(masses) {
            match tag {
                Tag::One => {
                    coded = coded + mass.clone();
                    joint = joint + mass.clone();
                    condition = condition + mass.clone();
                }
                Tag::Zero => condition = condition + mass.clone(),
                Tag::AlphaSlot => coded = coded + alpha.clone() * mass.clone(),
            }
        }
        Ok(((coded - alpha.clone()).abs(), (joint - alpha * condition).abs()))
    }

    /// `|P(a_i b_i) − α_i P(b_i)|`.
    pub fn row_residual<S: Scalar>(&self, masses: &[S], row: usize) -> Result<S> {
        Ok(self.row_residuals(masses, row)?.1)
    }

    /// Coefficients of the homogeneous row `P(a_i b_i) − α_i P(b_i) = 0`.
    fn homogeneous_row<S: Scalar>(&self, row: usize) -> Vec<S> {
        let alpha = S::from_rational(&self.alphas[row]);
        self.pi[row]
            .iter()
            .map(|tag| match tag {
                Tag::One => S::one() - alpha.clone(),
                Tag::Zero => -alpha.clone(),
                Tag::AlphaSlot => S::zero(),
            })
            .collect()
    }

    fn indicator<S: Scalar>(&self, event: &Event) -> Vec<S> {
        self.cells
            .iter()
            .map(|c| if c.leq(event).unwrap_or(false) { S::one() } else { S::zero() })
            .collect()
    }

    fn base_program<S: Scalar>(&self, sense: Sense, objective: Vec<S>) -> LinearProgram<S> {
        let mut lp = LinearProgram::new(sense, objective);
        for row in 0..self.rows() {
            lp.constrain(self.homogeneous_row(row), Relation::Eq, S::zero());
        }
        lp
    }

    /// `max P(b*)` over probability vectors satisfying every row.
    fn antecedent_program<S: Scalar>(&self) -> LinearProgram<S> {
        let mut lp = self.base_program(Sense::Maximize, self.indicator(&self.condition));
        lp.constrain(vec![S::one(); self.len()], Relation::Eq, S::one());
        lp
    }

    /// Scaled program over `y = Λ / P(b*)`.
    fn ratio_program<S: Scalar>(&self, sense: Sense) -> LinearProgram<S> {
        let mut lp = self.base_program(sense, self.indicator(&self.target));
        lp.constrain(self.indicator(&self.condition), Relation::Eq, S::one());
        lp.constrain(vec![S::one(); self.len()], Relation::Ge, S::one());
        lp
    }

    fn model<S: Scalar>(&self, masses: Vec<S>) -> Result<ProbabilityModel<S>> {
        ProbabilityModel::new(self.cells.clone(), masses)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility<S> {
    pub feasible: bool,
    /// Minimal phase-one infeasibility; zero when feasible.
    pub phase_one: S,
    pub witness: Option<ProbabilityModel<S>>,
}

/// Phase-one feasibility of the knowledge base on its own partition.
pub fn feasibility<S: Scalar>(kb: &KnowledgeBase) -> Result<Feasibility<S>> {
    let system = assemble(kb, kb.vocab.zero(), kb.vocab.one())?;
    let mut lp = system.base_program(Sense::Minimize, vec![S::zero(); system.len()]);
    lp.constrain(vec![S::one(); system.len()], Relation::Eq, S::one());
    match solve(&lp)? {
        LpOutcome::Optimal { point, .. } => Ok(Feasibility {
            feasible: true,
            phase_one: S::zero(),
            witness: Some(system.model(point)?),
        }),
        LpOutcome::Infeasible { phase_one } => Ok(Feasibility { feasible: false, phase_one, witness: None }),
        LpOutcome::Unbounded => unreachable!("zero objective"),
    }
}

pub fn feasible(kb: &KnowledgeBase) -> Result<bool> {
    Ok(feasibility::<BigRational>(kb)?.feasible)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport<S> {
    pub feasible: bool,
    pub conditionable: bool,
    pub lower: Option<S>,
    pub upper: Option<S>,
    pub witness_low: Option<ProbabilityModel<S>>,
    pub witness_high: Option<ProbabilityModel<S>>,
    /// `(a* | b*)` after folding in the evidence.
    pub query: ConditionalEvent,
    /// Largest attainable `P(b*)`, when the KB is feasible.
    pub max_condition: Option<S>,
}

impl<S: Scalar> BoundsReport<S> {
    pub fn interval(&self) -> Option<(S, S)> {
        Some((self.lower.clone()?, self.upper.clone()?))
    }
}

fn is_conditionable<S: Scalar>(max_condition: &S) -> bool {
    if S::EXACT {
        max_condition.is_positive()
    } else {
        max_condition.to_f64() > CONDITIONABLE_THRESHOLD
    }
}

/// Tight lower and upper bounds on `P(query)` given `kb`, with the
/// evidence folded into the query antecedent.
pub fn bounds<S: Scalar>(kb: &KnowledgeBase, query: &ConditionalEvent) -> Result<BoundsReport<S>> {
    let system = build_system(kb, query)?;
    let mut report = BoundsReport {
        feasible: false,
        conditionable: false,
        lower: None,
        upper: None,
        witness_low: None,
        witness_high: None,
        query: ConditionalEvent::new(&system.target, &system.condition)?,
        max_condition: None,
    };
    let max_condition = match solve(&system.antecedent_program::<S>())? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible { .. } => return Ok(report),
        LpOutcome::Unbounded => unreachable!("P(b*) ≤ 1"),
    };
    report.feasible = true;
    report.conditionable = is_conditionable(&max_condition);
    report.max_condition = Some(max_condition);
    if !report.conditionable {
        return Ok(report);
    }

    let (low, high) = rayon::join(
        || solve(&system.ratio_program::<S>(Sense::Minimize)),
        || solve(&system.ratio_program::<S>(Sense::Maximize)),
    );
    let extreme = |outcome: LpOutcome<S>| -> Result<Option<(S, ProbabilityModel<S>)>> {
        match outcome {
            LpOutcome::Optimal { value, point } => {
                let scale = point.iter().cloned().fold(S::zero(), |acc, y| acc + y);
                let masses = point.into_iter().map(|y| y / scale.clone()).collect();
                Ok(Some((value, system.model(masses)?)))
            }
            // Only reachable through float round-off at the conditionable
            // threshold.
            LpOutcome::Infeasible { .. } => Ok(None),
            LpOutcome::Unbounded => unreachable!("ratio objective lies in [0, 1]"),
        }
    };
    let low = extreme(low?)?;
    let high = extreme(high?)?;
    match (low, high) {
        (Some((lo, wl)), Some((hi, wh))) => {
            report.lower = Some(lo);
            report.upper = Some(hi);
            report.witness_low = Some(wl);
            report.witness_high = Some(wh);
        }
        _ => report.conditionable = false,
    }
    Ok(report)
}

/// Bounds for `(a|b)` and for `(a | b ∧ extra)` under the same knowledge base.
pub fn compare<S: Scalar>(
    kb: &KnowledgeBase,
    base: &ConditionalEvent,
    extra: &Event,
) -> Result<(BoundsReport<S>, BoundsReport<S>)> {
    let extended = base.with_evidence(extra)?;
    Ok((bounds(kb, base)?, bounds(kb, &extended)?))
}

/// How the query interval moved when evidence was added.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Widened,
    Narrowed,
    Shifted,
    Unchanged,
    Undefined,
}

impl Verdict {
    pub fn classify<S: Scalar>(before: &BoundsReport<S>, after: &BoundsReport<S>) -> Verdict {
        let (Some((l0, u0)), Some((l1, u1))) = (before.interval(), after.interval()) else {
            return Verdict::Undefined;
        };
        let tol = if S::EXACT { S::zero() } else { S::from_ratio(1, 1_000_000_000) };
        let le = |x: &S, y: &S| x.clone() <= y.clone() + tol.clone();
        let eq = |x: &S, y: &S| le(x, y) && le(y, x);
        if eq(&l0, &l1) && eq(&u0, &u1) {
            Verdict::Unchanged
        } else if le(&l1, &l0) && le(&u0, &u1) {
            Verdict::Widened
        } else if le(&l0, &l1) && le(&u1, &u0) {
            Verdict::Narrowed
        } else {
            Verdict::Shifted
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Widened => "WIDENED",
            Verdict::Narrowed => "NARROWED",
            Verdict::Shifted => "SHIFTED",
            Verdict::Unchanged => "UNCHANGED",
            Verdict::Undefined => "UNDEFINED",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn kb(vars: &[&str], rows: &[(&str, &str, BigRational)]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new(Vocabulary::new(vars.iter().copied()).unwrap());
        for (a, b, alpha) in rows {
            kb.assess_text(a, b, alpha.clone()).unwrap();
        }
        kb
    }

    fn query(kb: &KnowledgeBase, a: &str, b: &str) -> ConditionalEvent {
        let v = kb.vocab();
        ConditionalEvent::new(&v.event(a).unwrap(), &v.event(b).unwrap()).unwrap()
    }

    fn penguin() -> KnowledgeBase {
        kb(&["f", "b", "p"], &[("f", "b", q(9, 10)), ("b", "p", q(1, 1)), ("f", "p", q(0, 1))])
    }

    #[test]
    fn assessment_validation() {
        let v = Vocabulary::new(["a"]).unwrap();
        let a = v.event("a").unwrap();
        let cond = ConditionalEvent::new(&a, &v.one()).unwrap();
        assert!(matches!(
            ConditionalAssessment::new(cond.clone(), q(3, 2)),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(ConditionalAssessment::new(cond, q(-1, 2)).is_err());
        let degenerate = ConditionalEvent::new(&a, &v.zero()).unwrap();
        assert_eq!(
            ConditionalAssessment::new(degenerate, q(1, 2)),
            Err(Error::DegenerateConditional)
        );
    }

    #[test]
    fn system_shapes() {
        let k = kb(&["a", "b"], &[("a", "1", q(7, 10))]);
        let s = build_system(&k, &query(&k, "a", "b")).unwrap();
        assert_eq!(s.len(), 4);
        let a = k.vocab().event("a").unwrap();
        for (cell, tag) in s.cells.iter().zip(&s.pi[0]) {
            let expected = if cell.leq(&a).unwrap() { Tag::One } else { Tag::Zero };
            assert_eq!(*tag, expected);
        }

        let k = kb(&["a", "b"], &[]);
        let s = build_system(&k, &query(&k, "a", "1")).unwrap();
        let a = k.vocab().event("a").unwrap();
        assert_eq!(s.cells, vec![a.complement(), a]);
        assert_eq!(s.rows(), 0);

        let k = penguin();
        let s = build_system(&k, &query(&k, "f", "b & p")).unwrap();
        // generators fb, b, bp, p, fp, fbp: only f~b~p and ~f~b~p share a
        // signature
        assert_eq!(s.len(), 7);
        assert!(s.len() <= 1 << (2 * (k.len() + 1)));
        for (i, row) in s.pi.iter().enumerate() {
            let cond = &k.assessments()[i].cond;
            for (cell, tag) in s.cells.iter().zip(row) {
                let expected = if cell.leq(cond.numerator()).unwrap() {
                    Tag::One
                } else if cell.leq(&cond.refuter()).unwrap() {
                    Tag::Zero
                } else {
                    Tag::AlphaSlot
                };
                assert_eq!(*tag, expected);
            }
        }
    }

    #[test]
    fn degenerate_query_rejected() {
        let k = kb(&["a"], &[]);
        assert_eq!(
            build_system(&k, &query(&k, "a", "0")),
            Err(Error::DegenerateConditional)
        );
    }

    #[test]
    fn residual_forms() {
        let k = kb(&["a"], &[("a", "1", q(7, 10))]);
        let s = build_system(&k, &query(&k, "a", "1")).unwrap();
        let (coded, product) = s.row_residuals(&[0.5, 0.5], 0).unwrap();
        assert!((coded - 0.2).abs() < 1e-15 && (product - 0.2).abs() < 1e-15);
        assert!(matches!(s.row_residual(&[0.5, 0.5], 1), Err(Error::IndexOutOfRange { .. })));

        let k = kb(&["a", "b"], &[("a", "b", q(3, 10))]);
        let s = build_system(&k, &query(&k, "a", "1")).unwrap();
        // all mass outside b
        let masses: Vec<BigRational> = s
            .cells
            .iter()
            .map(|c| if c.leq(&k.vocab().event("~b").unwrap()).unwrap() { q(1, 2) } else { q(0, 1) })
            .collect();
        assert_eq!(s.row_residuals(&masses, 0).unwrap(), (q(0, 1), q(0, 1)));
    }

    #[test]
    fn feasibility_examples() {
        assert!(feasible(&kb(&["a"], &[])).unwrap());
        assert!(!feasible(&kb(&["a"], &[("a", "1", q(3, 10)), ("a", "1", q(6, 10))])).unwrap());
        // P(a|b) = 0.2 forces P(a) ≤ 0.1 + P(~b) = 0.6 < 0.7
        assert!(!feasible(&kb(
            &["a", "b"],
            &[("a", "1", q(7, 10)), ("b", "1", q(1, 2)), ("a", "b", q(1, 5))]
        ))
        .unwrap());
        assert!(feasible(&kb(
            &["a", "b"],
            &[("a", "1", q(7, 10)), ("b", "1", q(1, 2)), ("a", "b", q(2, 5))]
        ))
        .unwrap());
        let f = feasibility::<f64>(&kb(&["a"], &[("a", "1", q(3, 10)), ("a", "1", q(6, 10))])).unwrap();
        assert!(!f.feasible && f.phase_one > 0.0);
        assert!(feasible(&penguin()).unwrap());
    }

    #[test]
    fn bounds_examples_exact() {
        let k = kb(&["a", "b"], &[("a", "1", q(7, 10)), ("b", "1", q(1, 2))]);
        let r = bounds::<BigRational>(&k, &query(&k, "a", "b")).unwrap();
        assert_eq!(r.interval(), Some((q(2, 5), q(1, 1))));

        let k = kb(&["a", "b"], &[("a", "b", q(9, 10)), ("b", "1", q(1, 2))]);
        let r = bounds::<BigRational>(&k, &query(&k, "a", "1")).unwrap();
        assert_eq!(r.interval(), Some((q(9, 20), q(19, 20))));

        let k = kb(&["f", "b", "p"], &[("f", "b", q(9, 10))]);
        let r = bounds::<BigRational>(&k, &query(&k, "f", "b & p")).unwrap();
        assert_eq!(r.interval(), Some((q(0, 1), q(1, 1))));

        let k = penguin();
        let r = bounds::<BigRational>(&k, &query(&k, "f", "b & p")).unwrap();
        assert!(r.feasible && r.conditionable);
        assert_eq!(r.interval(), Some((q(0, 1), q(0, 1))));
    }

    #[test]
    fn bounds_float_mode() {
        let k = kb(&["a", "b"], &[("a", "1", q(7, 10)), ("b", "1", q(1, 2))]);
        let r = bounds::<f64>(&k, &query(&k, "a", "b")).unwrap();
        let (lo, hi) = r.interval().unwrap();
        assert!((lo - 0.4).abs() < 1e-9 && (hi - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unconditionable() {
        let k = kb(&["a"], &[("a", "1", q(3, 10)), ("a", "1", q(6, 10))]);
        let r = bounds::<BigRational>(&k, &query(&k, "a", "1")).unwrap();
        assert!(!r.feasible && !r.conditionable && r.lower.is_none());

        let k = kb(&["a", "b"], &[("b", "1", q(0, 1))]);
        let r = bounds::<BigRational>(&k, &query(&k, "a", "b")).unwrap();
        assert!(r.feasible && !r.conditionable && r.upper.is_none());
        assert_eq!(r.max_condition, Some(q(0, 1)));

        let mut k = kb(&["a", "b"], &[]);
        let not_b = k.vocab().event("~b").unwrap();
        k.observe(&not_b).unwrap();
        let r = bounds::<f64>(&k, &query(&k, "a", "b")).unwrap();
        assert!(r.feasible && !r.conditionable);
    }

    #[test]
    fn evidence_is_folded_into_query() {
        let mut k = kb(&["f", "b", "p"], &[("f", "b", q(9, 10))]);
        let p = k.vocab().event("p").unwrap();
        k.observe(&p).unwrap();
        let r = bounds::<BigRational>(&k, &query(&k, "f", "b")).unwrap();
        assert_eq!(r.interval(), Some((q(0, 1), q(1, 1))));
        assert_eq!(r.query, query(&k, "f", "b & p"));
    }

    #[test]
    fn compare_examples() {
        let k = kb(&["f", "b", "p"], &[("f", "b", q(9, 10))]);
        let base = query(&k, "f", "b");
        let p = k.vocab().event("p").unwrap();
        let (r0, r1) = compare::<BigRational>(&k, &base, &p).unwrap();
        assert_eq!(r0.interval(), Some((q(9, 10), q(9, 10))));
        assert_eq!(r1.interval(), Some((q(0, 1), q(1, 1))));
        assert_eq!(Verdict::classify(&r0, &r1), Verdict::Widened);

        let (r0, r1) = compare::<BigRational>(&k, &base, &k.vocab().one()).unwrap();
        assert_eq!(r0, r1);
        assert_eq!(Verdict::classify(&r0, &r1), Verdict::Unchanged);

        let k = penguin();
        let (r0, r1) = compare::<BigRational>(&k, &base, &p).unwrap();
        assert_eq!(r0.interval(), Some((q(9, 10), q(9, 10))));
        assert_eq!(r1.interval(), Some((q(0, 1), q(0, 1))));
        assert_eq!(Verdict::classify(&r0, &r1), Verdict::Shifted);
    }

    #[test]
    fn witnesses_attain_bounds() {
        let k = penguin();
        let r = bounds::<BigRational>(&k, &query(&k, "f", "b & p")).unwrap();
        let system = build_system(&k, &query(&k, "f", "b & p")).unwrap();
        for (w, bound) in [(&r.witness_low, &r.lower), (&r.witness_high, &r.upper)] {
            let w = w.as_ref().unwrap();
            for row in 0..system.rows() {
                assert!(system.row_residual(w.masses(), row).unwrap().is_zero());
            }
            assert_eq!(&w.cond_prob(&r.query).unwrap(), bound.as_ref().unwrap());
        }
    }
}
