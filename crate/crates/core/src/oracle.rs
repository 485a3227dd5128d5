//! Brute-force cross-checks for the entailment engine and the algebra.
//!
//! `grid_bounds` enumerates every probability vector whose masses are
//! multiples of `1/N` and never touches the LP path: it groups atoms into
//! cells itself and tests assessments by direct membership counts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::conditional::ConditionalEvent;
use crate::entailment::KnowledgeBase;
use crate::error::{Error, Result};
use crate::formula::{Event, Vocabulary};
use crate::probability::{random_model, ProbabilityModel};

pub const COMPOSITION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub resolution: u32,
    /// Accepted `|P(a_i b_i) − α_i P(b_i)|`.
    pub tolerance: f64,
}

impl GridSpec {
    /// `η = 0`: only exactly feasible grid points.
    pub fn exact(resolution: u32) -> Self {
        GridSpec { resolution, tolerance: 0.0 }
    }

    /// `η = 1/(2N)`.
    pub fn relaxed(resolution: u32) -> Self {
        GridSpec { resolution, tolerance: 1.0 / (2.0 * f64::from(resolution)) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridBounds {
    pub lower: BigRational,
    pub upper: BigRational,
    /// Feasible grid points with `P(b*) > 0`.
    pub samples: u64,
}

/// `C(n + k − 1, k − 1)`, saturating.
pub fn composition_count(n: u32, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(n == 0);
    }
    let k = (parts - 1) as u128;
    let total = u128::from(n) + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(total - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Row {
    /// `q_i·[cell ≤ a_i b_i] − p_i·[cell ≤ b_i]` for `α_i = p_i/q_i`.
    weights: Vec<i64>,
    slack: f64,
}

struct Problem {
    rows: Vec<Row>,
    target: Vec<bool>,
    condition: Vec<bool>,
    exact: bool,
}

#[derive(Clone, Copy)]
struct Extremes {
    // ratios as (numerator, denominator) with denominator > 0
    low: Option<(u64, u64)>,
    high: Option<(u64, u64)>,
    samples: u64,
}

fn ratio_less(a: (u64, u64), b: (u64, u64)) -> bool {
    u128::from(a.0) * u128::from(b.1) < u128::from(b.0) * u128::from(a.1)
}

impl Extremes {
    const EMPTY: Extremes = Extremes { low: None, high: None, samples: 0 };

    fn record(&mut self, num: u64, den: u64) {
        let r = (num, den);
        if self.low.is_none_or(|l| ratio_less(r, l)) {
            self.low = Some(r);
        }
        if self.high.is_none_or(|h| ratio_less(h, r)) {
            self.high = Some(r);
        }
        self.samples += 1;
    }

    fn merge(self, other: Extremes) -> Extremes {
        let pick = |a: Option<(u64, u64)>, b: Option<(u64, u64)>, want_less: bool| match (a, b) {
            (Some(x), Some(y)) => Some(if ratio_less(y, x) == want_less { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        };
        Extremes {
            low: pick(self.low, other.low, true),
            high: pick(self.high, other.high, false),
            samples: self.samples + other.samples,
        }
    }
}

/// Atoms grouped by membership across `events`, in first-atom order.
fn group_atoms(vocab: &Vocabulary, events: &[&Event]) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    for atom in 0..vocab.atom_count() {
        let key: Vec<bool> = events.iter().map(|e| e.contains(atom)).collect();
        let idx = *seen.entry(key).or_insert_with(|| {
            cells.push(Vec::new());
            cells.len() - 1
        });
        cells[idx].push(atom);
    }
    cells
}

fn small_ratio(r: &BigRational) -> Result<(i64, i64)> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(p), Some(q)) if q.checked_mul(i64::from(u32::MAX)).is_some() => Ok((p, q)),
        _ => Err(Error::InvalidModel(format!("probability {r} is too fine for grid enumeration"))),
    }
}

impl Problem {
    fn new(kb: &KnowledgeBase, query: &ConditionalEvent, spec: &GridSpec) -> Result<(Problem, usize)> {
        let vocab = kb.vocab();
        let condition = query.antecedent().and(kb.evidence())?;
        let target = query.numerator().and(&condition)?;
        let mut events: Vec<&Event> = Vec::new();
        for a in kb.assessments() {
            events.push(a.cond.numerator());
            events.push(a.cond.antecedent());
        }
        events.push(&target);
        events.push(&condition);
        let cells = group_atoms(vocab, &events);
        let inside = |e: &Event| -> Vec<bool> { cells.iter().map(|c| e.contains(c[0])).collect() };
        let n = f64::from(spec.resolution);
        let rows = kb
            .assessments()
            .iter()
            .map(|a| {
                let (p, q) = small_ratio(&a.alpha)?;
                let num = inside(a.cond.numerator());
                let ant = inside(a.cond.antecedent());
                let weights = num
                    .iter()
                    .zip(&ant)
                    .map(|(&x, &y)| if x { q } else { 0 } - if y { p } else { 0 })
                    .collect();
                Ok(Row { weights, slack: spec.tolerance * n * q as f64 })
            })
            .collect::<Result<Vec<_>>>()?;
        let problem = Problem {
            rows,
            target: inside(&target),
            condition: inside(&condition),
            exact: spec.tolerance == 0.0,
        };
        Ok((problem, cells.len()))
    }

    fn accept(&self, parts: &[u32], out: &mut Extremes) {
        for row in &self.rows {
            let total: i64 = row.weights.iter().zip(parts).map(|(&w, &x)| w * i64::from(x)).sum();
            let ok = if self.exact { total == 0 } else { (total.unsigned_abs() as f64) <= row.slack };
            if !ok {
                return;
            }
        }
        let mut num = 0u64;
        let mut den = 0u64;
        for ((&x, &t), &c) in parts.iter().zip(&self.target).zip(&self.condition) {
            if c {
                den += u64::from(x);
                if t {
                    num += u64::from(x);
                }
            }
        }
        if den > 0 {
            out.record(num, den);
        }
    }

    fn enumerate(&self, parts: &mut Vec<u32>, remaining: u32, cells: usize, out: &mut Extremes) {
        if parts.len() + 1 == cells {
            parts.push(remaining);
            self.accept(parts, out);
            parts.pop();
            return;
        }
        for x in 0..=remaining {
            parts.push(x);
            self.enumerate(parts, remaining - x, cells, out);
            parts.pop();
        }
    }
}

/// Extreme values of `P(a*)/P(b*)` over all grid models satisfying `kb`.
pub fn grid_bounds(kb: &KnowledgeBase, query: &ConditionalEvent, spec: &GridSpec) -> Result<GridBounds> {
    if spec.resolution == 0 || spec.tolerance < 0.0 || spec.tolerance.is_nan() {
        return Err(Error::InvalidModel("grid resolution must be ≥ 1 and tolerance ≥ 0".into()));
    }
    let (problem, cells) = Problem::new(kb, query, spec)?;
    let count = composition_count(spec.resolution, cells);
    if count > COMPOSITION_LIMIT {
        return Err(Error::GuardRail { count, limit: COMPOSITION_LIMIT });
    }
    let n = spec.resolution;
    let found = if cells == 1 {
        let mut out = Extremes::EMPTY;
        problem.accept(&[n], &mut out);
        out
    } else {
        (0..=n)
            .into_par_iter()
            .map(|first| {
                let mut out = Extremes::EMPTY;
                let mut parts = Vec::with_capacity(cells);
                parts.push(first);
                problem.enumerate(&mut parts, n - first, cells, &mut out);
                out
            })
            .reduce(|| Extremes::EMPTY, Extremes::merge)
    };
    match (found.low, found.high) {
        (Some(lo), Some(hi)) => Ok(GridBounds {
            lower: BigRational::new(BigInt::from(lo.0), BigInt::from(lo.1)),
            upper: BigRational::new(BigInt::from(hi.0), BigInt::from(hi.1)),
            samples: found.samples,
        }),
        _ => Err(Error::NoFeasibleSample),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledBounds {
    pub lower: f64,
    pub upper: f64,
    pub samples: u64,
}

/// Random-simplex fallback for when the grid is too large. Only points
/// within `tolerance` of every assessment count.
pub fn sampled_bounds(
    kb: &KnowledgeBase,
    query: &ConditionalEvent,
    draws: u64,
    tolerance: f64,
    seed: u64,
) -> Result<SampledBounds> {
    let vocab = kb.vocab();
    let condition = query.antecedent().and(kb.evidence())?;
    let target = query.numerator().and(&condition)?;
    let mut events: Vec<&Event> = Vec::new();
    for a in kb.assessments() {
        events.push(a.cond.numerator());
        events.push(a.cond.antecedent());
    }
    events.push(&target);
    events.push(&condition);
    let cells = group_atoms(vocab, &events);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<f64> = kb.assessments().iter().map(|a| a.alpha.to_f64().unwrap_or(f64::NAN)).collect();
    let mut found: Option<(f64, f64)> = None;
    let mut samples = 0;
    for _ in 0..draws {
        let raw: Vec<f64> = (0..cells.len()).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = raw.iter().sum();
        let mass = |e: &Event| -> f64 {
            cells.iter().zip(&raw).filter(|(c, _)| e.contains(c[0])).map(|(_, x)| x / total).sum()
        };
        let ok = kb.assessments().iter().zip(&alphas).all(|(a, alpha)| {
            (mass(a.cond.numerator()) - alpha * mass(a.cond.antecedent())).abs() <= tolerance
        });
        let den = mass(&condition);
        if ok && den > 0.0 {
            let r = mass(&target) / den;
            found = Some(found.map_or((r, r), |(lo, hi)| (lo.min(r), hi.max(r))));
            samples += 1;
        }
    }
    let (lower, upper) = found.ok_or(Error::NoFeasibleSample)?;
    Ok(SampledBounds { lower, upper, samples })
}

/// Algebraic properties checkable by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    DemorganAnd,
    DemorganOr,
    OrderEquiv,
    Involution,
    Idempotence,
    Commutativity,
    EmbeddingHom,
    Antisymmetry,
    Transitivity,
    MonotoneP,
    AssociativityAnd,
    AssociativityOr,
    Distributivity,
}

impl Law {
    pub const ALL: [Law; 13] = [
        Law::DemorganAnd,
        Law::DemorganOr,
        Law::OrderEquiv,
        Law::Involution,
        Law::Idempotence,
        Law::Commutativity,
        Law::EmbeddingHom,
        Law::Antisymmetry,
        Law::Transitivity,
        Law::MonotoneP,
        Law::AssociativityAnd,
        Law::AssociativityOr,
        Law::Distributivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::DemorganAnd => "demorgan_and",
            Law::DemorganOr => "demorgan_or",
            Law::OrderEquiv => "order_equiv",
            Law::Involution => "involution",
            Law::Idempotence => "idempotence",
            Law::Commutativity => "commutativity",
            Law::EmbeddingHom => "embedding_hom",
            Law::Antisymmetry => "antisymmetry",
            Law::Transitivity => "transitivity",
            Law::MonotoneP => "monotone_P",
            Law::AssociativityAnd => "associativity_and",
            Law::AssociativityOr => "associativity_or",
            Law::Distributivity => "distributivity",
        }
    }

    /// Associativity and distributivity are measured, never relied on.
    pub fn is_measured_only(self) -> bool {
        matches!(self, Law::AssociativityAnd | Law::AssociativityOr | Law::Distributivity)
    }

    fn arity(self) -> usize {
        match self {
            Law::Involution | Law::Idempotence => 1,
            Law::Transitivity | Law::AssociativityAnd | Law::AssociativityOr | Law::Distributivity => 3,
            _ => 2,
        }
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Law> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub law: Law,
    pub detail: String,
}

pub const MONOTONE_MODELS: u64 = 200;
pub const MONOTONE_MIN_MASS: f64 = 1e-6;
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Every normalized conditional event over `vocab`: one per pair
/// (antecedent, numerator ⊆ antecedent), i.e. `3^(2^k)` of them.
pub fn all_conditionals(vocab: &Vocabulary) -> Vec<ConditionalEvent> {
    let atoms = vocab.atom_count();
    assert!(atoms <= 16, "enumeration is limited to k ≤ 4");
    let event = |mask: u32| -> Event {
        (0..atoms).filter(|j| mask >> j & 1 == 1).fold(vocab.zero(), |e, j| &e | &vocab.atom(j))
    };
    let mut out = Vec::new();
    for b in 0u32..(1 << atoms) {
        let antecedent = event(b);
        // subsets of b
        let mut a = b;
        loop {
            out.push(ConditionalEvent::new(&event(a), &antecedent).expect("same vocabulary"));
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    out
}

fn embed(vocab: &Vocabulary, e: &Event) -> ConditionalEvent {
    ConditionalEvent::unconditional(e, vocab).expect("same vocabulary")
}

struct LawContext<'a> {
    vocab: &'a Vocabulary,
    models: Vec<ProbabilityModel<f64>>,
}

impl LawContext<'_> {
    fn unary(&self, law: Law, p: &ConditionalEvent) -> Result<Option<String>> {
        Ok(match law {
            Law::Involution if p.negate().negate() != *p => Some(format!("{p:?}")),
            Law::Idempotence if p.and(p)? != *p || p.or(p)? != *p => Some(format!("{p:?}")),
            _ => None,
        })
    }

    fn binary(&self, law: Law, p: &ConditionalEvent, q: &ConditionalEvent) -> Result<Option<String>> {
        let hit = match law {
            Law::DemorganAnd => p.and(q)?.negate() != p.negate().or(&q.negate())?,
            Law::DemorganOr => p.or(q)?.negate() != p.negate().and(&q.negate())?,
            Law::OrderEquiv => p.leq(q)? != (p.and(q)? == *p),
            Law::Commutativity => p.and(q)? != q.and(p)? || p.or(q)? != q.or(p)?,
            Law::Antisymmetry => p.leq(q)? && q.leq(p)? && p != q,
            Law::EmbeddingHom => {
                let (x, y) = (p.numerator(), q.numerator());
                let (ex, ey) = (embed(self.vocab, x), embed(self.vocab, y));
                ex.and(&ey)? != embed(self.vocab, &x.and(y)?)
                    || ex.or(&ey)? != embed(self.vocab, &x.or(y)?)
                    || ex.negate() != embed(self.vocab, &x.complement())
                    || ex.leq(&ey)? != x.leq(y)?
            }
            Law::MonotoneP => {
                if !p.leq(q)? {
                    return Ok(None);
                }
                for (i, m) in self.models.iter().enumerate() {
                    let (bp, bq) = (m.prob(p.antecedent())?, m.prob(q.antecedent())?);
                    if bp < MONOTONE_MIN_MASS || bq < MONOTONE_MIN_MASS {
                        continue;
                    }
                    let (pp, pq) = (m.cond_prob(p)?, m.cond_prob(q)?);
                    if pp > pq + MONOTONE_SLACK {
                        return Ok(Some(format!("{p:?} ≤ {q:?} but model {i}: {pp} > {pq}")));
                    }
                }
                false
            }
            _ => false,
        };
        Ok(hit.then(|| format!("{p:?}, {q:?}")))
    }

    fn ternary(
        &self,
        law: Law,
        p: &ConditionalEvent,
        q: &ConditionalEvent,
        r: &ConditionalEvent,
    ) -> Result<Option<String>> {
        let hit = match law {
            Law::Transitivity => p.leq(q)? && q.leq(r)? && !p.leq(r)?,
            Law::AssociativityAnd => p.and(q)?.and(r)? != p.and(&q.and(r)?)?,
            Law::AssociativityOr => p.or(q)?.or(r)? != p.or(&q.or(r)?)?,
            Law::Distributivity => p.and(&q.or(r)?)? != p.and(q)?.or(&p.and(r)?)?,
            _ => false,
        };
        Ok(hit.then(|| format!("{p:?}, {q:?}, {r:?}")))
    }
}

fn context(vocab: &Vocabulary, law: Law) -> Result<LawContext<'_>> {
    let models = if law == Law::MonotoneP {
        let atoms: Vec<Event> = (0..vocab.atom_count()).map(|j| vocab.atom(j)).collect();
        (0..MONOTONE_MODELS).map(|seed| random_model(atoms.clone(), seed)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(LawContext { vocab, models })
}

fn small_vocab(k: usize) -> Result<Vocabulary> {
    Vocabulary::new((0..k).map(|i| format!("v{i}")))
}

/// Checks `law` over every conditional event (pair, triple) at `k ≤ 2`
/// variables and returns all violations.
pub fn exhaustive_law_check(k: usize, law: Law) -> Result<Vec<Counterexample>> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidVocabulary(format!("exhaustive checks need 1 ≤ k ≤ 2, got {k}")));
    }
    let vocab = small_vocab(k)?;
    let all = all_conditionals(&vocab);
    let ctx = context(&vocab, law)?;
    let detail: Vec<String> = match law.arity() {
        1 => all.iter().map(|p| ctx.unary(law, p)).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect(),
        2 => all
            .par_iter()
            .map(|p| {
                all.iter()
                    .map(|q| ctx.binary(law, p, q))
                    .collect::<Result<Vec<_>>>()
                    .map(|v| v.into_iter().flatten().collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect(),
        _ => all
            .par_iter()
            .map(|p| {
                let mut hits = Vec::new();
                for q in &all {
                    for r in &all {
                        if let Some(h) = ctx.ternary(law, p, q, r)? {
                            hits.push(h);
                        }
                    }
                }
                Ok(hits)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect(),
    };
    Ok(detail.into_iter().map(|detail| Counterexample { law, detail }).collect())
}

/// Random conditional event: uniform antecedent, uniform numerator inside it.
pub fn random_conditional(vocab: &Vocabulary, rng: &mut impl rand::Rng) -> ConditionalEvent {
    let atoms = vocab.atom_count();
    let mut a = vocab.zero();
    let mut b = vocab.zero();
    for j in 0..atoms {
        let roll: u8 = rng.random_range(0..4);
        if roll >= 2 {
            b = &b | &vocab.atom(j);
        }
        if roll == 3 {
            a = &a | &vocab.atom(j);
        }
    }
    ConditionalEvent::new(&a, &b).expect("same vocabulary")
}

/// Checks `law` on `samples` random tuples over `k` variables.
pub fn sampled_law_check(k: usize, law: Law, samples: usize, seed: u64) -> Result<Vec<Counterexample>> {
    let vocab = small_vocab(k)?;
    let ctx = context(&vocab, law)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..samples {
        let p = random_conditional(&vocab, &mut rng);
        let mut q = random_conditional(&vocab, &mut rng);
        let r = random_conditional(&vocab, &mut rng);
        // bias half the ordered laws toward related pairs
        if matches!(law, Law::Antisymmetry | Law::MonotoneP | Law::Transitivity) && rand::Rng::random_bool(&mut rng, 0.5) {
            q = p.or(&q)?;
        }
        let hit = match law.arity() {
            1 => ctx.unary(law, &p)?,
            2 => ctx.binary(law, &p, &q)?,
            _ => ctx.ternary(law, &p, &q, &r)?,
        };
        out.extend(hit.map(|detail| Counterexample { law, detail }));
    }
    Ok(out)
}
