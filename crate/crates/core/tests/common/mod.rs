#![allow(dead_code)]

use condlogic::{ConditionalEvent, Event, KnowledgeBase, Vocabulary};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn vocab(k: usize) -> Vocabulary {
    Vocabulary::new(["a", "b", "c", "d", "e"].into_iter().take(k)).unwrap()
}

pub fn kb_from(vars: &[&str], rows: &[(&str, &str, BigRational)]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new(Vocabulary::new(vars.iter().copied()).unwrap());
    for (a, b, alpha) in rows {
        kb.assess_text(a, b, alpha.clone()).unwrap();
    }
    kb
}

pub fn cond(v: &Vocabulary, a: &str, b: &str) -> ConditionalEvent {
    ConditionalEvent::new(&v.event(a).unwrap(), &v.event(b).unwrap()).unwrap()
}

pub fn random_event(v: &Vocabulary, rng: &mut impl Rng, nonzero: bool) -> Event {
    loop {
        let mut e = v.zero();
        for j in 0..v.atom_count() {
            if rng.random_bool(0.5) {
                e = &e | &v.atom(j);
            }
        }
        if !nonzero || !e.is_zero() {
            return e;
        }
    }
}

pub fn random_query(v: &Vocabulary, rng: &mut impl Rng) -> ConditionalEvent {
    let a = random_event(v, rng, false);
    let b = random_event(v, rng, true);
    ConditionalEvent::new(&a, &b).unwrap()
}

/// Random KB with `n ≤ 3` assessments over `k ≤ 3` variables and alphas
/// at resolution 1/20, plus a random query.
pub fn random_kb(seed: u64) -> (KnowledgeBase, ConditionalEvent) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=3);
    let n = rng.random_range(1..=3);
    let v = vocab(k);
    let mut kb = KnowledgeBase::new(v.clone());
    for _ in 0..n {
        let a = random_event(&v, &mut rng, false);
        let b = random_event(&v, &mut rng, true);
        kb.assess(&a, &b, q(rng.random_range(0..=20), 20)).unwrap();
    }
    let query = random_query(&v, &mut rng);
    (kb, query)
}

/// A strictly positive hidden model on atoms with weights in 1..=20.
pub fn hidden_model(v: &Vocabulary, rng: &mut impl Rng) -> Vec<u64> {
    (0..v.atom_count()).map(|_| rng.random_range(1..=20)).collect()
}

pub fn hidden_cond_prob(weights: &[u64], ce: &ConditionalEvent) -> BigRational {
    let mass = |e: &Event| -> i64 { e.atoms().map(|j| weights[j] as i64).sum() };
    q(mass(ce.numerator()), mass(ce.antecedent()))
}
