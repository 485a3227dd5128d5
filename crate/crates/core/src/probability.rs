//! Finite probability models: masses on the cells of a partition.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::conditional::ConditionalEvent;
use crate::error::{Error, Result};
use crate::formula::{Event, Vocabulary};
use crate::scalar::Scalar;

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityModel<S> {
    cells: Vec<Event>,
    masses: Vec<S>,
}

/// Checks that `cells` are nonempty, pairwise disjoint and cover every atom.
pub fn validate_partition(cells: &[Event]) -> Result<()> {
    let first = cells.first().ok_or_else(|| Error::InvalidModel("no cells".into()))?;
    let mut union = first.clone();
    union = union.xor(&union)?;
    for cell in cells {
        if cell.is_zero() {
            return Err(Error::InvalidModel("empty cell".into()));
        }
        if !union.is_disjoint(cell)? {
            return Err(Error::InvalidModel("cells overlap".into()));
        }
        union = union.or(cell)?;
    }
    if !union.is_one() {
        return Err(Error::InvalidModel("cells do not cover the sample space".into()));
    }
    Ok(())
}

impl<S: Scalar> ProbabilityModel<S> {
    pub fn new(cells: Vec<Event>, masses: Vec<S>) -> Result<Self> {
        if cells.len() != masses.len() {
            return Err(Error::DimensionMismatch { expected: cells.len(), found: masses.len() });
        }
        validate_partition(&cells)?;
        if masses.iter().any(|m| m.is_negative_tol()) {
            return Err(Error::InvalidModel("negative mass".into()));
        }
        let total = masses.iter().cloned().fold(S::zero(), |acc, m| acc + m);
        let off = (total - S::one()).abs();
        let ok = if S::EXACT { off.is_zero() } else { off.to_f64() <= SUM_TOLERANCE };
        if !ok {
            return Err(Error::InvalidModel(format!("masses sum to 1 + {off}")));
        }
        Ok(ProbabilityModel { cells, masses })
    }

    /// Uniform mass on every atom of `vocab`.
    pub fn uniform_atoms(vocab: &Vocabulary) -> Self {
        let n = vocab.atom_count() as i64;
        let cells = (0..vocab.atom_count()).map(|j| vocab.atom(j)).collect();
        ProbabilityModel { cells, masses: vec![S::from_ratio(1, n); n as usize] }
    }

    pub fn cells(&self) -> &[Event] {
        &self.cells
    }

    pub fn masses(&self) -> &[S] {
        &self.masses
    }

    /// Total mass of the cells contained in `x`; `x` must be a union of cells.
    pub fn prob(&self, x: &Event) -> Result<S> {
        let mut total = S::zero();
        for (cell, mass) in self.cells.iter().zip(&self.masses) {
            if cell.leq(x)? {
                total = total + mass.clone();
            } else if !cell.is_disjoint(x)? {
                return Err(Error::NotDecomposable);
            }
        }
        Ok(total)
    }

    pub fn cond_prob(&self, ce: &ConditionalEvent) -> Result<S> {
        let denominator = self.prob(ce.antecedent())?;
        if denominator.is_zero() {
            return Err(Error::ZeroAntecedent);
        }
        Ok(self.prob(ce.numerator())? / denominator)
    }

    /// `|P(a|b) − P(ab) − P(a|b)·P(b')|`.
    pub fn check_star_identity(&self, a: &Event, b: &Event) -> Result<S> {
        let ce = ConditionalEvent::new(a, b)?;
        let conditional = self.cond_prob(&ce)?;
        let joint = self.prob(&a.and(b)?)?;
        let outside = self.prob(&b.complement())?;
        Ok((conditional.clone() - joint - conditional * outside).abs())
    }

    /// Ordered `(cell DNF, mass)` pairs.
    pub fn to_pairs(&self, vocab: &Vocabulary) -> Vec<(String, String)> {
        self.cells
            .iter()
            .zip(&self.masses)
            .map(|(c, m)| (c.to_dnf(vocab), m.to_string()))
            .collect()
    }

    pub fn to_f64(&self) -> ProbabilityModel<f64> {
        ProbabilityModel {
            cells: self.cells.clone(),
            masses: self.masses.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Masses drawn uniformly from the standard simplex (normalized
/// exponentials), deterministic in `seed`.
pub fn random_model(cells: Vec<Event>, seed: u64) -> Result<ProbabilityModel<f64>> {
    validate_partition(&cells)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..cells.len()).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = draws.iter().sum();
    let masses = draws.into_iter().map(|x| x / total).collect();
    Ok(ProbabilityModel { cells, masses })
}

/// Exact random model: integer weights in `0..=resolution`, normalized.
/// Falls back to uniform weights if every draw is zero.
pub fn random_rational_model(
    cells: Vec<Event>,
    seed: u64,
    resolution: u32,
) -> Result<ProbabilityModel<BigRational>> {
    validate_partition(&cells)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<u64> =
        (0..cells.len()).map(|_| rng.random_range(0..=u64::from(resolution))).collect();
    if weights.iter().all(|&w| w == 0) {
        weights.iter_mut().for_each(|w| *w = 1);
    }
    let total: u64 = weights.iter().sum();
    let masses = weights
        .into_iter()
        .map(|w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect();
    Ok(ProbabilityModel { cells, masses })
}
