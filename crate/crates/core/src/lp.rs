//! Dense two-phase simplex with Bland's rule.
//!
//! All variables are implicitly nonnegative. With an exact scalar type
//! every pivot decision is exact and Bland's rule guarantees termination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coefficients: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    pub sense: Sense,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub num_vars: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, point: Vec<S> },
    /// `phase_one` is the minimal total artificial infeasibility.
    Infeasible { phase_one: S },
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&S> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[S]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(sense: Sense, objective: Vec<S>) -> Self {
        let num_vars = objective.len();
        LinearProgram { sense, objective, constraints: Vec::new(), num_vars }
    }

    pub fn constrain(&mut self, coefficients: Vec<S>, relation: Relation, rhs: S) -> &mut Self {
        self.constraints.push(Constraint { coefficients, relation, rhs });
        self
    }

    pub fn with_sense(&self, sense: Sense) -> Self {
        LinearProgram { sense, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: self.objective.len(),
            });
        }
        for c in &self.constraints {
            if c.coefficients.len() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: c.coefficients.len(),
                });
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, point: &[S]) -> S {
        dot(&self.objective, point)
    }

    /// Largest constraint violation of `point` (negativity included).
    pub fn violation(&self, point: &[S]) -> S {
        let mut worst = S::zero();
        for x in point {
            if -x.clone() > worst {
                worst = -x.clone();
            }
        }
        for c in &self.constraints {
            let lhs = dot(&c.coefficients, point);
            let v = match c.relation {
                Relation::Eq => (lhs - c.rhs.clone()).abs(),
                Relation::Le => lhs - c.rhs.clone(),
                Relation::Ge => c.rhs.clone() - lhs,
            };
            if v > worst {
                worst = v;
            }
        }
        worst
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    iterations: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x = x.clone() / p.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                let updated = x.clone() - factor.clone() * p.clone();
                *x = if !S::EXACT && updated.is_zero_tol() { S::zero() } else { updated };
            }
            let updated = self.rhs[i].clone() - factor * pivot_rhs.clone();
            self.rhs[i] = if !S::EXACT && updated.is_zero_tol() { S::zero() } else { updated };
        }
        self.basis[row] = col;
    }

    fn run(&mut self, cost: &[S], allowed: usize) -> Result<Phase> {
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(Error::IterationLimit(MAX_ITERATIONS));
            }
            // Bland: lowest-index improving column.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() {
                        reduced = reduced - cb.clone() * row[j].clone();
                    }
                }
                reduced.is_negative_tol()
            });
            let Some(col) = entering else {
                return Ok(Phase::Optimal);
            };
            // Minimum ratio, ties to the lowest basic index.
            let mut leaving: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive_tol() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        let diff = ratio.clone() - best_ratio.clone();
                        if diff.is_negative_tol()
                            || (diff.is_zero_tol() && self.basis[i] < self.basis[best])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leaving else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(row, col);
            self.iterations += 1;
        }
    }
}

fn infeasibility_detected<S: Scalar>(phase_one: &S) -> bool {
    if S::EXACT {
        phase_one.is_positive()
    } else {
        phase_one.to_f64() > 1e-9
    }
}

/// Solves `lp` by the two-phase simplex method.
pub fn solve<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>> {
    lp.validate()?;
    let n = lp.num_vars;
    let m = lp.constraints.len();

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<S>, Relation, S)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Eq => Relation::Eq,
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                };
                (c.coefficients.iter().map(|x| -x.clone()).collect(), flipped, -c.rhs.clone())
            } else {
                (c.coefficients.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let structural = n + slack_count;
    let width = structural + artificial_count;

    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        iterations: 0,
    };
    let (mut next_slack, mut next_artificial) = (n, structural);
    for (coefficients, relation, rhs) in rows {
        let mut row = coefficients;
        row.resize(width, S::zero());
        match relation {
            Relation::Le => {
                row[next_slack] = S::one();
                tableau.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -S::one();
                next_slack += 1;
                row[next_artificial] = S::one();
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = S::one();
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        tableau.rows.push(row);
        tableau.rhs.push(rhs);
    }

    if artificial_count > 0 {
        let mut cost = vec![S::zero(); width];
        cost[structural..].iter_mut().for_each(|c| *c = S::one());
        // Phase one is bounded below by zero, so it always ends optimal.
        tableau.run(&cost, width)?;
        let phase_one = tableau
            .basis
            .iter()
            .zip(&tableau.rhs)
            .filter(|(&b, _)| b >= structural)
            .fold(S::zero(), |acc, (_, r)| acc + r.clone());
        if infeasibility_detected(&phase_one) {
            return Ok(LpOutcome::Infeasible { phase_one });
        }
        // Drive remaining artificials out of the basis; rows with no
        // structural entry are redundant and dropped.
        let mut i = 0;
        while i < tableau.rows.len() {
            if tableau.basis[i] >= structural {
                match (0..structural).find(|&j| !tableau.rows[i][j].is_zero_tol()) {
                    Some(j) => tableau.pivot(i, j),
                    None => {
                        tableau.rows.remove(i);
                        tableau.rhs.remove(i);
                        tableau.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![S::zero(); width];
    for (c, o) in cost.iter_mut().zip(&lp.objective) {
        *c = match lp.sense {
            Sense::Minimize => o.clone(),
            Sense::Maximize => -o.clone(),
        };
    }
    match tableau.run(&cost, structural)? {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let mut point = vec![S::zero(); n];
            for (&b, r) in tableau.basis.iter().zip(&tableau.rhs) {
                if b < n {
                    point[b] = if r.is_negative() { S::zero() } else { r.clone() };
                }
            }
            let value = lp.objective_at(&point);
            Ok(LpOutcome::Optimal { value, point })
        }
    }
}
