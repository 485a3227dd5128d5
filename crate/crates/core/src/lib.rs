//! Conditional-event algebra and conditional probability bounds.
//!
//! Events are sets of truth assignments over a finite vocabulary. A
//! conditional event `(a|b)` is the coset of events agreeing with `a`
//! inside `b`; a knowledge base of assessments `P(a_i|b_i) = α_i`
//! constrains a query `P(a|b)` to an interval computed by linear
//! programming over the canonical partition.

pub mod cli;
pub mod conditional;
pub mod entailment;
pub mod error;
pub mod formula;
pub mod kbfile;
pub mod lp;
pub mod oracle;
pub mod probability;
pub mod scalar;

pub use conditional::{ConditionalEvent, Interval};
pub use entailment::{
    bounds, build_system, compare, feasibility, feasible, BoundsReport, ConditionalAssessment,
    ConstraintSystem, KnowledgeBase, Tag, Verdict,
};
pub use error::{Error, Result};
pub use formula::{canonical_partition, parse_formula, Event, Formula, Vocabulary};
pub use probability::ProbabilityModel;
pub use scalar::Scalar;
