//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage/IO/parse error, 2 infeasible knowledge
//! base, 3 query not conditionable.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use crate::conditional::ConditionalEvent;
use crate::entailment::{bounds, compare, feasibility, BoundsReport, KnowledgeBase, Verdict};
use crate::error::Error;
use crate::kbfile::{load_kb, parse_query, KbFile};
use crate::oracle::{exhaustive_law_check, grid_bounds, sampled_bounds, GridSpec, Law};
use crate::probability::ProbabilityModel;
use crate::scalar::Scalar;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NOT_CONDITIONABLE: i32 = 3;

const SAMPLED_DRAWS: u64 = 200_000;

#[derive(Debug, Parser)]
#[command(name = "condlogic", version, about = "Conditional probability bounds from conditional assessments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Flags {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Use exact rational arithmetic and print rationals.
    #[arg(long)]
    pub exact: bool,
    /// Also run the brute-force grid oracle at resolution N.
    #[arg(long, value_name = "N")]
    pub oracle: Option<u32>,
    /// Seed for the sampling fallback of the oracle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the knowledge base admits a probability model.
    Check {
        kb: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Bounds on a query such as `P(f | b & p)`.
    Query {
        kb: PathBuf,
        query: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Bounds before and after conjoining extra evidence to the antecedent.
    Compare {
        kb: PathBuf,
        base: String,
        extra: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Exhaustively check the conditional-event algebra laws.
    Laws {
        /// Number of variables (1 or 2).
        #[arg(short, default_value_t = 2)]
        k: usize,
        /// Restrict to one law, e.g. `order_equiv`.
        #[arg(long)]
        law: Option<String>,
    },
}

/// Result of one command: what to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { kb, flags } => cmd_check(&kb, &flags),
        Command::Query { kb, query, flags } => cmd_query(&kb, &query, &flags),
        Command::Compare { kb, base, extra, flags } => cmd_compare(&kb, &base, &extra, &flags),
        Command::Laws { k, law } => cmd_laws(k, law.as_deref()),
    }
}

fn format_scalar<S: Scalar>(x: &S) -> String {
    if S::EXACT {
        x.to_string()
    } else {
        format_f64(x.to_f64())
    }
}

fn format_f64(x: f64) -> String {
    let rounded = (x * 1e12).round() / 1e12 + 0.0;
    format!("{rounded}")
}

fn json_number<S: Scalar>(x: &Option<S>) -> Option<f64> {
    x.as_ref().map(|v| (v.to_f64() * 1e12).round() / 1e12 + 0.0)
}

fn load(path: &Path) -> Result<KbFile, Outcome> {
    load_kb(path).map_err(Outcome::error)
}

#[derive(Serialize)]
struct CheckJson {
    feasible: bool,
    phase_one: f64,
}

pub fn cmd_check(path: &Path, flags: &Flags) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    if flags.exact {
        check_with::<BigRational>(&file, flags)
    } else {
        check_with::<f64>(&file, flags)
    }
}

fn check_with<S: Scalar>(file: &KbFile, flags: &Flags) -> Outcome {
    let report = match feasibility::<S>(&file.kb) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let code = if report.feasible { EXIT_OK } else { EXIT_INFEASIBLE };
    if flags.json {
        let json = CheckJson { feasible: report.feasible, phase_one: report.phase_one.to_f64() };
        return Outcome::ok(code, serde_json::to_string(&json).expect("serializable") + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "feasible: {}", report.feasible);
    let _ = writeln!(out, "assessments: {}", file.kb.len());
    if !report.feasible {
        let _ = writeln!(out, "phase-one residual: {}", format_scalar(&report.phase_one));
        let culprits = removable_rows::<S>(&file.kb);
        if !culprits.is_empty() {
            let _ = writeln!(out, "dropping any one of these restores feasibility:");
            for i in culprits {
                let (line, text) = &file.labels[i];
                let _ = writeln!(out, "  line {line}: {text}");
            }
        }
    }
    Outcome::ok(code, out)
}

/// Assessments whose removal alone makes the rest feasible.
fn removable_rows<S: Scalar>(kb: &KnowledgeBase) -> Vec<usize> {
    (0..kb.len())
        .filter(|&skip| {
            let mut reduced = KnowledgeBase::new(kb.vocab().clone());
            let _ = reduced.observe(kb.evidence());
            for (i, a) in kb.assessments().iter().enumerate() {
                if i != skip {
                    let _ = reduced.assert(a.clone());
                }
            }
            feasibility::<S>(&reduced).map(|f| f.feasible).unwrap_or(false)
        })
        .collect()
}

#[derive(Serialize)]
struct BoundsJson {
    feasible: bool,
    conditionable: bool,
    lower: Option<f64>,
    upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleJson>,
}

#[derive(Serialize, Clone)]
struct OracleJson {
    method: &'static str,
    resolution: u32,
    tolerance: f64,
    lower: Option<f64>,
    upper: Option<f64>,
    samples: u64,
}

impl<S: Scalar> From<&BoundsReport<S>> for BoundsJson {
    fn from(r: &BoundsReport<S>) -> Self {
        BoundsJson {
            feasible: r.feasible,
            conditionable: r.conditionable,
            lower: json_number(&r.lower),
            upper: json_number(&r.upper),
            oracle: None,
        }
    }
}

fn exit_code<S>(r: &BoundsReport<S>) -> i32 {
    if !r.feasible {
        EXIT_INFEASIBLE
    } else if !r.conditionable {
        EXIT_NOT_CONDITIONABLE
    } else {
        EXIT_OK
    }
}

fn interval_text<S: Scalar>(r: &BoundsReport<S>) -> String {
    match (&r.lower, &r.upper) {
        (Some(lo), Some(hi)) => format!("[{}, {}]", format_scalar(lo), format_scalar(hi)),
        _ if !r.feasible => "infeasible".into(),
        _ => "not conditionable".into(),
    }
}

fn write_witness<S: Scalar>(out: &mut String, title: &str, model: &ProbabilityModel<S>, kb: &KnowledgeBase) {
    let _ = writeln!(out, "{title}:");
    for (cell, mass) in model.cells().iter().zip(model.masses()) {
        if !mass.is_zero() {
            let _ = writeln!(out, "  {:>14}  {}", format_scalar(mass), cell.to_dnf(kb.vocab()));
        }
    }
}

fn run_oracle(kb: &KnowledgeBase, query: &ConditionalEvent, n: u32, exact: bool, seed: u64) -> Result<OracleJson, Error> {
    let spec = if exact { GridSpec::exact(n) } else { GridSpec::relaxed(n) };
    let to_f64 = |r: &BigRational| Scalar::to_f64(r);
    match grid_bounds(kb, query, &spec) {
        Ok(g) => Ok(OracleJson {
            method: "grid",
            resolution: n,
            tolerance: spec.tolerance,
            lower: Some(to_f64(&g.lower)),
            upper: Some(to_f64(&g.upper)),
            samples: g.samples,
        }),
        Err(Error::NoFeasibleSample) => Ok(OracleJson {
            method: "grid",
            resolution: n,
            tolerance: spec.tolerance,
            lower: None,
            upper: None,
            samples: 0,
        }),
        Err(Error::GuardRail { .. }) => {
            let tolerance = 1.0 / (2.0 * f64::from(n));
            match sampled_bounds(kb, query, SAMPLED_DRAWS, tolerance, seed) {
                Ok(s) => Ok(OracleJson {
                    method: "sampled",
                    resolution: n,
                    tolerance,
                    lower: Some(s.lower),
                    upper: Some(s.upper),
                    samples: s.samples,
                }),
                Err(Error::NoFeasibleSample) => Ok(OracleJson {
                    method: "sampled",
                    resolution: n,
                    tolerance,
                    lower: None,
                    upper: None,
                    samples: 0,
                }),
                Err(e) => Err(e),
            }
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_query(path: &Path, query_text: &str, flags: &Flags) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let query = match parse_query(query_text, file.kb.vocab()) {
        Ok(q) => q,
        Err(e) => return Outcome::error(format!("query: {e}")),
    };
    if flags.exact {
        query_with::<BigRational>(&file.kb, &query, query_text, flags)
    } else {
        query_with::<f64>(&file.kb, &query, query_text, flags)
    }
}

fn query_with<S: Scalar>(kb: &KnowledgeBase, query: &ConditionalEvent, text: &str, flags: &Flags) -> Outcome {
    let report = match bounds::<S>(kb, query) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let oracle = match flags.oracle {
        Some(n) => match run_oracle(kb, query, n, S::EXACT, flags.seed) {
            Ok(o) => Some(o),
            Err(e) => return Outcome::error(format!("oracle: {e}")),
        },
        None => None,
    };
    let code = exit_code(&report);
    if flags.json {
        let mut json = BoundsJson::from(&report);
        json.oracle = oracle;
        return Outcome::ok(code, serde_json::to_string(&json).expect("serializable") + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "query: {}", text.trim());
    let _ = writeln!(out, "feasible: {}", report.feasible);
    let _ = writeln!(out, "conditionable: {}", report.conditionable);
    if let (Some(lo), Some(hi)) = (&report.lower, &report.upper) {
        let _ = writeln!(out, "lower: {}", format_scalar(lo));
        let _ = writeln!(out, "upper: {}", format_scalar(hi));
    }
    if let Some(w) = &report.witness_low {
        write_witness(&mut out, "witness for lower bound", w, kb);
    }
    if let Some(w) = &report.witness_high {
        write_witness(&mut out, "witness for upper bound", w, kb);
    }
    if let Some(o) = oracle {
        let range = match (o.lower, o.upper) {
            (Some(lo), Some(hi)) => format!("[{}, {}]", format_f64(lo), format_f64(hi)),
            _ => "no feasible point".into(),
        };
        let _ = writeln!(
            out,
            "oracle ({}, N={}, eta={}): {range} from {} points",
            o.method,
            o.resolution,
            format_f64(o.tolerance),
            o.samples
        );
    }
    Outcome::ok(code, out)
}

#[derive(Serialize)]
struct CompareJson {
    base: BoundsJson,
    extended: BoundsJson,
    verdict: &'static str,
}

pub fn cmd_compare(path: &Path, base_text: &str, extra_text: &str, flags: &Flags) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let vocab = file.kb.vocab();
    let base = match parse_query(base_text, vocab) {
        Ok(q) => q,
        Err(e) => return Outcome::error(format!("base query: {e}")),
    };
    let extra = match vocab.event(extra_text) {
        Ok(e) => e,
        Err(e) => return Outcome::error(format!("extra evidence: {e}")),
    };
    if flags.exact {
        compare_with::<BigRational>(&file.kb, &base, &extra, base_text, extra_text, flags)
    } else {
        compare_with::<f64>(&file.kb, &base, &extra, base_text, extra_text, flags)
    }
}

fn compare_with<S: Scalar>(
    kb: &KnowledgeBase,
    base: &ConditionalEvent,
    extra: &crate::formula::Event,
    base_text: &str,
    extra_text: &str,
    flags: &Flags,
) -> Outcome {
    let (before, after) = match compare::<S>(kb, base, extra) {
        Ok(pair) => pair,
        Err(e) => return Outcome::error(e),
    };
    let verdict = Verdict::classify(&before, &after);
    let code = if !before.feasible {
        EXIT_INFEASIBLE
    } else if verdict == Verdict::Undefined {
        EXIT_NOT_CONDITIONABLE
    } else {
        EXIT_OK
    };
    if flags.json {
        let json = CompareJson {
            base: BoundsJson::from(&before),
            extended: BoundsJson::from(&after),
            verdict: verdict.label(),
        };
        return Outcome::ok(code, serde_json::to_string(&json).expect("serializable") + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "base:     {}  {}", base_text.trim(), interval_text(&before));
    let _ = writeln!(out, "extended: {} with evidence {}  {}", base_text.trim(), extra_text.trim(), interval_text(&after));
    let _ = writeln!(out, "verdict: {}", verdict.label());
    let _ = writeln!(
        out,
        "note: added evidence changes the query, so its interval may move either way; \
         added assessments only ever narrow an interval for a fixed query"
    );
    Outcome::ok(code, out)
}

pub fn cmd_laws(k: usize, law: Option<&str>) -> Outcome {
    let laws: Vec<Law> = match law {
        Some(name) => match name.parse() {
            Ok(l) => vec![l],
            Err(e) => return Outcome::error(e),
        },
        None => Law::ALL.to_vec(),
    };
    let mut out = String::new();
    let mut failed = false;
    for law in laws {
        let found = match exhaustive_law_check(k, law) {
            Ok(c) => c,
            Err(e) => return Outcome::error(e),
        };
        let tag = if law.is_measured_only() { " (measured)" } else { "" };
        let _ = writeln!(out, "{:<18} {} counterexamples{tag}", law.name(), found.len());
        for c in found.iter().take(3) {
            let _ = writeln!(out, "    {}", c.detail);
        }
        failed |= !found.is_empty() && !law.is_measured_only();
    }
    Outcome::ok(if failed { EXIT_ERROR } else { EXIT_OK }, out)
}
