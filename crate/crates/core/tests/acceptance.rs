//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{cond, hidden_cond_prob, hidden_model, kb_from, q, random_event, random_kb, random_query, vocab};
use condlogic::cli::{cmd_check, cmd_compare, Flags, EXIT_INFEASIBLE};
use condlogic::oracle::{exhaustive_law_check, grid_bounds, GridSpec, Law};
use condlogic::probability::{random_model, random_rational_model};
use condlogic::{bounds, build_system, feasible, BoundsReport, ConditionalEvent, KnowledgeBase, Scalar};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(r: &BigRational) -> f64 {
    Scalar::to_f64(r)
}

fn write_kb(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let laws = [
        Law::OrderEquiv,
        Law::DemorganAnd,
        Law::DemorganOr,
        Law::Involution,
        Law::Idempotence,
        Law::Commutativity,
        Law::EmbeddingHom,
        Law::Antisymmetry,
        Law::Transitivity,
    ];
    for law in laws {
        let found = exhaustive_law_check(2, law).map_err(|e| e.to_string())?;
        ensure(found.is_empty(), || format!("{law}: {} counterexamples, first {}", found.len(), found[0].detail))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("{} laws, 0 counterexamples, {secs:.2}s", laws.len()))
}

fn criterion_2() -> Check {
    let found = exhaustive_law_check(2, Law::MonotoneP).map_err(|e| e.to_string())?;
    ensure(found.is_empty(), || format!("{} violations, first {}", found.len(), found[0].detail))?;
    Ok("0 violations over comparable pairs x 200 models".into())
}

fn criterion_3() -> Check {
    let v = vocab(3);
    let atoms: Vec<_> = (0..v.atom_count()).map(|j| v.atom(j)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut triples = 0;
    let mut seed = 0;
    while triples < 10_000 {
        seed += 1;
        let a = random_event(&v, &mut rng, false);
        let b = random_event(&v, &mut rng, true);
        let float = random_model(atoms.clone(), seed).unwrap();
        let exact = random_rational_model(atoms.clone(), seed, 20).unwrap();
        if exact.prob(&b).unwrap().is_zero() || float.prob(&b).unwrap() <= 0.0 {
            continue;
        }
        worst = worst.max(float.check_star_identity(&a, &b).unwrap());
        let r = exact.check_star_identity(&a, &b).unwrap();
        ensure(r.is_zero(), || format!("rational residual {r} at seed {seed}"))?;
        triples += 1;
    }
    ensure(worst <= 1e-12, || format!("float residual {worst:e}"))?;
    Ok(format!("{triples} triples, max float residual {worst:.1e}, rational residual 0"))
}

fn criterion_4() -> Check {
    let v = vocab(3);
    let p = cond(&v, "a", "b");
    let r = cond(&v, "a", "b & c");
    ensure(!p.comparable(&r).unwrap(), || "(a|b) and (a|bc) compare".into())?;
    let dir = tempfile::tempdir().unwrap();
    let path = write_kb(&dir, "birds.kb", "vars: f, b, p\nP(f | b) = 0.9\n");
    let out = cmd_compare(&path, "P(f | b)", "p", &Flags { json: true, ..Flags::default() });
    let expected = r#"{"base":{"feasible":true,"conditionable":true,"lower":0.9,"upper":0.9},"extended":{"feasible":true,"conditionable":true,"lower":0.0,"upper":1.0},"verdict":"WIDENED"}"#;
    ensure(out.code == 0 && out.stdout.trim() == expected, || format!("compare gave {:?}", out.stdout))?;
    Ok("not comparable; [0.9, 0.9] vs [0, 1] WIDENED".into())
}

struct Case {
    name: &'static str,
    kb: KnowledgeBase,
    query: ConditionalEvent,
    expected: (BigRational, BigRational),
}

fn derived_cases() -> Vec<Case> {
    let marginals = kb_from(&["a", "b"], &[("a", "1", q(7, 10)), ("b", "1", q(1, 2))]);
    let conditional = kb_from(&["a", "b"], &[("a", "b", q(9, 10)), ("b", "1", q(1, 2))]);
    let penguin = kb_from(&["f", "b", "p"], &[("f", "b", q(9, 10)), ("b", "p", q(1, 1)), ("f", "p", q(0, 1))]);
    let query = |kb: &KnowledgeBase, a: &str, b: &str| cond(kb.vocab(), a, b);
    vec![
        Case { name: "marginals", query: query(&marginals, "a", "b"), kb: marginals, expected: (q(2, 5), q(1, 1)) },
        Case {
            name: "conditional",
            query: query(&conditional, "a", "1"),
            kb: conditional,
            expected: (q(9, 20), q(19, 20)),
        },
        Case { name: "penguin", query: query(&penguin, "f", "b & p"), kb: penguin, expected: (q(0, 1), q(0, 1)) },
    ]
}

/// Residuals and attainment of both witnesses of a bounds run.
fn check_witnesses<S: Scalar>(kb: &KnowledgeBase, query: &ConditionalEvent, r: &BoundsReport<S>) -> Result<f64, String> {
    let system = build_system(kb, query).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let pairs = [(&r.witness_low, &r.lower), (&r.witness_high, &r.upper)];
    for (witness, bound) in pairs {
        let (Some(w), Some(bound)) = (witness, bound) else {
            return Err("conditionable run without a witness".into());
        };
        ensure(w.cells() == system.cells.as_slice(), || "witness lives on a different partition".into())?;
        for row in 0..system.rows() {
            worst = worst.max(system.row_residual(w.masses(), row).map_err(|e| e.to_string())?.to_f64());
        }
        let attained = w.cond_prob(&r.query).map_err(|e| e.to_string())?;
        let gap = (attained - bound.clone()).abs().to_f64();
        ensure(gap <= 1e-9, || format!("witness misses its bound by {gap:e}"))?;
        worst = worst.max(gap);
    }
    ensure(worst <= 1e-9, || format!("row residual {worst:e}"))?;
    Ok(worst)
}

fn criterion_5(witness_log: &mut Vec<Result<f64, String>>) -> Check {
    for case in derived_cases() {
        let exact = bounds::<BigRational>(&case.kb, &case.query).map_err(|e| e.to_string())?;
        ensure(exact.conditionable, || format!("{}: not conditionable", case.name))?;
        let got = exact.interval().unwrap();
        ensure(got == case.expected, || format!("{}: exact {got:?}", case.name))?;
        witness_log.push(check_witnesses(&case.kb, &case.query, &exact));

        let float = bounds::<f64>(&case.kb, &case.query).map_err(|e| e.to_string())?;
        let (lo, hi) = float.interval().ok_or_else(|| format!("{}: float not conditionable", case.name))?;
        let off = (lo - f(&case.expected.0)).abs().max((hi - f(&case.expected.1)).abs());
        ensure(off <= 1e-9, || format!("{}: float [{lo}, {hi}]", case.name))?;
        witness_log.push(check_witnesses(&case.kb, &case.query, &float));

        let grid = grid_bounds(&case.kb, &case.query, &GridSpec::exact(20)).map_err(|e| e.to_string())?;
        ensure((grid.lower.clone(), grid.upper.clone()) == case.expected, || {
            format!("{}: grid [{}, {}]", case.name, grid.lower, grid.upper)
        })?;
    }
    Ok("[2/5, 1], [9/20, 19/20], [0, 0]; exact, float and grid N=20 agree".into())
}

fn criterion_6(witness_log: &mut Vec<Result<f64, String>>) -> Check {
    let start = Instant::now();
    let tol = BigRational::new(1.into(), 1_000_000_000.into());
    let step = q(1, 20);
    let (mut with_points, mut infeasible, mut matched) = (0, 0, 0);
    for seed in 0..20 {
        let (kb, query) = random_kb(seed);
        let exact = bounds::<BigRational>(&kb, &query).map_err(|e| e.to_string())?;
        let float = bounds::<f64>(&kb, &query).map_err(|e| e.to_string())?;
        ensure(exact.feasible == float.feasible && exact.conditionable == float.conditionable, || {
            format!("seed {seed}: exact and float disagree on status")
        })?;
        let grid = grid_bounds(&kb, &query, &GridSpec::exact(20));
        if !exact.feasible {
            infeasible += 1;
            ensure(grid.is_err(), || format!("seed {seed}: grid point in an infeasible KB"))?;
            continue;
        }
        let Some((lo, hi)) = exact.interval() else {
            continue;
        };
        witness_log.push(check_witnesses(&kb, &query, &exact));
        witness_log.push(check_witnesses(&kb, &query, &float));
        let (flo, fhi) = float.interval().unwrap();
        ensure((flo - f(&lo)).abs() <= 1e-9 && (fhi - f(&hi)).abs() <= 1e-9, || {
            format!("seed {seed}: float [{flo}, {fhi}] vs exact [{lo}, {hi}]")
        })?;
        let Ok(grid) = grid else {
            continue;
        };
        with_points += 1;
        ensure(grid.lower >= &lo - &tol && grid.upper <= &hi + &tol, || {
            format!("seed {seed}: grid [{}, {}] escapes [{lo}, {hi}]", grid.lower, grid.upper)
        })?;
        // an extreme must be matched when its LP witness is itself a grid point
        let on_grid = |w: &Option<condlogic::ProbabilityModel<BigRational>>| {
            let w = w.as_ref().unwrap();
            w.masses().iter().all(|m| (m * q(20, 1)).is_integer())
        };
        if on_grid(&exact.witness_low) {
            matched += 1;
            ensure(&grid.lower - &lo <= step, || format!("seed {seed}: grid lower {} vs {lo}", grid.lower))?;
        }
        if on_grid(&exact.witness_high) {
            matched += 1;
            ensure(&hi - &grid.upper <= step, || format!("seed {seed}: grid upper {} vs {hi}", grid.upper))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2}s"))?;
    Ok(format!("20 KBs: {infeasible} infeasible, {with_points} sandwiched, {matched} extremes matched, {secs:.2}s"))
}

fn criterion_7(witness_log: &[Result<f64, String>]) -> Check {
    let mut worst = 0.0f64;
    for r in witness_log {
        worst = worst.max(r.clone()?);
    }
    ensure(!witness_log.is_empty(), || "no witnesses checked".into())?;
    Ok(format!("{} runs, worst residual {worst:.1e}", witness_log.len()))
}

fn criterion_8() -> Check {
    let kb = kb_from(&["a"], &[("a", "1", q(3, 10)), ("a", "1", q(3, 5))]);
    ensure(!feasible(&kb).unwrap(), || "reported feasible".into())?;
    let dir = tempfile::tempdir().unwrap();
    let path = write_kb(&dir, "bad.kb", "vars: a\nP(a) = 0.3\nP(a) = 0.6\n");
    let out = cmd_check(&path, &Flags::default());
    ensure(out.code == EXIT_INFEASIBLE, || format!("exit code {}", out.code))?;
    Ok("feasible = false, exit 2".into())
}

fn criterion_9() -> Check {
    let mut steps = 0;
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let v = vocab(3);
        let weights = hidden_model(&v, &mut rng);
        let query = random_query(&v, &mut rng);
        let mut kb = KnowledgeBase::new(v.clone());
        let mut previous = bounds::<BigRational>(&kb, &query).unwrap().interval().unwrap();
        for _ in 0..rng.random_range(2..=5) {
            let a = random_event(&v, &mut rng, false);
            let b = random_event(&v, &mut rng, true);
            let alpha = hidden_cond_prob(&weights, &ConditionalEvent::new(&a, &b).unwrap());
            kb.assess(&a, &b, alpha).unwrap();
            let now = bounds::<BigRational>(&kb, &query).unwrap();
            let (lo, hi) = now.interval().ok_or_else(|| format!("chain {seed}: lost conditionability"))?;
            ensure(lo >= previous.0 && hi <= previous.1, || {
                format!("chain {seed}: [{}, {}] widened to [{lo}, {hi}]", previous.0, previous.1)
            })?;
            let truth = hidden_cond_prob(&weights, &query);
            ensure(lo <= truth && truth <= hi, || format!("chain {seed}: hidden value {truth} outside"))?;
            previous = (lo, hi);
            steps += 1;
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = write_kb(&dir, "birds.kb", "vars: f, b, p\nP(f | b) = 0.9\n");
    let out = cmd_compare(&path, "P(f | b)", "p", &Flags::default());
    ensure(out.stdout.contains("added assessments only ever narrow"), || "compare output lacks the contrast note".into())?;
    Ok(format!("50 chains, {steps} steps, never widened"))
}

fn main() -> ExitCode {
    let mut witness_log = Vec::new();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&mut witness_log),
        criterion_6(&mut witness_log),
        criterion_7(&witness_log),
        criterion_8(),
        criterion_9(),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
