//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check is exact; there are no numerical tolerances. The only pinned
//! limits are the wall-clock budgets carried by each criterion and the case
//! counts below.

use std::process::ExitCode;
use std::time::Instant;

use corner_core::battery::{properties, run_battery, BatteryConfig};
use corner_core::exactnum::{GaussianRational as Q, Mat};
use corner_core::generators::{sample_idempotent, sample_projection, SampleConfig};
use corner_core::Span;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

/// Cases per property in the property-test pass of criterion 9.
const PROPERTY_CASES: u32 = 100;

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Q::gaussian(a, b))
}

fn mat3() -> impl Strategy<Value = Mat> {
    proptest::collection::vec(small_q(), 9).prop_map(|v| Mat::new(3, 3, v).unwrap())
}

fn check(ok: corner_core::Result<bool>) -> Result<(), TestCaseError> {
    match ok {
        Ok(true) => Ok(()),
        Ok(false) => Err(TestCaseError::fail("property violated")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// The named invariants under proptest; returns failure descriptions.
fn property_pass() -> Vec<String> {
    let cfg = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let sc = SampleConfig::default();
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };

    let mut runner = TestRunner::new(cfg.clone());
    let r = runner.run(&(proptest::collection::vec(small_q(), 3), proptest::collection::vec(small_q(), 3), mat3()), |(x, y, r)| {
        prop_assume!(x.iter().any(|v| *v != Q::gaussian(0, 0)) && y.iter().any(|v| *v != Q::gaussian(0, 0)));
        check(properties::rank_one_absorption(&x, &y, &r))
    });
    record("rank-one absorption", r.map_err(|e| e.to_string()));

    let mut runner = TestRunner::new(cfg.clone());
    let r = runner.run(&(any::<u64>(), 0u64..1000), |(seed, idx)| {
        let s = properties::random_m3_algebra(seed, idx).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let e = sample_idempotent(3, 2, &sc, idx).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(properties::unitization_monotone(&s, &e))?;
        check(properties::corner_transpose_symmetry(&s, &e))
    });
    record("unitization monotonicity / corner transpose symmetry", r.map_err(|e| e.to_string()));

    let mut runner = TestRunner::new(cfg.clone());
    let r = runner.run(&(mat3(), mat3()), |(a, b)| {
        let s = Span::from_generators(3, 3, &[a, b]).unwrap();
        check(properties::closure_laws(&s))
    });
    record("closure idempotence", r.map_err(|e| e.to_string()));

    let mut runner = TestRunner::new(cfg);
    let r = runner.run(&(1usize..=2, 0u64..10_000), |(rank, idx)| {
        let p = sample_projection(3, rank, &sc, idx).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(properties::module_round_trip(&p))
    });
    record("module projection round trip", r.map_err(|e| e.to_string()));
    failures
}

fn main() -> ExitCode {
    let cfg = BatteryConfig::default();
    let mut results = run_battery(&cfg, &[]);
    let start = Instant::now();
    let prop_failures = property_pass();
    if let Some(nine) = results.iter_mut().find(|r| r.id == 9) {
        nine.checks += 4 * PROPERTY_CASES as usize;
        nine.failure_count += prop_failures.len();
        nine.failures.extend(prop_failures);
        nine.elapsed += start.elapsed();
    }
    let mut ok = true;
    for r in &results {
        println!("{}", r.line());
        ok &= r.passed();
    }
    println!("acceptance: {}", if ok { "all criteria passed" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
