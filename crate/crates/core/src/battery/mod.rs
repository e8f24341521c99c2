//! The acceptance battery: nine criteria, each reduced to a list of exact
//! checks plus a wall-clock budget. Shared by the command-line `suite` and
//! the `acceptance` test target.

pub mod properties;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify3::{cross_validate_with, Samplers, Tag};
use crate::compress::{
    certify_b, certify_c, certify_d, d_constraint_violations, lemma_precondition_check, repro_section2,
    LemmaCondition, Require, SampleSet, Verdict,
};
use crate::error::Result;
use crate::exactnum::{GaussianRational as Q, Mat};
use crate::generators::{
    b_st, canonical_b, canonical_c, canonical_d, coordinate_family, family_3_1_1, family_3_1_2, family_3_1_6,
    family_3_2_2, family_3_2_5, family_3_2_9, lr_algebra, random_invertible, random_matrix,
    sample_idempotent, sample_projection, t3, Family, ProjectionTriple, SampleConfig, Stream,
};
use crate::span::Span;
use crate::structure::analyze;

/// Knobs of the battery. The defaults are the acceptance settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub seed: u64,
    /// Idempotents (and projections) per rank in criteria 5 to 7.
    pub samples: usize,
    /// Random parameter sets in criteria 2 to 4.
    pub parameter_sets: usize,
    /// Random similarities per representative in criteria 7 and 8.
    pub similarities: usize,
    /// Cases per property in criterion 9.
    pub property_cases: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { seed: 0xC0FFEE, samples: 200, parameter_sets: 100, similarities: 50, property_cases: 100 }
    }
}

impl BatteryConfig {
    fn sample_config(&self) -> SampleConfig {
        SampleConfig { seed: self.seed, count: self.samples, ..SampleConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub checks: usize,
    /// The first few failing checks, described.
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub budget_ms: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed.as_millis() < u128::from(self.budget_ms)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.within_budget()
    }

    /// One human-readable status line.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} [{status}] {}: {} checks, {} failures, {:.2}s (budget {}s)",
            self.id,
            self.name,
            self.checks,
            self.failure_count,
            self.elapsed.as_secs_f64(),
            self.budget_ms / 1000
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!("; first failure: {first}"));
        }
        s
    }
}

/// Accumulates checks for one criterion.
struct Tally {
    checks: usize,
    failures: Vec<String>,
    failure_count: usize,
}

const KEPT_FAILURES: usize = 5;

impl Tally {
    fn new() -> Tally {
        Tally { checks: 0, failures: Vec::new(), failure_count: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Records an error as a failed check.
    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }
}

fn run(id: u32, name: &str, budget_secs: u64, body: impl FnOnce(&mut Tally)) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    body(&mut t);
    CriterionResult {
        id,
        name: name.to_string(),
        checks: t.checks,
        failures: t.failures,
        failure_count: t.failure_count,
        budget_ms: budget_secs * 1000,
        elapsed: start.elapsed(),
    }
}

fn random_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound)))
}

fn real(x: BigRational) -> Q {
    Q::real(x)
}

/// Criterion 1: the introductory counterexample.
pub fn criterion_1() -> CriterionResult {
    run(1, "introductory counterexample", 1, |t| {
        let Some(rep) = t.result(repro_section2(), || "repro".into()) else { return };
        let expected = Mat::from_ints(&[[42, -39, -3], [-39, 42, -3], [-3, -3, 6]]);
        t.check(rep.pbp_squared == expected, || format!("(PBP)^2 = {}", rep.pbp_squared));
        t.check(rep.relation_on_generator.is_zero(), || "relation fails on the corner generator".into());
        t.check(!rep.relation_on_square.is_zero(), || "relation holds on the square".into());
        t.check(!rep.square_in_corner, || "square lies in the corner".into());
        t.check(rep.verdict == "not projection compressible", || format!("verdict '{}'", rep.verdict));
    })
}

/// Criterion 2: certificates for `B_st`.
pub fn criterion_2(cfg: &BatteryConfig) -> CriterionResult {
    run(2, "B_st certificates", 30, |t| {
        for idx in 0..cfg.parameter_sets as u64 {
            let mut rng = Stream::Custom(2).rng(cfg.seed, 0, 0, idx);
            let (s, u) = (random_rational(&mut rng, 5), random_rational(&mut rng, 5));
            let k = (1i64..).map(|k| BigRational::from_integer(k.into())).find(|k| k != &s && k != &u).expect("finite exclusions");
            let (sq, tq) = (real(s), real(u));
            let Some(c) = t.result(certify_b(&sq, &tq, &k), || format!("B({sq}, {tq})")) else { continue };
            t.check(c.identity_lhs == c.identity_rhs, || format!("identity at ({sq}, {tq})"));
            t.check(!c.product_in_corner && !c.system_solvable, || format!("membership at ({sq}, {tq})"));
        }
    })
}

/// Criterion 3: certificates for `C_r`.
pub fn criterion_3(cfg: &BatteryConfig) -> CriterionResult {
    run(3, "C_r certificates", 10, |t| {
        for idx in 0..cfg.parameter_sets as u64 {
            let mut rng = Stream::Custom(3).rng(cfg.seed, 0, 0, idx);
            let r = loop {
                let r = random_rational(&mut rng, 5);
                if !r.is_zero() {
                    break real(r);
                }
            };
            let Some(c) = t.result(certify_c(&r), || format!("C({r})")) else { continue };
            t.check(c.identity_lhs == c.identity_rhs, || format!("identity at r = {r}"));
            t.check(!c.product_in_corner && !c.system_solvable, || format!("membership at r = {r}"));
        }
    })
}

/// Candidate values for `k` and `m`, scanned in this order.
fn small_rationals() -> Vec<BigRational> {
    let mut v = Vec::new();
    for n in 1..=4i64 {
        for (p, q) in [(n, 1), (-n, 1), (1, n + 1), (-1, n + 1)] {
            v.push(BigRational::new(p.into(), q.into()));
        }
    }
    v
}

/// The first `(k, m)` in the fixed scan meeting the side conditions of `D_rst`.
pub fn d_parameters(r: &Q, s: &Q, t: &Q) -> Option<(BigRational, BigRational)> {
    let vals = small_rationals();
    vals.iter()
        .flat_map(|k| vals.iter().map(move |m| (k.clone(), m.clone())))
        .find(|(k, m)| d_constraint_violations(r, s, t, k, m).is_empty())
}

/// Criterion 4: certificates for `D_rst`.
pub fn criterion_4(cfg: &BatteryConfig) -> CriterionResult {
    run(4, "D_rst certificates", 60, |t| {
        for idx in 0..cfg.parameter_sets as u64 {
            let mut rng = Stream::Custom(4).rng(cfg.seed, 0, 0, idx);
            let (r, s, u) = (
                real(random_rational(&mut rng, 5)),
                real(random_rational(&mut rng, 5)),
                real(random_rational(&mut rng, 5)),
            );
            let Some((k, m)) = d_parameters(&r, &s, &u) else {
                t.fail(format!("no admissible (k, m) for ({r}, {s}, {u})"));
                continue;
            };
            let Some(c) = t.result(certify_d(&r, &s, &u, &k, &m), || format!("D({r}, {s}, {u})")) else { continue };
            t.check(!c.beta_gamma_factor.is_zero() && !c.beta_factor.is_zero(), || format!("forcing steps at ({r}, {s}, {u})"));
            t.check(c.identity_lhs == c.identity_rhs, || format!("identity at ({r}, {s}, {u})"));
            t.check(!c.product_in_corner && !c.system_solvable, || format!("membership at ({r}, {s}, {u})"));
        }
    })
}

/// A triple in `M_3` that is not aligned with the coordinate axes.
fn rotated_triple() -> ProjectionTriple {
    let v = |a: [i64; 3]| a.iter().map(|&x| Q::from_int(x)).collect::<Vec<_>>();
    ProjectionTriple::from_orthogonal_basis(&[v([1, 1, 0]), v([1, -1, 1]), v([-1, 1, 2])], 1, 1)
        .expect("orthogonal basis")
}

fn compressible_families(cfg: &BatteryConfig) -> Result<Vec<(String, Span)>> {
    let mut out = Vec::new();
    for (n, t) in [(3, ProjectionTriple::coordinate3()), (4, ProjectionTriple::coordinate(4, 1, 1)?)] {
        for unital in [true, false] {
            let tag = if unital { "" } else { " nonunital" };
            out.push((format!("3.1.1 n={n}{tag}"), family_3_1_1(&t, unital)));
            out.push((format!("3.1.2 n={n}{tag}"), family_3_1_2(&t, unital)?));
            out.push((format!("3.1.6 n={n}{tag}"), family_3_1_6(&t, unital)?));
        }
    }
    for (label, t) in [("", ProjectionTriple::coordinate3()), (" rotated", rotated_triple())] {
        out.push((format!("3.2.2{label}"), family_3_2_2(&t)?));
        out.push((format!("3.2.5{label}"), family_3_2_5(&t)?));
        out.push((format!("3.2.9{label}"), family_3_2_9(&t)?));
    }
    for idx in 0..5u64 {
        let mut rng = Stream::Custom(5).rng(cfg.seed, 4, 0, idx);
        let (rp, rq) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let sc = SampleConfig { seed: cfg.seed ^ 0x5EED, ..SampleConfig::default() };
        let p = sample_projection(4, rp, &sc, 2 * idx)?;
        let q = sample_projection(4, rq, &sc, 2 * idx + 1)?;
        let lr = lr_algebra(&p, &q)?;
        out.push((format!("LR #{idx} (ranks {rp},{rq})"), lr.clone()));
        out.push((format!("unitized LR #{idx}"), lr.unitize()?));
    }
    Ok(out)
}

/// Criterion 5: compressible families survive sampling in both modes.
pub fn criterion_5(cfg: &BatteryConfig) -> CriterionResult {
    run(5, "compressible families", 600, |t| {
        let Some(fams) = t.result(compressible_families(cfg), || "family construction".into()) else { return };
        let sc = cfg.sample_config();
        for n in [3, 4] {
            for mode in [Require::Idempotent, Require::Projection] {
                let Some(set) = t.result(SampleSet::new(n, mode, &sc), || format!("samples n={n}")) else { continue };
                for (name, s) in fams.iter().filter(|(_, s)| s.n() == n) {
                    let Some(rep) = t.result(set.falsify(s), || name.clone()) else { continue };
                    t.check(rep.verdict == Verdict::NoCounterexampleFound, || {
                        format!("{name} ({mode:?}): corner by {} is not an algebra", rep.witness_e.as_ref().expect("witness"))
                    });
                }
            }
        }
    })
}

/// Criterion 6: every sampled rank-2 idempotent falls under one of the two
/// lemmas used by the compressibility proofs.
pub fn criterion_6(cfg: &BatteryConfig) -> CriterionResult {
    run(6, "dichotomy lemmas", 300, |t| {
        let t4 = ProjectionTriple::coordinate(4, 1, 1).expect("ranks fit");
        let mut cases: Vec<(Family, LemmaCondition)> = Vec::new();
        for n in [3, 4] {
            let tr = if n == 3 { ProjectionTriple::coordinate3() } else { t4.clone() };
            let span = family_3_1_6(&tr, false).expect("rank-one Q1, Q2");
            cases.push((Family { name: format!("3.1.6 n={n}"), span, triple: Some(tr) }, LemmaCondition::Eq2eMembership));
        }
        cases.push((coordinate_family("3.2.5").expect("known"), LemmaCondition::Eq2eMembership));
        cases.push((coordinate_family("3.2.9").expect("known"), LemmaCondition::Eq1eMembership));
        let sc = cfg.sample_config();
        for (fam, membership) in &cases {
            let n = fam.span.n();
            for r in 2..n {
                for idx in 0..cfg.samples as u64 {
                    let Some(e) = t.result(sample_idempotent(n, r, &sc, idx), || "sampling".into()) else { continue };
                    let a = lemma_precondition_check(fam, &e, *membership);
                    let b = lemma_precondition_check(fam, &e, LemmaCondition::Eq1Fixed);
                    match (a, b) {
                        (Ok(a), Ok(b)) => t.check(a || b, || format!("{} rank {r} sample {idx}: neither hypothesis", fam.name)),
                        (Err(e), _) | (_, Err(e)) => t.fail(format!("{}: {e}", fam.name)),
                    }
                }
            }
        }
    })
}

/// One algebra per class label.
pub fn representatives() -> Vec<(Tag, Span)> {
    let fam = |name: &str| coordinate_family(name).expect("known family").span;
    let q = |i: usize| Mat::unit(3, i, i);
    let lr = lr_algebra(&(&q(0) + &q(1)), &(&q(1) + &q(2))).expect("projections").unitize().expect("square");
    vec![
        (Tag::Full, Span::full(3)),
        (Tag::UnitizedLr, lr),
        (Tag::Ex311, fam("3.1.1")),
        (Tag::Ex312, fam("3.1.2")),
        (Tag::Ex316, fam("3.1.6")),
        (Tag::Ex322, fam("3.2.2")),
        (Tag::Ex325, fam("3.2.5")),
        (Tag::Ex329, fam("3.2.9")),
        (Tag::ClassB, canonical_b()),
        (Tag::ClassC, canonical_c()),
        (Tag::ClassD, canonical_d()),
        (Tag::Scalar, Span::scalars(3)),
    ]
}

/// Criterion 7: classification is stable under similarity and transposition
/// and agrees with corner sampling.
pub fn criterion_7(cfg: &BatteryConfig) -> CriterionResult {
    run(7, "classifier round trip", 1800, |t| {
        let Some(samplers) = t.result(Samplers::new(&cfg.sample_config()), || "samples".into()) else { return };
        for (k, (tag, rep)) in representatives().into_iter().enumerate() {
            for idx in 0..cfg.similarities as u64 {
                let sc = SampleConfig { seed: cfg.seed, ..SampleConfig::default() };
                let Some((s, _)) = t.result(random_invertible(3, &sc, Stream::Custom(70 + k as u64), idx), || "similarity".into())
                else {
                    continue;
                };
                let Some(conj) = t.result(rep.conjugate(&s), || "conjugation".into()) else { continue };
                for (form, alg) in [("conjugate", conj.clone()), ("transpose", conj.transpose())] {
                    let Some(cv) = t.result(cross_validate_with(&alg, &samplers), || format!("{tag} {form} #{idx}")) else {
                        continue;
                    };
                    t.check(cv.label.tag == tag, || format!("{tag} {form} #{idx} classified as {}", cv.label.tag));
                    t.check(cv.agrees, || format!("{tag} {form} #{idx}: sampling disagrees with the label"));
                }
            }
        }
    })
}

/// Criterion 8: structure of conjugated canonical algebras.
pub fn criterion_8(cfg: &BatteryConfig) -> CriterionResult {
    run(8, "structure suite", 300, |t| {
        let singles = vec![vec![1], vec![2], vec![3]];
        let cases: Vec<(&str, Span, usize, Option<Vec<usize>>)> = vec![
            ("T3", t3(), 3, Some(vec![1, 1, 1])),
            ("C", canonical_c(), 2, Some(vec![3])),
            ("D", canonical_d(), 0, Some(vec![1, 1, 1])),
            ("B", canonical_b(), 1, Some(vec![1, 2])),
            ("B_10", b_st(&Q::one(), &Q::zero()), 1, Some(vec![1, 2])),
        ];
        let sc = SampleConfig { seed: cfg.seed, ..SampleConfig::default() };
        for (k, (name, s, rad, groups)) in cases.iter().enumerate() {
            for idx in 0..cfg.similarities as u64 {
                let conj = random_invertible(3, &sc, Stream::Custom(80 + k as u64), idx).and_then(|(m, _)| s.conjugate(&m));
                let Some(bf) = t.result(conj.and_then(|c| analyze(&c)), || format!("{name} #{idx}")) else { continue };
                t.check(bf.block_dims == [1, 1, 1], || format!("{name} #{idx}: blocks {:?}", bf.block_dims));
                t.check(bf.radical.dim() == *rad, || format!("{name} #{idx}: radical dim {}", bf.radical.dim()));
                if let Some(g) = groups {
                    let mut sizes: Vec<usize> = bf.linked_partition.iter().map(Vec::len).collect();
                    sizes.sort();
                    t.check(&sizes == g, || format!("{name} #{idx}: partition {:?}", bf.linked_partition));
                }
            }
        }
        if let Some(bf) = t.result(analyze(&canonical_d()), || "D".into()) {
            t.check(bf.linked_partition == singles, || format!("D partition {:?}", bf.linked_partition));
        }
        if let Some(bf) = t.result(analyze(&Span::scalars(3)), || "CI".into()) {
            t.check(bf.linked_partition == [vec![1, 2, 3]], || format!("CI partition {:?}", bf.linked_partition));
        }
    })
}

/// Criterion 9: seeded sweep over the module invariants.
pub fn criterion_9(cfg: &BatteryConfig) -> CriterionResult {
    use properties::*;
    run(9, "property sweep", 600, |t| {
        let sc = SampleConfig { seed: cfg.seed, ..SampleConfig::default() };
        for idx in 0..cfg.property_cases as u64 {
            let mut rng = Stream::Custom(90).rng(cfg.seed, 0, 0, idx);
            let n = rng.gen_range(2..=4);
            let (a, b, c) = (random_matrix(&mut rng, n, n, 3), random_matrix(&mut rng, n, n, 3), random_matrix(&mut rng, n, n, 3));
            t.check(associativity(&a, &b, &c), || format!("associativity #{idx}"));
            t.check(rref_idempotent(&a), || format!("rref #{idx}"));
            t.check(inverse_is_two_sided(&a), || format!("inverse #{idx}"));
            t.check(anti_transpose_laws(&a, &b).unwrap_or(false), || format!("anti-transpose #{idx}"));

            let x: Vec<Q> = (0..n).map(|_| crate::generators::random_scalar(&mut rng, 3)).collect();
            let y: Vec<Q> = (0..n).map(|_| crate::generators::random_scalar(&mut rng, 3)).collect();
            if x.iter().any(|v| !v.is_zero()) && y.iter().any(|v| !v.is_zero()) {
                t.check(rank_one_absorption(&x, &y, &a).unwrap_or(false), || format!("rank-one absorption #{idx}"));
            }

            let Some(alg) = t.result(random_m3_algebra(cfg.seed, idx), || format!("algebra #{idx}")) else { continue };
            let Some(e) = t.result(sample_idempotent(3, 2, &sc, idx), || "sample".into()) else { continue };
            let Some(p) = t.result(sample_projection(3, 1 + (idx % 2) as usize, &sc, idx), || "sample".into()) else {
                continue;
            };
            let Some(e1) = t.result(sample_idempotent(3, 1, &sc, idx), || "sample".into()) else { continue };
            let gens = Span::from_generators(3, 3, &[a_3(&mut rng), a_3(&mut rng)]).expect("3×3");
            t.check(closure_laws(&gens).unwrap_or(false), || format!("closure #{idx}"));
            t.check(corner_dimension_bound(&gens, &e).unwrap_or(false), || format!("corner dim #{idx}"));
            t.check(corner_transpose_symmetry(&alg, &e).unwrap_or(false), || format!("corner transpose #{idx}"));
            t.check(unitization_monotone(&gens.closure().expect("square"), &e).unwrap_or(false), || format!("unitization #{idx}"));
            let member = alg.basis().iter().find(|m| crate::generators::is_idempotent(m)).cloned().unwrap_or_else(|| Mat::identity(3));
            t.check(trivial_corners(&alg, &member, &e1).unwrap_or(false), || format!("trivial corners #{idx}"));
            t.check(sampled_idempotent_ok(&e, 2, false) && sampled_idempotent_ok(&p, 1 + (idx % 2) as usize, true), || {
                format!("sampler #{idx}")
            });
            let Some(q2) = t.result(sample_projection(3, 2, &sc, idx + 1000), || "sample".into()) else { continue };
            t.check(lr_products_stay(&p, &q2, &e).unwrap_or(false), || format!("LR hypothesis #{idx}"));
            t.check(module_round_trip(&p).unwrap_or(false), || format!("module projection #{idx}"));
            let Some((sim, _)) = t.result(random_invertible(3, &sc, Stream::Custom(91), idx), || "similarity".into()) else {
                continue;
            };
            t.check(conjugation_keeps_blocks(&alg, &sim).unwrap_or(false), || format!("block dims #{idx}"));
            t.check(unhinged_form_laws(&alg).unwrap_or(false), || format!("unhinged form #{idx}"));
            t.check(classification_invariance(&alg, &sim).unwrap_or(false), || format!("classification #{idx}"));
        }
    })
}

/// A sparse integer 3×3 matrix, for closure checks.
fn a_3(rng: &mut impl Rng) -> Mat {
    let mut m = Mat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            if rng.gen_bool(0.35) {
                m.set(i, j, Q::from_int(rng.gen_range(-2..=2)));
            }
        }
    }
    m
}

/// Runs the selected criteria (all when `only` is empty), in order.
type Runner = fn(&BatteryConfig) -> CriterionResult;

pub fn run_battery(cfg: &BatteryConfig, only: &[u32]) -> Vec<CriterionResult> {
    let want = |id: u32| only.is_empty() || only.contains(&id);
    let mut out = Vec::new();
    if want(1) {
        out.push(criterion_1());
    }
    let runners: [(u32, Runner); 8] = [
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    for (id, f) in runners {
        if want(id) {
            out.push(f(cfg));
        }
    }
    out
}
