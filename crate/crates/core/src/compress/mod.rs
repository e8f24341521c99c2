//! Corner tests `E·A·E`, falsification by seeded sampling, and exact
//! non-compressibility certificates.

mod certify;
mod kernel;
mod section2;

pub use certify::{certify_b, certify_c, certify_d, d_constraint_violations, CertificateB, CertificateC, CertificateD};
pub use section2::{repro_section2, Section2Report};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, shape, Result};
use crate::exactnum::{GaussianRational, Mat};
use crate::generators::{
    is_idempotent, sample_idempotent_factored, sample_projection_factored, FactoredIdempotent, Family, SampleConfig,
};
use crate::span::Span;
use kernel::IntMat;

type Q = GaussianRational;

/// Which kind of corner is being tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Require {
    Idempotent,
    Projection,
}

impl std::str::FromStr for Require {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Require> {
        match s {
            "idempotent" => Ok(Require::Idempotent),
            "projection" => Ok(Require::Projection),
            other => Err(crate::error::Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

/// Splits `e = λ·f` with `f` idempotent (and self-adjoint in projection
/// mode) into `f = range·corange`, `corange·range = I`.
///
/// Returns `None` for `e = 0`, whose corner is `{0}`.
pub fn factor_idempotent(e: &Mat, require: Require) -> Result<Option<FactoredIdempotent>> {
    if !e.is_square() {
        return Err(shape("corner matrix must be square"));
    }
    let Some(k) = e.entries().iter().position(|x| !x.is_zero()) else {
        return Ok(None);
    };
    let sq = e * e;
    let lambda = &sq.entries()[k] / &e.entries()[k];
    if lambda.is_zero() || sq != e.scale(&lambda) {
        return Err(precondition("matrix is not a nonzero multiple of an idempotent"));
    }
    let f = e.scale(&lambda.inv().expect("nonzero"));
    if require == Require::Projection && f.conj_transpose() != f {
        return Err(precondition("matrix is not a multiple of an orthogonal projection"));
    }
    let rr = f.rref();
    let r = rr.rank();
    let cols: Vec<Vec<Q>> = rr.pivots.iter().map(|&c| f.column(c)).collect();
    let range = Mat::from_columns(&cols)?;
    let corange = rr.reduced.block(0, 0, r, f.cols());
    Ok(Some(FactoredIdempotent { e: f, range, corange }))
}

/// Whether `e·s·e` is closed under multiplication, computed in the
/// `r×r` picture `corange·s·range`, where the corner is isomorphic.
pub fn corner_closed(s: &Span, f: &FactoredIdempotent) -> Result<bool> {
    PreparedSpan::new(s)?.corner_closed(&PreparedIdempotent::new(f))
}

/// A span with its basis rescaled to Gaussian integers, ready for many
/// corner tests.
pub struct PreparedSpan {
    n: usize,
    basis: Vec<IntMat>,
}

impl PreparedSpan {
    pub fn new(s: &Span) -> Result<PreparedSpan> {
        if !s.is_square() {
            return Err(shape("corner tests need a span of square matrices"));
        }
        Ok(PreparedSpan { n: s.n(), basis: s.basis().iter().map(IntMat::scaled).collect() })
    }

    pub fn corner_closed(&self, f: &PreparedIdempotent) -> Result<bool> {
        if f.n != self.n {
            return Err(shape("idempotent and span have different sizes"));
        }
        Ok(kernel::compressed_closed(&self.basis, &f.corange, &f.range))
    }
}

/// A factored idempotent rescaled for [`PreparedSpan::corner_closed`].
pub struct PreparedIdempotent {
    n: usize,
    range: IntMat,
    corange: IntMat,
}

impl PreparedIdempotent {
    pub fn new(f: &FactoredIdempotent) -> PreparedIdempotent {
        PreparedIdempotent { n: f.e.rows(), range: IntMat::scaled(&f.range), corange: IntMat::scaled(&f.corange) }
    }
}

/// Whether the corner `e·s·e` is an algebra. `e` may be any nonzero multiple
/// of an idempotent (of an orthogonal projection when `require` says so).
pub fn corner_is_algebra(s: &Span, e: &Mat, require: Require) -> Result<bool> {
    if e.rows() != s.n() || !s.is_square() {
        return Err(shape("idempotent and span have different sizes"));
    }
    match factor_idempotent(e, require)? {
        None => Ok(true),
        Some(f) => corner_closed(s, &f),
    }
}

/// Reference route: literally `is_mult_closed(compress(s, e))`.
pub fn corner_is_algebra_direct(s: &Span, e: &Mat) -> Result<bool> {
    s.compress(e)?.is_mult_closed()
}

/// A product of two corner basis elements that escapes the corner, if any.
pub fn corner_witness(s: &Span, e: &Mat) -> Result<Option<Mat>> {
    let c = s.compress(e)?;
    for a in c.basis() {
        for b in c.basis() {
            let m = a * b;
            if !c.contains(&m)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoCounterexampleFound,
    Counterexample,
}

/// Outcome of a sampling search for a non-algebra corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerReport {
    pub mode: Require,
    pub verdict: Verdict,
    pub samples_used: usize,
    pub witness_e: Option<Mat>,
    pub witness_product: Option<Mat>,
}

/// Searches seeded corners of ranks `2..n` for one that is not an algebra.
///
/// Ranks 1 and `n` are skipped: their corners are always algebras. Finding
/// nothing is evidence, not proof.
pub fn falsify(s: &Span, mode: Require, cfg: &SampleConfig) -> Result<CornerReport> {
    if !s.is_square() {
        return Err(shape("falsify needs a span of square matrices"));
    }
    SampleSet::new(s.n(), mode, cfg)?.falsify(s)
}

/// The seeded idempotents `falsify` walks through, drawn once so that many
/// algebras of the same size can be tested against them.
pub struct SampleSet {
    n: usize,
    mode: Require,
    samples: Vec<(FactoredIdempotent, PreparedIdempotent)>,
}

impl SampleSet {
    pub fn new(n: usize, mode: Require, cfg: &SampleConfig) -> Result<SampleSet> {
        cfg.validate()?;
        let mut samples = Vec::new();
        for r in 2..n {
            for idx in 0..cfg.count as u64 {
                let f = match mode {
                    Require::Idempotent => sample_idempotent_factored(n, r, cfg, idx)?,
                    Require::Projection => sample_projection_factored(n, r, cfg, idx)?,
                };
                let prepared = PreparedIdempotent::new(&f);
                samples.push((f, prepared));
            }
        }
        Ok(SampleSet { n, mode, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn falsify(&self, s: &Span) -> Result<CornerReport> {
        if s.n() != self.n {
            return Err(shape("sample set and span have different sizes"));
        }
        let prepared = PreparedSpan::new(s)?;
        for (used, (f, pf)) in self.samples.iter().enumerate() {
            if !prepared.corner_closed(pf)? {
                let product = corner_witness(s, &f.e)?
                    .ok_or_else(|| crate::error::internal("corner tests disagree on a sampled idempotent"))?;
                return Ok(CornerReport {
                    mode: self.mode,
                    verdict: Verdict::Counterexample,
                    samples_used: used + 1,
                    witness_e: Some(f.e.clone()),
                    witness_product: Some(product),
                });
            }
        }
        Ok(CornerReport {
            mode: self.mode,
            verdict: Verdict::NoCounterexampleFound,
            samples_used: self.samples.len(),
            witness_e: None,
            witness_product: None,
        })
    }
}

/// Hypotheses used by the compressibility arguments for the exceptional
/// `M_3` families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaCondition {
    /// `e·Q2·e` lies in the corner `e·A·e`.
    Eq2eMembership,
    /// `e·Q1 = Q1`.
    Eq1Fixed,
    /// `e·Q1·e` lies in the corner `e·A·e`.
    Eq1eMembership,
}

pub fn lemma_precondition_check(family: &Family, e: &Mat, which: LemmaCondition) -> Result<bool> {
    let t = family
        .triple
        .as_ref()
        .ok_or_else(|| precondition(format!("family '{}' has no projection triple", family.name)))?;
    if e.rows() != t.n() || !is_idempotent(e) {
        return Err(precondition("lemma checks need an idempotent of the family's size"));
    }
    match which {
        LemmaCondition::Eq1Fixed => Ok((e * &t.q1) == t.q1),
        LemmaCondition::Eq2eMembership => family.span.compress(e)?.contains(&(&(e * &t.q2) * e)),
        LemmaCondition::Eq1eMembership => family.span.compress(e)?.contains(&(&(e * &t.q1) * e)),
    }
}
