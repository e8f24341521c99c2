use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{GaussianRational, Mat};

type Q = GaussianRational;

/// Name of the generator behind every seeded stream, as recorded in reports.
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";

const MAX_RETRIES: usize = 64;

/// Seed, per-rank sample count, and entry bound for the samplers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    pub entry_bound: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0xC0FFEE, count: 200, entry_bound: 5 }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(precondition("sample count must be at least 1"));
        }
        if self.entry_bound == 0 {
            return Err(precondition("entry bound must be at least 1"));
        }
        Ok(())
    }
}

/// Independent purposes get independent streams from the same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Idempotent,
    Projection,
    Similarity,
    Vector,
    Custom(u64),
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Idempotent => 1,
            Stream::Projection => 2,
            Stream::Similarity => 3,
            Stream::Vector => 4,
            Stream::Custom(t) => 0x1000 + t,
        }
    }

    /// A generator keyed by `(seed, stream, a, b)` and positioned on `index`.
    pub fn rng(self, seed: u64, a: u64, b: u64, index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        for (chunk, word) in key.chunks_mut(8).zip([seed, self.tag(), a, b]) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

/// `p/q` with `p` uniform in `[-bound, bound]` and `q` uniform in `[1, bound]`,
/// drawn independently for the real and imaginary parts.
pub fn random_scalar(rng: &mut impl Rng, bound: u64) -> Q {
    let b = bound as i64;
    let mut part = || {
        let p = rng.gen_range(-b..=b);
        let q = rng.gen_range(1..=b);
        num_rational::BigRational::new(p.into(), q.into())
    };
    let re = part();
    let im = part();
    Q::new(re, im)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: u64) -> Mat {
    let data = (0..rows * cols).map(|_| random_scalar(rng, bound)).collect();
    Mat::new(rows, cols, data).expect("positive shape")
}

/// A seeded invertible `S` together with `S⁻¹`.
pub fn random_invertible(n: usize, cfg: &SampleConfig, stream: Stream, index: u64) -> Result<(Mat, Mat)> {
    cfg.validate()?;
    let mut rng = stream.rng(cfg.seed, n as u64, 0, index);
    for _ in 0..MAX_RETRIES {
        let s = random_matrix(&mut rng, n, n, cfg.entry_bound);
        if let Ok(inv) = s.inverse() {
            return Ok((s, inv));
        }
    }
    Err(Error::SamplerExhausted(MAX_RETRIES))
}

/// An idempotent `e = range·corange` with `corange·range = I_r`.
///
/// Corners `e·A·e` are isomorphic to `corange·A·range`, which is how the
/// corner tests avoid working with full `n×n` products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredIdempotent {
    pub e: Mat,
    pub range: Mat,
    pub corange: Mat,
}

impl FactoredIdempotent {
    pub fn rank(&self) -> usize {
        self.range.cols()
    }
}

fn check_rank(n: usize, r: usize, lo: usize) -> Result<()> {
    if n == 0 || r < lo || r > n {
        return Err(precondition(format!("rank {r} outside {lo}..={n}")));
    }
    Ok(())
}

/// `S·diag(I_r, 0)·S⁻¹` for a seeded invertible `S`, with its factorization.
pub fn sample_idempotent_factored(n: usize, r: usize, cfg: &SampleConfig, index: u64) -> Result<FactoredIdempotent> {
    check_rank(n, r, 1)?;
    cfg.validate()?;
    let mut rng = Stream::Idempotent.rng(cfg.seed, n as u64, r as u64, index);
    for _ in 0..MAX_RETRIES {
        let s = random_matrix(&mut rng, n, n, cfg.entry_bound);
        let Ok(inv) = s.inverse() else { continue };
        let range = s.block(0, 0, n, r);
        let corange = inv.block(0, 0, r, n);
        let e = &range * &corange;
        return Ok(FactoredIdempotent { e, range, corange });
    }
    Err(Error::SamplerExhausted(MAX_RETRIES))
}

pub fn sample_idempotent(n: usize, r: usize, cfg: &SampleConfig, index: u64) -> Result<Mat> {
    check_rank(n, r, 0)?;
    if r == 0 {
        return Ok(Mat::zeros(n, n));
    }
    Ok(sample_idempotent_factored(n, r, cfg, index)?.e)
}

/// Orthogonal projection `V(V*V)⁻¹V*` onto the column space of a
/// full-column-rank `V`.
pub fn projection_from_columns(v: &Mat) -> Result<Mat> {
    let vh = v.conj_transpose();
    let gram_inv = (&vh * v).inverse().map_err(|_| precondition("columns are linearly dependent"))?;
    Ok(&(v * &gram_inv) * &vh)
}

/// Seeded orthogonal projection of rank `r`, with its factorization
/// `range = V`, `corange = (V*V)⁻¹V*`.
pub fn sample_projection_factored(n: usize, r: usize, cfg: &SampleConfig, index: u64) -> Result<FactoredIdempotent> {
    check_rank(n, r, 1)?;
    cfg.validate()?;
    let mut rng = Stream::Projection.rng(cfg.seed, n as u64, r as u64, index);
    for _ in 0..MAX_RETRIES {
        let v = random_matrix(&mut rng, n, r, cfg.entry_bound);
        let vh = v.conj_transpose();
        let Ok(gram_inv) = (&vh * &v).inverse() else { continue };
        let corange = &gram_inv * &vh;
        let e = &v * &corange;
        return Ok(FactoredIdempotent { e, range: v, corange });
    }
    Err(Error::SamplerExhausted(MAX_RETRIES))
}

pub fn sample_projection(n: usize, r: usize, cfg: &SampleConfig, index: u64) -> Result<Mat> {
    check_rank(n, r, 0)?;
    if r == 0 {
        return Ok(Mat::zeros(n, n));
    }
    Ok(sample_projection_factored(n, r, cfg, index)?.e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{is_idempotent, is_projection};

    #[test]
    fn trivial_ranks() {
        let cfg = SampleConfig::default();
        assert_eq!(sample_idempotent(3, 0, &cfg, 0).unwrap(), Mat::zeros(3, 3));
        assert_eq!(sample_idempotent(3, 3, &cfg, 7).unwrap(), Mat::identity(3));
        assert_eq!(sample_projection(3, 3, &cfg, 1).unwrap(), Mat::identity(3));
        assert!(sample_idempotent(3, 4, &cfg, 0).is_err());
    }

    #[test]
    fn samples_have_the_defining_properties() {
        let cfg = SampleConfig { seed: 42, ..SampleConfig::default() };
        for idx in 0..20 {
            for r in 1..3 {
                let f = sample_idempotent_factored(3, r, &cfg, idx).unwrap();
                assert!(is_idempotent(&f.e));
                assert_eq!(f.e.rank(), r);
                assert_eq!(&f.corange * &f.range, Mat::identity(r));
                let p = sample_projection_factored(3, r, &cfg, idx).unwrap();
                assert!(is_projection(&p.e));
                assert_eq!(p.e.rank(), r);
                assert_eq!(&p.corange * &p.range, Mat::identity(r));
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let cfg = SampleConfig { seed: 42, ..SampleConfig::default() };
        let a = sample_idempotent(3, 2, &cfg, 0).unwrap();
        let b = sample_idempotent(3, 2, &cfg, 0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_idempotent(3, 2, &cfg, 1).unwrap());
        let other = SampleConfig { seed: 43, ..cfg };
        assert_ne!(a, sample_idempotent(3, 2, &other, 0).unwrap());
    }

    #[test]
    fn explicit_columns_give_the_introductory_projection() {
        let v = Mat::from_ints(&[[1, 1], [-1, 0], [0, -1]]);
        let p = projection_from_columns(&v).unwrap();
        let expect = Mat::from_ints(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]).scale(&Q::ratio(1, 3));
        assert_eq!(p, expect);
    }

    #[test]
    fn config_validation() {
        assert!(SampleConfig { count: 0, ..SampleConfig::default() }.validate().is_err());
        assert!(SampleConfig { entry_bound: 0, ..SampleConfig::default() }.validate().is_err());
    }
}
