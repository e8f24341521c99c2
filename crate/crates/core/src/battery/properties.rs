//! Invariants checked both by the seeded sweep in the battery and by the
//! property-test suites. Each predicate returns `Ok(false)` on a violation.

use num_traits::Zero;

use crate::classify3::classify;
use crate::compress::{corner_is_algebra, Require};
use crate::error::Result;
use crate::exactnum::{GaussianRational as Q, Mat};
use crate::generators::{is_idempotent, is_projection, lr_algebra, random_scalar, rank_one, Stream};
use crate::span::Span;
use crate::structure::{analyze, find_module_projection, radical_block_supports, triangularize, Side};

pub fn associativity(a: &Mat, b: &Mat, c: &Mat) -> bool {
    &(a * b) * c == a * &(b * c)
}

pub fn rref_idempotent(a: &Mat) -> bool {
    let once = a.rref().reduced;
    once.rref().reduced == once
}

pub fn inverse_is_two_sided(a: &Mat) -> bool {
    match a.inverse() {
        Ok(inv) => &inv * a == Mat::identity(a.rows()) && a * &inv == Mat::identity(a.rows()),
        Err(_) => a.det().map(|d| d.is_zero()).unwrap_or(false),
    }
}

pub fn anti_transpose_laws(a: &Mat, b: &Mat) -> Result<bool> {
    let twice = a.anti_transpose()?.anti_transpose()?;
    let reversed = &b.anti_transpose()? * &a.anti_transpose()?;
    Ok(&twice == a && (a * b).anti_transpose()? == reversed && a.conj_transpose().conj_transpose() == *a)
}

pub fn closure_laws(s: &Span) -> Result<bool> {
    let c = s.closure()?;
    Ok(c.closure()? == c && s.is_subspace_of(&c) && (s.is_mult_closed()? == (&c == s)))
}

pub fn corner_dimension_bound(s: &Span, e: &Mat) -> Result<bool> {
    let r = e.rank();
    Ok(s.compress(e)?.dim() <= s.dim().min(r * r))
}

/// Corners of `s` by `e` and of `sᵀ` by `eᵀ` are algebras together.
pub fn corner_transpose_symmetry(s: &Span, e: &Mat) -> Result<bool> {
    let a = corner_is_algebra(s, e, Require::Idempotent)?;
    let b = corner_is_algebra(&s.transpose(), &e.transpose(), Require::Idempotent)?;
    let c = s.compress(e)?.is_mult_closed()?;
    let d = s.transpose().compress(&e.transpose())?.is_mult_closed()?;
    Ok(a == b && c == d && a == c)
}

pub fn unitization_monotone(s: &Span, e: &Mat) -> Result<bool> {
    let closed = s.compress(e)?.is_mult_closed()?;
    Ok(!closed || s.unitize()?.compress(e)?.is_mult_closed()?)
}

/// `A·R·A` lies in `C·A` for rank-one `A = x·y*`.
pub fn rank_one_absorption(x: &[Q], y: &[Q], r: &Mat) -> Result<bool> {
    let a = rank_one(x, y)?;
    let s = Span::from_generators(a.rows(), a.cols(), std::slice::from_ref(&a))?;
    s.contains(&(&(&a * r) * &a))
}

/// Idempotents from the algebra and rank-one idempotents give algebra corners.
pub fn trivial_corners(s: &Span, e_in: &Mat, rank_one_e: &Mat) -> Result<bool> {
    let first = !s.contains(e_in)? || !is_idempotent(e_in) || s.compress(e_in)?.is_mult_closed()?;
    Ok(first && s.compress(rank_one_e)?.is_mult_closed()?)
}

pub fn sampled_idempotent_ok(e: &Mat, rank: usize, projection: bool) -> bool {
    is_idempotent(e) && e.rank() == rank && (!projection || is_projection(e))
}

/// The hypothesis `(P·A·Q)·E·(P·B·Q)` in `P·M_n·Q` holds for every `E`.
pub fn lr_products_stay(p: &Mat, q: &Mat, e: &Mat) -> Result<bool> {
    let s = lr_algebra(p, q)?;
    for a in s.basis() {
        for b in s.basis() {
            if !s.contains(&(&(a * e) * b))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn conjugation_keeps_blocks(s: &Span, sim: &Mat) -> Result<bool> {
    let mut a = triangularize(s)?.block_dims;
    let mut b = triangularize(&s.conjugate(sim)?)?.block_dims;
    a.sort();
    b.sort();
    Ok(a == b)
}

/// Direct sum split, strictly upper radical, nilpotency, equal sizes in
/// linked groups, and the sum-of-supports rule for an unlinked middle block.
pub fn unhinged_form_laws(s: &Span) -> Result<bool> {
    let bf = analyze(s)?;
    let split = bf.block_diagonal.is_subspace_of(&bf.triangularized)
        && bf.block_diagonal.dim() + bf.radical.dim() == bf.triangularized.dim()
        && bf.block_diagonal.intersect(&bf.radical)?.is_zero();
    let m = bf.block_dims.len();
    let mut power = bf.radical.clone();
    for _ in 1..m {
        power = power.product(&bf.radical)?;
    }
    let nilpotent = power.is_zero();
    let sizes = bf.linked_partition.iter().all(|g| g.iter().all(|&i| bf.block_dims[i - 1] == bf.block_dims[g[0] - 1]));
    let middle_alone = m == 3 && bf.linked_partition.iter().any(|g| g == &[2]);
    let supports = !middle_alone
        || radical_block_supports(&bf).iter().map(|p| p.dim).sum::<usize>() == bf.radical.dim();
    Ok(split && nilpotent && sizes && supports)
}

/// Modules `M·Q` and `Q·M` give back a projection with the range of `Q`.
pub fn module_round_trip(q: &Mat) -> Result<bool> {
    let n = q.rows();
    let range = |m: &Mat| {
        let mut r = m.transpose().rref().reduced;
        r = r.rref().reduced;
        r
    };
    let left = Span::full(n).map(n, n, |a| a * q)?;
    let right = Span::full(n).map(n, n, |a| q * a)?;
    let ql = find_module_projection(&left, Side::Left)?;
    let qr = find_module_projection(&right, Side::Right)?;
    Ok(is_projection(&ql) && is_projection(&qr) && range(&ql) == range(q) && range(&qr) == range(q))
}

/// Labels survive similarity and transposition, and the compressibility bit
/// matches the tag.
pub fn classification_invariance(s: &Span, sim: &Mat) -> Result<bool> {
    let base = classify(s)?;
    let conj = classify(&s.conjugate(sim)?)?;
    let tr = classify(&s.transpose())?;
    Ok(base.tag == conj.tag && base.tag == tr.tag && base.compressible == base.tag.compressible())
}

/// A unital subalgebra of `M_3` built the way the test suites build them:
/// random combinations of a random set of upper triangular matrix units,
/// sometimes with a full lower 2×2 block, closed, unitized and conjugated.
pub fn random_m3_algebra(seed: u64, index: u64) -> Result<Span> {
    use rand::Rng;
    let mut rng = Stream::Custom(9).rng(seed, 3, 0, index);
    let upper: Vec<(usize, usize)> = (0..3).flat_map(|i| (i..3).map(move |j| (i, j))).collect();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut g = Mat::zeros(3, 3);
        for &(i, j) in &upper {
            if rng.gen_bool(0.4) {
                g.set(i, j, Q::from_int(rng.gen_range(-2..=2)));
            }
        }
        gens.push(g);
    }
    if rng.gen_bool(0.2) {
        gens.push(Mat::unit(3, 1, 2));
        gens.push(Mat::unit(3, 2, 1));
    }
    let s = Span::from_generators(3, 3, &gens)?.closure()?.unitize()?.closure()?;
    let mut sim = Mat::identity(3);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                sim.set(i, j, random_scalar(&mut rng, 2));
            }
        }
    }
    match sim.inverse() {
        Ok(_) => s.conjugate(&sim),
        Err(_) => Ok(s),
    }
}
