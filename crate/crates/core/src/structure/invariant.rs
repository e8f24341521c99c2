//! Invariant subspaces of matrix algebras acting on `Q(i)^n`.
//!
//! Subspaces are passed around as `n×d` matrices whose columns form a basis.

use num_traits::{One, Zero};

use super::roots::{char_poly, gaussian_roots};
use crate::error::{internal, precondition, Error, Result};
use crate::exactnum::{GaussianRational as Q, Mat};
use crate::generators::{random_scalar, Stream};
use crate::span::Span;

/// Extra seeded vectors tried by the cyclic scan after the standard basis.
const RANDOM_VECTORS: u64 = 4;
const SEED: u64 = 0x1A7A;

fn column_space(vectors: &[Vec<Q>], n: usize) -> Option<Mat> {
    let mut rows = vectors.to_vec();
    let pivots = crate::exactnum::rref_rows(&mut rows, n);
    rows.truncate(pivots.len());
    (!rows.is_empty()).then(|| Mat::from_columns(&rows).expect("nonempty"))
}

fn cyclic(s: &Span, v: &[Q]) -> Option<Mat> {
    let images: Vec<Vec<Q>> = s.basis().iter().map(|b| b.mul_vec(v)).collect();
    column_space(&images, s.n())
}

/// `(W*W)⁻¹W*·a·W` for each basis element: the action on an invariant `W`.
pub(crate) fn restrict(s: &Span, w: &Mat) -> Result<Span> {
    let wh = w.conj_transpose();
    let left = &(&wh * w).inverse()? * &wh;
    s.map(w.cols(), w.cols(), |a| &(&left * a) * w)
}

/// Common kernel of a set of matrices.
fn common_kernel(ms: &[Mat], n: usize) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = ms.iter().flat_map(Mat::to_rows).collect();
    Mat::from_rows(rows).map(|m| m.kernel()).unwrap_or_else(|_| (0..n).map(|i| unit_vec(n, i)).collect())
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// `{x in s : tr(x·y) = 0 for all y in s}`, the radical in characteristic zero.
pub(crate) fn trace_radical(s: &Span) -> Vec<Mat> {
    let b = s.basis();
    if b.is_empty() {
        return Vec::new();
    }
    let gram: Vec<Vec<Q>> = b.iter().map(|x| b.iter().map(|y| (x * y).trace()).collect()).collect();
    Mat::from_rows(gram).expect("square gram").kernel().iter().map(|c| s.combine(c)).collect()
}

/// Basis of `{c : c·a = a·c for all a in s}`.
pub(crate) fn centralizer(s: &Span) -> Vec<Mat> {
    let n = s.n();
    let mut rows = Vec::new();
    for a in s.basis() {
        for i in 0..n {
            for j in 0..n {
                // (c·a − a·c)_ij as a linear form in the entries of c.
                let mut row = vec![Q::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] += a.get(k, j);
                    row[k * n + j] -= a.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Span::full(n).basis().to_vec();
    }
    Mat::from_rows(rows)
        .expect("rectangular")
        .kernel()
        .into_iter()
        .map(|v| Mat::new(n, n, v).expect("n×n"))
        .collect()
}

fn is_scalar(c: &Mat) -> bool {
    let d = c.get(0, 0);
    (0..c.rows()).all(|i| (0..c.cols()).all(|j| if i == j { c.get(i, j) == d } else { c.get(i, j).is_zero() }))
}

fn eigenspace(c: &Mat) -> Option<Mat> {
    let lambda = gaussian_roots(&char_poly(c)).into_iter().next()?;
    let shifted = c - &Mat::identity(c.rows()).scale(&lambda);
    column_space(&shifted.kernel(), c.rows())
}

/// Some proper nonzero invariant subspace of a unital algebra, if one exists.
fn find_proper(s: &Span) -> Result<Option<Mat>> {
    let n = s.n();
    if n == 1 || s.dim() == n * n {
        return Ok(None);
    }
    let randoms = (0..RANDOM_VECTORS).map(|k| {
        let mut rng = Stream::Vector.rng(SEED, n as u64, 0, k);
        (0..n).map(|_| random_scalar(&mut rng, 5)).collect::<Vec<Q>>()
    });
    for v in (0..n).map(|i| unit_vec(n, i)).chain(randoms) {
        if let Some(w) = cyclic(s, &v) {
            if w.cols() < n {
                return Ok(Some(w));
            }
        }
    }
    let rad = trace_radical(s);
    if !rad.is_empty() {
        let ker = common_kernel(&rad, n);
        return column_space(&ker, n)
            .filter(|w| w.cols() < n)
            .map(Some)
            .ok_or_else(|| internal("radical elements are not nilpotent"));
    }
    let cent: Vec<Mat> = centralizer(s).into_iter().filter(|c| !is_scalar(c)).collect();
    if cent.is_empty() {
        return Err(internal("semisimple proper subalgebra with scalar centralizer"));
    }
    let mut candidates = cent.clone();
    for k in 0..8u64 {
        let mut rng = Stream::Custom(7).rng(SEED, n as u64, 0, k);
        let mut acc = Mat::zeros(n, n);
        for c in &cent {
            acc = &acc + &c.scale(&random_scalar(&mut rng, 5));
        }
        if !is_scalar(&acc) {
            candidates.push(acc);
        }
    }
    for c in &candidates {
        if let Some(w) = eigenspace(c) {
            return Ok(Some(w));
        }
    }
    Err(Error::NotSplit("no commuting element has an eigenvalue in Q(i)".into()))
}

/// A minimal proper nonzero invariant subspace of a unital algebra.
pub(crate) fn minimal_invariant(s: &Span) -> Result<Option<Mat>> {
    let Some(mut w) = find_proper(s)? else {
        return Ok(None);
    };
    while let Some(u) = find_proper(&restrict(s, &w)?)? {
        w = &w * &u;
    }
    Ok(Some(w))
}

/// Basis of a minimal proper nonzero subspace invariant under every element of
/// `s`, or `None` when `s` acts irreducibly.
///
/// The cyclic subspaces of standard and seeded vectors are tried first. When
/// all of them are full, the common kernel of the trace radical is used, and
/// failing that an eigenspace of a non-scalar commuting matrix. An algebra
/// that is reducible only over `C` gives [`Error::NotSplit`].
pub fn invariant_subspace(s: &Span) -> Result<Option<Vec<Vec<Q>>>> {
    if !s.is_square() || !s.is_mult_closed()? {
        return Err(precondition("invariant subspaces need a multiplicatively closed span of square matrices"));
    }
    let u = s.unitize()?;
    Ok(minimal_invariant(&u)?.map(|w| (0..w.cols()).map(|j| w.column(j)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{canonical_c, random_invertible, t3, SampleConfig};

    fn is_invariant(s: &Span, w: &[Vec<Q>]) -> bool {
        let n = s.n();
        let base = column_space(w, n).unwrap();
        s.basis().iter().all(|a| {
            w.iter().all(|v| {
                let mut vs = w.to_vec();
                vs.push(a.mul_vec(v));
                column_space(&vs, n).unwrap().cols() == base.cols()
            })
        })
    }

    #[test]
    fn upper_triangular_fixes_first_axis() {
        let w = invariant_subspace(&t3()).unwrap().unwrap();
        assert_eq!(w, vec![unit_vec(3, 0)]);
        assert_eq!(invariant_subspace(&Span::full(3)).unwrap(), None);
    }

    #[test]
    fn jordan_block_algebra() {
        let j = Mat::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let s = Span::from_generators(3, 3, &[Mat::identity(3), j.clone(), &j * &j]).unwrap();
        let w = invariant_subspace(&s).unwrap().unwrap();
        assert_eq!(column_space(&w, 3).unwrap(), Mat::from_columns(&[unit_vec(3, 0)]).unwrap());
    }

    #[test]
    fn conjugates_need_the_fallbacks() {
        let cfg = SampleConfig::default();
        for (k, s) in [t3(), canonical_c(), crate::generators::canonical_d()].into_iter().enumerate() {
            let (sim, _) = random_invertible(3, &cfg, Stream::Similarity, k as u64).unwrap();
            let c = s.conjugate(&sim).unwrap();
            let w = invariant_subspace(&c).unwrap().unwrap();
            assert_eq!(w.len(), 1);
            assert!(is_invariant(&c, &w));
        }
    }

    #[test]
    fn irrational_splitting_is_reported() {
        let a = Mat::from_ints(&[[0, 2], [1, 0]]);
        let s = Span::from_generators(2, 2, &[Mat::identity(2), a]).unwrap();
        assert!(matches!(invariant_subspace(&s), Err(Error::NotSplit(_))));
    }

    #[test]
    fn multiplicity_two_simple_algebra() {
        // M_2 acting diagonally on C^2 ⊗ C^2.
        let gens: Vec<Mat> = (0..4)
            .map(|k| {
                let u = Mat::unit(2, k / 2, k % 2);
                let mut m = Mat::zeros(4, 4);
                for b in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            m.set(2 * b + i, 2 * b + j, u.get(i, j).clone());
                        }
                    }
                }
                m
            })
            .collect();
        let s = Span::from_generators(4, 4, &gens).unwrap();
        let w = invariant_subspace(&s).unwrap().unwrap();
        assert_eq!(w.len(), 2);
        assert!(is_invariant(&s, &w));
        // After a generic rational change of basis no commuting matrix with a
        // rational eigenvalue is found, and the search gives up explicitly.
        let (sim, _) = random_invertible(4, &SampleConfig::default(), Stream::Similarity, 3).unwrap();
        let c = s.conjugate(&sim).unwrap();
        assert!(matches!(invariant_subspace(&c), Err(Error::NotSplit(_))));
    }
}
