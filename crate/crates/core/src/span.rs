//! Linear subspaces of `M_{n×p}(Q(i))` held as canonical reduced bases.
//!
//! A matrix is identified with its row-major vectorization. The basis of a
//! [`Span`] is the set of nonzero rows of the reduced row echelon form of
//! those vectors, so two spans are equal exactly when their bases are.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{shape, Result};
use crate::exactnum::{GaussianRational, Mat};

type Q = GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    n: usize,
    p: usize,
    basis: Vec<Mat>,
    pivots: Vec<usize>,
}

impl Span {
    /// The zero subspace of `M_{n×p}`.
    pub fn zero(n: usize, p: usize) -> Span {
        Span { n, p, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Linear span of `generators`, all of which must be `n×p`.
    pub fn from_generators(n: usize, p: usize, generators: &[Mat]) -> Result<Span> {
        if n == 0 || p == 0 {
            return Err(shape("ambient space must be nonempty"));
        }
        let mut s = Span::zero(n, p);
        for g in generators {
            s.insert(g)?;
        }
        Ok(s)
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Span {
        let units: Vec<Mat> = (0..n * n).map(|k| Mat::unit(n, k / n, k % n)).collect();
        Span::from_generators(n, n, &units).expect("matrix units share a shape")
    }

    /// `C·I` in `M_n`.
    pub fn scalars(n: usize) -> Span {
        Span::from_generators(n, n, &[Mat::identity(n)]).expect("identity is square")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.n == self.p
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Pivot position (in the vectorization) of each basis element.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_shape(&self, m: &Mat) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.p {
            return Err(shape(format!(
                "{}x{} matrix against a span in M_{}x{}",
                m.rows(),
                m.cols(),
                self.n,
                self.p
            )));
        }
        Ok(())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(shape(format!("span lives in non-square M_{}x{}", self.n, self.p)))
        }
    }

    /// Subtracts the basis component of `v`; the residual is zero iff `v` is in the span.
    fn reduce(&self, v: &mut [Q]) {
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            if v[piv].is_zero() {
                continue;
            }
            let f = v[piv].clone();
            for (x, y) in v.iter_mut().zip(b.entries()).skip(piv) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
    }

    pub(crate) fn contains_vec(&self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, m: &Mat) -> Result<bool> {
        self.check_shape(m)?;
        Ok(self.contains_vec(m.entries()))
    }

    /// Coefficients of `m` in the canonical basis, or `None` if `m` is outside.
    pub fn coordinates(&self, m: &Mat) -> Result<Option<Vec<Q>>> {
        self.check_shape(m)?;
        let coords: Vec<Q> = self.pivots.iter().map(|&p| m.entries()[p].clone()).collect();
        Ok(self.contains_vec(m.entries()).then_some(coords))
    }

    /// Adds `m` to the span, keeping the basis canonical. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, m: &Mat) -> Result<bool> {
        self.check_shape(m)?;
        let mut v = m.entries().to_vec();
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = v[piv].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in &mut v[piv..] {
                *x = &*x * &inv;
            }
        }
        for b in &mut self.basis {
            let f = b.entries()[piv].clone();
            if f.is_zero() {
                continue;
            }
            let data = b.entries().iter().zip(&v).map(|(x, y)| x - &(&f * y)).collect();
            *b = Mat::from_vec(self.n, self.p, data);
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.basis.insert(at, Mat::from_vec(self.n, self.p, v));
        Ok(true)
    }

    pub fn is_subspace_of(&self, other: &Span) -> bool {
        self.n == other.n && self.p == other.p && self.basis.iter().all(|b| other.contains_vec(b.entries()))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Span) -> Result<Span> {
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b)?;
        }
        Ok(s)
    }

    pub fn intersect(&self, other: &Span) -> Result<Span> {
        if self.n != other.n || self.p != other.p {
            return Err(shape("intersection of spans in different ambient spaces"));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Span::zero(self.n, self.p));
        }
        // Solve sum a_i u_i - sum b_j w_j = 0 and read off sum a_i u_i.
        let cols: Vec<Vec<Q>> = self
            .basis
            .iter()
            .map(|b| b.entries().to_vec())
            .chain(other.basis.iter().map(|b| b.entries().iter().map(|x| -x).collect()))
            .collect();
        let m = Mat::from_columns(&cols)?;
        let k = self.dim();
        let gens: Vec<Mat> = m
            .kernel()
            .iter()
            .map(|coef| self.combine(&coef[..k]))
            .collect();
        Span::from_generators(self.n, self.p, &gens)
    }

    /// The element `sum c_i b_i` of the span.
    pub fn combine(&self, coefs: &[Q]) -> Mat {
        assert_eq!(coefs.len(), self.dim(), "coefficient count");
        let mut acc = vec![Q::zero(); self.n * self.p];
        for (c, b) in coefs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in acc.iter_mut().zip(b.entries()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        Mat::from_vec(self.n, self.p, acc)
    }

    /// Image of the span under an entrywise-linear map, re-canonicalized.
    pub fn map(&self, n: usize, p: usize, f: impl Fn(&Mat) -> Mat) -> Result<Span> {
        let gens: Vec<Mat> = self.basis.iter().map(f).collect();
        Span::from_generators(n, p, &gens)
    }

    /// `span{x·y : x in self, y in other}`.
    pub fn product(&self, other: &Span) -> Result<Span> {
        if self.p != other.n {
            return Err(shape("product of incompatible spans"));
        }
        let mut s = Span::zero(self.n, other.p);
        for a in &self.basis {
            for b in &other.basis {
                s.insert(&(a * b))?;
            }
        }
        Ok(s)
    }

    pub fn is_mult_closed(&self) -> Result<bool> {
        self.require_square()?;
        for a in &self.basis {
            for b in &self.basis {
                if !self.contains_vec((a * b).entries()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest multiplicatively closed span containing `self`.
    pub fn closure(&self) -> Result<Span> {
        self.require_square()?;
        let mut s = self.clone();
        loop {
            let mut next = s.clone();
            for a in &s.basis {
                for b in &s.basis {
                    next.insert(&(a * b))?;
                }
            }
            if next.dim() == s.dim() {
                return Ok(s);
            }
            s = next;
        }
    }

    /// The corner `span{e·A·e : A in self}`.
    pub fn compress(&self, e: &Mat) -> Result<Span> {
        self.require_square()?;
        self.check_shape(e)?;
        self.map(self.n, self.n, |a| &(e * a) * e)
    }

    pub fn contains_identity(&self) -> bool {
        self.is_square() && self.contains_vec(Mat::identity(self.n).entries())
    }

    /// `self + C·I`.
    pub fn unitize(&self) -> Result<Span> {
        self.require_square()?;
        let mut s = self.clone();
        s.insert(&Mat::identity(self.n))?;
        Ok(s)
    }

    pub fn transpose(&self) -> Span {
        self.map(self.p, self.n, Mat::transpose).expect("transpose keeps shapes consistent")
    }

    pub fn anti_transpose(&self) -> Result<Span> {
        self.require_square()?;
        self.map(self.n, self.n, |a| a.anti_transpose().expect("square"))
    }

    /// `S⁻¹·self·S`.
    pub fn conjugate(&self, s: &Mat) -> Result<Span> {
        self.require_square()?;
        let inv = s.inverse()?;
        self.check_shape(s)?;
        self.map(self.n, self.n, |a| &(&inv * a) * s)
    }

    pub fn to_json(&self) -> SpanJson {
        SpanJson { n: self.n, p: self.p, generators: self.basis.clone() }
    }
}

/// Wire format of a span: its ambient shape and a generating set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanJson {
    pub n: usize,
    pub p: usize,
    pub generators: Vec<Mat>,
}

impl TryFrom<SpanJson> for Span {
    type Error = crate::error::Error;

    fn try_from(j: SpanJson) -> Result<Span> {
        Span::from_generators(j.n, j.p, &j.generators)
    }
}

/// Span of a nonempty generator list, taking the shape from the first element.
pub fn span_from(generators: &[Mat]) -> Result<Span> {
    let first = generators.first().ok_or_else(|| shape("empty generator list with no declared shape"))?;
    Span::from_generators(first.rows(), first.cols(), generators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Mat {
        Mat::unit(3, i - 1, j - 1)
    }

    fn upper_triangular() -> Span {
        let units: Vec<Mat> = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)].iter().map(|&(i, j)| e(i, j)).collect();
        span_from(&units).unwrap()
    }

    #[test]
    fn span_from_examples() {
        let i3 = Mat::identity(3);
        assert_eq!(span_from(&[i3.clone(), i3.scale(&Q::from_int(2))]).unwrap().dim(), 1);
        let b = span_from(&[&e(1, 1) + &e(2, 2), e(1, 2), e(3, 3)]).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(span_from(&[Mat::zeros(3, 3)]).unwrap().dim(), 0);
        assert!(span_from(&[]).is_err());
        assert!(span_from(&[Mat::zeros(3, 3), Mat::zeros(2, 2)]).is_err());
    }

    #[test]
    fn canonical_basis_makes_equality_structural() {
        let a = span_from(&[&e(1, 1) + &e(1, 2), e(1, 2)]).unwrap();
        let b = span_from(&[e(1, 1), e(1, 2).scale(&Q::gaussian(0, 3))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[e(1, 1), e(1, 2)]);
    }

    #[test]
    fn membership() {
        let s = Span::scalars(3);
        assert!(s.contains(&Mat::identity(3).scale(&Q::from_int(5))).unwrap());
        assert!(s.contains(&Mat::zeros(3, 3)).unwrap());
        assert!(!s.contains(&e(1, 1)).unwrap());
        assert!(s.contains(&Mat::zeros(2, 2)).is_err());
        let t = upper_triangular();
        let m = &(&e(1, 3).scale(&Q::ratio(2, 7)) + &e(2, 2)) - &e(3, 3);
        let c = t.coordinates(&m).unwrap().unwrap();
        assert_eq!(t.combine(&c), m);
        assert_eq!(t.coordinates(&e(3, 1)).unwrap(), None);
    }

    #[test]
    fn mult_closure_examples() {
        assert!(Span::full(3).is_mult_closed().unwrap());
        let s = span_from(&[e(1, 2), e(2, 3)]).unwrap();
        assert!(!s.is_mult_closed().unwrap());
        let c = s.closure().unwrap();
        assert_eq!(c, span_from(&[e(1, 2), e(2, 3), e(1, 3)]).unwrap());
        assert_eq!(Span::full(3).closure().unwrap(), Span::full(3));
        let jordan = &e(1, 2) + &e(2, 3);
        let poly = span_from(&[jordan, Mat::identity(3)]).unwrap().closure().unwrap();
        assert_eq!(poly.dim(), 3);
        assert!(Span::from_generators(2, 3, &[]).unwrap().is_mult_closed().is_err());
    }

    #[test]
    fn corner_of_section_two_algebra_is_not_closed() {
        let p = Mat::from_ints(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]);
        let a = span_from(&[&e(1, 1) + &e(2, 2)]).unwrap();
        let corner = a.compress(&p).unwrap();
        assert!(!corner.is_mult_closed().unwrap());
        let pbp = corner.basis()[0].clone();
        assert!(!corner.contains(&(&pbp * &pbp)).unwrap());
        assert_eq!(a.compress(&Mat::identity(3)).unwrap(), a);
    }

    #[test]
    fn corner_of_full_algebra_has_rank_squared_dimension() {
        let s = Mat::from_ints(&[[1, 2, 0], [0, 1, 3], [1, 0, 1]]);
        let e0 = Mat::diag(&[Q::from_int(1), Q::from_int(1), Q::from_int(0)]);
        let idem = &(&s * &e0) * &s.inverse().unwrap();
        let c = Span::full(3).compress(&idem).unwrap();
        assert_eq!(c.dim(), 4);
        assert!(c.is_mult_closed().unwrap());
    }

    #[test]
    fn unitize_examples() {
        let u = span_from(&[e(3, 3)]).unwrap().unitize().unwrap();
        assert_eq!(u.dim(), 2);
        assert_eq!(Span::full(3).unitize().unwrap(), Span::full(3));
        assert_eq!(Span::zero(3, 3).unitize().unwrap(), Span::scalars(3));
    }

    #[test]
    fn transpose_examples() {
        let t = upper_triangular();
        let lower = t.transpose();
        assert_eq!(lower.dim(), 6);
        assert!(lower.contains(&e(3, 1)).unwrap());
        assert!(!lower.contains(&e(1, 3)).unwrap());
        assert_eq!(t.anti_transpose().unwrap(), t);
        assert_eq!(Span::scalars(3).transpose(), Span::scalars(3));
    }

    #[test]
    fn intersection_and_product() {
        let a = span_from(&[e(1, 1), e(1, 2)]).unwrap();
        let b = span_from(&[&e(1, 1) + &e(1, 2), e(2, 2)]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, span_from(&[&e(1, 1) + &e(1, 2)]).unwrap());
        let strict = span_from(&[e(1, 2), e(2, 3), e(1, 3)]).unwrap();
        let sq = strict.product(&strict).unwrap();
        assert_eq!(sq, span_from(&[e(1, 3)]).unwrap());
        assert_eq!(sq.product(&strict).unwrap().dim(), 0);
    }

    #[test]
    fn json_shape() {
        let s = span_from(&[e(1, 2)]).unwrap();
        let j = serde_json::to_value(s.to_json()).unwrap();
        assert_eq!(j["n"], 3);
        let back: Span = serde_json::from_value::<SpanJson>(j).unwrap().try_into().unwrap();
        assert_eq!(back, s);
    }
}
