//! Constructors for the algebra families studied here, rank-one builders,
//! and deterministic samplers of idempotents and orthogonal projections.

mod registry;
mod sampler;

pub use registry::{parse_family, FAMILY_NAMES};
pub use sampler::{
    projection_from_columns, random_invertible, random_matrix, random_scalar, sample_idempotent, sample_idempotent_factored,
    sample_projection, sample_projection_factored, FactoredIdempotent, SampleConfig, Stream, PRNG_NAME,
};

use num_traits::Zero;

use crate::error::{precondition, shape, Result};
use crate::exactnum::{GaussianRational, Mat};
use crate::span::Span;

type Q = GaussianRational;

/// The rank-one operator `z ↦ ⟨z, y⟩·x`, i.e. the matrix `x·y*`.
pub fn rank_one(x: &[Q], y: &[Q]) -> Result<Mat> {
    if x.is_empty() || y.is_empty() {
        return Err(shape("rank-one factors must be nonempty"));
    }
    let data = x.iter().flat_map(|a| y.iter().map(move |b| a * &b.conj())).collect();
    Mat::new(x.len(), y.len(), data)
}

/// `q² = q = q*`.
pub fn is_projection(q: &Mat) -> bool {
    q.is_square() && &(q * q) == q && &q.conj_transpose() == q
}

/// `q² = q`.
pub fn is_idempotent(q: &Mat) -> bool {
    q.is_square() && &(q * q) == q
}

/// Three orthogonal projections summing to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionTriple {
    pub q1: Mat,
    pub q2: Mat,
    pub q3: Mat,
}

impl ProjectionTriple {
    pub fn new(q1: Mat, q2: Mat, q3: Mat) -> Result<ProjectionTriple> {
        let n = q1.rows();
        for q in [&q1, &q2, &q3] {
            if !q.is_square() || q.rows() != n {
                return Err(shape("projections must share one square shape"));
            }
            if !is_projection(q) {
                return Err(precondition("triple member is not an orthogonal projection"));
            }
        }
        if &(&q1 + &q2) + &q3 != Mat::identity(n) {
            return Err(precondition("projections do not sum to the identity"));
        }
        if [(&q1, &q2), (&q1, &q3), (&q2, &q3)].iter().any(|(a, b)| !(*a * *b).is_zero()) {
            return Err(precondition("projections are not mutually orthogonal"));
        }
        Ok(ProjectionTriple { q1, q2, q3 })
    }

    /// Diagonal triple: `q1` covers the first `r1` coordinates, `q2` the next `r2`,
    /// `q3` the remaining ones.
    pub fn coordinate(n: usize, r1: usize, r2: usize) -> Result<ProjectionTriple> {
        if r1 + r2 > n {
            return Err(precondition(format!("ranks {r1}+{r2} exceed {n}")));
        }
        let d = |lo: usize, hi: usize| {
            let v: Vec<Q> = (0..n).map(|k| Q::from_int((lo <= k && k < hi) as i64)).collect();
            Mat::diag(&v)
        };
        ProjectionTriple::new(d(0, r1), d(r1, r1 + r2), d(r1 + r2, n))
    }

    /// The rank-one coordinate triple in `M_3`.
    pub fn coordinate3() -> ProjectionTriple {
        ProjectionTriple::coordinate(3, 1, 1).expect("valid ranks")
    }

    /// Triple built from a mutually orthogonal (not necessarily normalized)
    /// basis: the first `r1` vectors span `ran q1`, the next `r2` span `ran q2`.
    pub fn from_orthogonal_basis(vectors: &[Vec<Q>], r1: usize, r2: usize) -> Result<ProjectionTriple> {
        let n = vectors.len();
        if r1 + r2 > n {
            return Err(precondition("ranks exceed the number of vectors"));
        }
        let proj = |vs: &[Vec<Q>]| -> Result<Mat> {
            if vs.is_empty() {
                return Ok(Mat::zeros(n, n));
            }
            projection_from_columns(&Mat::from_columns(vs)?)
        };
        ProjectionTriple::new(proj(&vectors[..r1])?, proj(&vectors[r1..r1 + r2])?, proj(&vectors[r1 + r2..])?)
    }

    pub fn n(&self) -> usize {
        self.q1.rows()
    }

    pub fn ranks(&self) -> [usize; 3] {
        [self.q1.rank(), self.q2.rank(), self.q3.rank()]
    }

    pub fn transpose(&self) -> ProjectionTriple {
        ProjectionTriple { q1: self.q1.transpose(), q2: self.q2.transpose(), q3: self.q3.transpose() }
    }
}

/// A span together with the projections it was built from, when known.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub span: Span,
    pub triple: Option<ProjectionTriple>,
}

impl Family {
    fn new(name: &str, span: Span, triple: Option<ProjectionTriple>) -> Family {
        Family { name: name.to_string(), span, triple }
    }
}

/// `span{p·E_ij·q}`.
fn sandwich(p: &Mat, q: &Mat) -> Vec<Mat> {
    let n = p.rows();
    (0..n * n).map(|k| &(p * &Mat::unit(n, k / n, k % n)) * q).collect()
}

fn build(n: usize, singles: &[Mat], blocks: &[(Mat, Mat)]) -> Span {
    let mut gens: Vec<Mat> = singles.to_vec();
    for (p, q) in blocks {
        gens.extend(sandwich(p, q));
    }
    Span::from_generators(n, n, &gens).expect("generators share a shape")
}

/// The LR-algebra `p·M_n·q`.
pub fn lr_algebra(p: &Mat, q: &Mat) -> Result<Span> {
    if !p.same_shape(q) || !p.is_square() {
        return Err(shape("LR-algebra needs two projections of one square shape"));
    }
    if !is_projection(p) || !is_projection(q) {
        return Err(precondition("LR-algebra inputs must be orthogonal projections"));
    }
    Ok(build(p.rows(), &[], &[(p.clone(), q.clone())]))
}

fn require_rank_one(t: &ProjectionTriple, which: &[usize]) -> Result<()> {
    let ranks = t.ranks();
    for &k in which {
        if ranks[k] != 1 {
            return Err(precondition(format!("Q{} must have rank one, found rank {}", k + 1, ranks[k])));
        }
    }
    Ok(())
}

fn require_m3(t: &ProjectionTriple) -> Result<()> {
    if t.n() != 3 {
        return Err(precondition(format!("family lives in M_3, got M_{}", t.n())));
    }
    require_rank_one(t, &[0, 1, 2])
}

fn with_q3(mut singles: Vec<Mat>, t: &ProjectionTriple, unital: bool) -> Vec<Mat> {
    if unital {
        singles.push(t.q3.clone());
    }
    singles
}

/// `C·Q1 + (Q1+Q2)·M_n·(Q2+Q3)`, plus `C·Q3` when `unital`.
pub fn family_3_1_1(t: &ProjectionTriple, unital: bool) -> Span {
    let q12 = &t.q1 + &t.q2;
    let q23 = &t.q2 + &t.q3;
    build(t.n(), &with_q3(vec![t.q1.clone()], t, unital), &[(q12, q23)])
}

/// `C·Q1 + C·Q2 + (Q1+Q2)·M_n·Q3`, plus `C·Q3` when `unital`.
pub fn family_3_1_2(t: &ProjectionTriple, unital: bool) -> Result<Span> {
    require_rank_one(t, &[0, 1])?;
    let q12 = &t.q1 + &t.q2;
    Ok(build(t.n(), &with_q3(vec![t.q1.clone(), t.q2.clone()], t, unital), &[(q12, t.q3.clone())]))
}

/// `C·(Q1+Q2) + Q1·M_n·Q2 + (Q1+Q2)·M_n·Q3`, plus `C·Q3` when `unital`.
pub fn family_3_1_6(t: &ProjectionTriple, unital: bool) -> Result<Span> {
    require_rank_one(t, &[0, 1])?;
    let q12 = &t.q1 + &t.q2;
    Ok(build(
        t.n(),
        &with_q3(vec![q12.clone()], t, unital),
        &[(t.q1.clone(), t.q2.clone()), (q12, t.q3.clone())],
    ))
}

/// `C·Q1 + C·Q2 + (Q2+Q3)·M_3·Q3`.
pub fn family_3_2_2(t: &ProjectionTriple) -> Result<Span> {
    require_m3(t)?;
    Ok(build(3, &[t.q1.clone(), t.q2.clone()], &[(&t.q2 + &t.q3, t.q3.clone())]))
}

/// `C·(Q1+Q2) + C·Q3 + Q1·M_3·(Q2+Q3)`.
pub fn family_3_2_5(t: &ProjectionTriple) -> Result<Span> {
    require_m3(t)?;
    Ok(build(3, &[&t.q1 + &t.q2, t.q3.clone()], &[(t.q1.clone(), &t.q2 + &t.q3)]))
}

/// `Q1·M_3·(Q2+Q3) + Q2·M_3·Q3 + C·I`.
pub fn family_3_2_9(t: &ProjectionTriple) -> Result<Span> {
    require_m3(t)?;
    Ok(build(
        3,
        &[Mat::identity(3)],
        &[(t.q1.clone(), &t.q2 + &t.q3), (t.q2.clone(), t.q3.clone())],
    ))
}

fn m3(rows: [[Q; 3]; 3]) -> Mat {
    Mat::from_rows(rows.into_iter().map(Vec::from).collect()).expect("3x3")
}

fn span3(gens: &[Mat]) -> Span {
    Span::from_generators(3, 3, gens).expect("3x3 generators")
}

fn e(i: usize, j: usize) -> Mat {
    Mat::unit(3, i - 1, j - 1)
}

/// Upper triangular matrices in `M_3`.
pub fn t3() -> Span {
    family_3_1_1(&ProjectionTriple::coordinate3(), true)
}

/// `span{E11+E22, E12, E33}`.
pub fn canonical_b() -> Span {
    span3(&[&e(1, 1) + &e(2, 2), e(1, 2), e(3, 3)])
}

/// `span{I, E13, E12+E23}`.
pub fn canonical_c() -> Span {
    span3(&[Mat::identity(3), e(1, 3), &e(1, 2) + &e(2, 3)])
}

/// Diagonal matrices in `M_3`.
pub fn canonical_d() -> Span {
    span3(&[e(1, 1), e(2, 2), e(3, 3)])
}

/// Basis matrices of `B_st`, the coefficients of α, β and x in
/// `[[α, s(α−β), x], [0, β, t(α−β)], [0, 0, α]]`.
pub fn b_st_basis(s: &Q, t: &Q) -> [Mat; 3] {
    let (o, z) = (Q::from_int(1), Q::zero());
    [
        m3([[o.clone(), s.clone(), z.clone()], [z.clone(), z.clone(), t.clone()], [z.clone(), z.clone(), o.clone()]]),
        m3([[z.clone(), -s, z.clone()], [z.clone(), o.clone(), -t], [z.clone(), z.clone(), z.clone()]]),
        e(1, 3),
    ]
}

pub fn b_st(s: &Q, t: &Q) -> Span {
    span3(&b_st_basis(s, t))
}

/// Basis of `C_r = {[[α, x, y], [0, α, r·x], [0, 0, α]]}`: `I`, `E12 + r·E23`, `E13`.
pub fn c_r_basis(r: &Q) -> Result<[Mat; 3]> {
    if r.is_zero() {
        return Err(precondition("C_r needs r != 0"));
    }
    Ok([Mat::identity(3), &e(1, 2) + &e(2, 3).scale(r), e(1, 3)])
}

pub fn c_r(r: &Q) -> Result<Span> {
    Ok(span3(&c_r_basis(r)?))
}

/// Basis of `D_rst`, the coefficients of α, β, γ in
/// `[[α, r(α−β), s(α−γ)−rt(γ−β)], [0, β, t(γ−β)], [0, 0, γ]]`.
pub fn d_rst_basis(r: &Q, s: &Q, t: &Q) -> [Mat; 3] {
    let (o, z) = (Q::from_int(1), Q::zero());
    let rt = r * t;
    [
        m3([[o.clone(), r.clone(), s.clone()], [z.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z.clone()]]),
        m3([[z.clone(), -r, rt.clone()], [z.clone(), o.clone(), -t], [z.clone(), z.clone(), z.clone()]]),
        m3([[z.clone(), z.clone(), -(s + &rt)], [z.clone(), z.clone(), t.clone()], [z.clone(), z.clone(), o]]),
    ]
}

pub fn d_rst(r: &Q, s: &Q, t: &Q) -> Span {
    span3(&d_rst_basis(r, s, t))
}

/// The algebra of the introductory counterexample, `C·(Q1+Q2)` for the
/// rank-one coordinate triple.
pub fn section2_algebra() -> Span {
    span3(&[&e(1, 1) + &e(2, 2)])
}

/// Convenience wrapper tying family spans to their coordinate triple.
pub fn coordinate_family(name: &str) -> Result<Family> {
    let t = ProjectionTriple::coordinate3();
    let span = match name {
        "3.1.1" => family_3_1_1(&t, true),
        "3.1.2" => family_3_1_2(&t, true)?,
        "3.1.6" => family_3_1_6(&t, true)?,
        "3.2.2" => family_3_2_2(&t)?,
        "3.2.5" => family_3_2_5(&t)?,
        "3.2.9" => family_3_2_9(&t)?,
        other => return Err(precondition(format!("'{other}' is not a projection-triple family"))),
    };
    Ok(Family::new(name, span, Some(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_int(x)).collect()
    }

    #[test]
    fn rank_one_examples() {
        assert_eq!(rank_one(&v(&[1, 0, 0]), &v(&[1, 0, 0])).unwrap(), e(1, 1));
        assert_eq!(rank_one(&v(&[1, 0, 0]), &v(&[0, 0, 1])).unwrap(), e(1, 3));
        let y = vec![Q::zero(), Q::from_int(1), Q::i()];
        let expect = &e(2, 2) - &e(2, 3).scale(&Q::i());
        assert_eq!(rank_one(&v(&[0, 1, 0]), &y).unwrap(), expect);
    }

    #[test]
    fn rank_one_composition() {
        let x = vec![q("1+i"), q("2"), q("-1/2")];
        let y = vec![q("3"), q("i"), q("1")];
        let u = vec![q("2"), q("-i"), q("5/3")];
        let w = vec![q("1"), q("1-i"), q("0")];
        let lhs = &rank_one(&x, &y).unwrap() * &rank_one(&u, &w).unwrap();
        let inner: Q = u.iter().zip(&y).map(|(a, b)| a * &b.conj()).sum();
        assert_eq!(lhs, rank_one(&x, &w).unwrap().scale(&inner));
    }

    #[test]
    fn lr_examples() {
        let t = ProjectionTriple::coordinate3();
        assert_eq!(lr_algebra(&t.q3, &t.q3).unwrap(), span3(std::slice::from_ref(&t.q3)));
        let i = Mat::identity(3);
        assert_eq!(lr_algebra(&i, &i).unwrap(), Span::full(3));
        assert_eq!(lr_algebra(&(&t.q1 + &t.q2), &(&t.q2 + &t.q3)).unwrap().dim(), 4);
        assert!(lr_algebra(&e(1, 2), &i).is_err());
    }

    #[test]
    fn family_dimensions() {
        let t = ProjectionTriple::coordinate3();
        assert_eq!(family_3_1_1(&t, true), t3());
        assert_eq!(t3().dim(), 6);
        assert_eq!(family_3_1_1(&t, false).dim(), 5);
        assert_eq!(family_3_1_2(&t, true).unwrap().dim(), 5);
        assert_eq!(family_3_1_2(&t, false).unwrap().dim(), 4);
        assert_eq!(family_3_1_6(&t, false).unwrap().dim(), 4);
        assert_eq!(family_3_1_6(&t, true).unwrap().dim(), 5);
        assert_eq!(family_3_2_2(&t).unwrap().dim(), 4);
        assert_eq!(family_3_2_5(&t).unwrap().dim(), 4);
        assert_eq!(family_3_2_9(&t).unwrap().dim(), 4);
    }

    #[test]
    fn unit_membership_of_m3_families() {
        let t = ProjectionTriple::coordinate3();
        let i = Mat::identity(3);
        // Q3 lies in (Q2+Q3)·M_3·Q3, so I = Q1 + Q2 + Q3 is in the span.
        assert!(family_3_2_2(&t).unwrap().contains(&i).unwrap());
        assert!(family_3_2_5(&t).unwrap().contains(&i).unwrap());
        assert!(family_3_2_9(&t).unwrap().contains(&i).unwrap());
        let strict = span3(&[e(1, 2), e(1, 3), e(2, 3)]);
        assert_eq!(family_3_2_9(&t).unwrap().intersect(&strict).unwrap().dim(), 3);
    }

    #[test]
    fn families_are_algebras_for_rotated_triples() {
        let basis = vec![v(&[1, 1, 0]), v(&[1, -1, 1]), v(&[-1, 1, 2])];
        let t = ProjectionTriple::from_orthogonal_basis(&basis, 1, 1).unwrap();
        for s in [
            family_3_1_1(&t, true),
            family_3_1_1(&t, false),
            family_3_1_2(&t, true).unwrap(),
            family_3_1_6(&t, false).unwrap(),
            family_3_2_2(&t).unwrap(),
            family_3_2_5(&t).unwrap(),
            family_3_2_9(&t).unwrap(),
        ] {
            assert!(s.is_mult_closed().unwrap());
        }
    }

    #[test]
    fn rank_preconditions() {
        let t = ProjectionTriple::coordinate(4, 2, 1).unwrap();
        assert!(family_3_1_2(&t, true).is_err());
        assert!(family_3_2_2(&ProjectionTriple::coordinate(4, 1, 1).unwrap()).is_err());
        assert!(ProjectionTriple::new(e(1, 1), e(1, 1), &e(2, 2) + &e(3, 3)).is_err());
    }

    #[test]
    fn canonical_forms() {
        let z = Q::zero();
        assert_eq!(b_st(&z, &z), span3(&[&e(1, 1) + &e(3, 3), e(2, 2), e(1, 3)]));
        assert_eq!(c_r(&Q::from_int(1)).unwrap(), canonical_c());
        assert!(c_r(&z).is_err());
        assert_eq!(canonical_d().dim(), 3);
        let (r, s, t) = (q("2"), q("-1/3"), q("1+i"));
        for a in [b_st(&s, &t), c_r(&r).unwrap(), d_rst(&r, &s, &t)] {
            assert_eq!(a.dim(), 3);
            assert!(a.contains_identity());
            assert!(a.is_mult_closed().unwrap());
        }
    }

    #[test]
    fn d_rst_matches_displayed_parametrization() {
        let (r, s, t) = (q("2"), q("3"), q("5"));
        let (al, be, ga) = (q("7"), q("-2"), q("1/2"));
        let [a, b, c] = d_rst_basis(&r, &s, &t);
        let m = &(&a.scale(&al) + &b.scale(&be)) + &c.scale(&ga);
        let expect = m3([
            [al.clone(), &r * &(&al - &be), &(&s * &(&al - &ga)) - &(&(&r * &t) * &(&ga - &be))],
            [Q::zero(), be.clone(), &t * &(&ga - &be)],
            [Q::zero(), Q::zero(), ga.clone()],
        ]);
        assert_eq!(m, expect);
    }
}
