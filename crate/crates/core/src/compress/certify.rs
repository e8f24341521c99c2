//! Exact replay of the non-compressibility arguments for `B_st`, `C_r` and
//! `D_rst`.
//!
//! For fixed `A`, `B`, `P` and an unknown `C = Σ c_i·b_i` in the algebra, every
//! entry of `G = P·A·P·B·P − P·C·P` is an affine form in the coefficients
//! `c_i`. The certificates manipulate these forms symbolically, so each
//! displayed identity is verified as an identity in the remaining unknowns,
//! not just at sample points.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{internal, precondition, Error, Result};
use crate::exactnum::{solve, GaussianRational, Mat};
use crate::generators::{b_st, b_st_basis, c_r, c_r_basis, d_rst, d_rst_basis, is_projection};
use crate::span::Span;

type Q = GaussianRational;

/// `c0 + Σ coefs[i]·u_i` over the unknowns `u_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Affine {
    c0: Q,
    coefs: Vec<Q>,
}

impl Affine {
    fn constant(c0: Q, vars: usize) -> Affine {
        Affine { c0, coefs: vec![Q::zero(); vars] }
    }

    fn from_parts(c0: Q, coefs: &[Q]) -> Affine {
        Affine { c0, coefs: coefs.to_vec() }
    }

    fn scale(&self, k: &Q) -> Affine {
        Affine { c0: &self.c0 * k, coefs: self.coefs.iter().map(|c| c * k).collect() }
    }

    fn sub(&self, other: &Affine) -> Affine {
        Affine {
            c0: &self.c0 - &other.c0,
            coefs: self.coefs.iter().zip(&other.coefs).map(|(a, b)| a - b).collect(),
        }
    }

    /// Replaces unknown `k` by the form `value` (which must not involve `k`).
    fn substitute(&self, k: usize, value: &Affine) -> Affine {
        let c = self.coefs[k].clone();
        let mut out = self.clone();
        out.coefs[k] = Q::zero();
        let add = value.scale(&c);
        out.c0 = &out.c0 + &add.c0;
        for (a, b) in out.coefs.iter_mut().zip(&add.coefs) {
            *a = &*a + b;
        }
        out
    }

    /// Solves `self = 0` for unknown `k`.
    fn solve_for(&self, k: usize) -> Result<Affine> {
        let inv = self.coefs[k]
            .inv()
            .ok_or_else(|| internal(format!("equation does not involve unknown {k}")))?;
        let mut rest = self.clone();
        rest.coefs[k] = Q::zero();
        Ok(rest.scale(&-inv))
    }

    fn is_constant(&self) -> bool {
        self.coefs.iter().all(Zero::is_zero)
    }
}

/// Entries of `G` as affine forms in the coefficients of `C`.
struct GForms {
    forms: Vec<Affine>,
    n: usize,
    fixed: Mat,
    moving: Vec<Mat>,
}

impl GForms {
    fn new(a: &Mat, b: &Mat, p: &Mat, basis: &[Mat]) -> GForms {
        let fixed = &(&(&(p * a) * p) * b) * p;
        let moving: Vec<Mat> = basis.iter().map(|m| &(p * m) * p).collect();
        let n = p.rows();
        let forms = (0..n * n)
            .map(|k| {
                let coefs: Vec<Q> = moving.iter().map(|m| -&m.entries()[k]).collect();
                Affine::from_parts(fixed.entries()[k].clone(), &coefs)
            })
            .collect();
        GForms { forms, n, fixed, moving }
    }

    /// `g_ij`, one-based as in the displayed arguments.
    fn g(&self, i: usize, j: usize) -> &Affine {
        &self.forms[(i - 1) * self.n + (j - 1)]
    }

    /// Whether `G = 0` has any solution, decided by exact elimination.
    fn system_solvable(&self) -> Result<bool> {
        let cols: Vec<Vec<Q>> = self.moving.iter().map(|m| m.entries().to_vec()).collect();
        let lhs = Mat::from_columns(&cols)?;
        let rhs = Mat::from_columns(&[self.fixed.entries().to_vec()])?;
        Ok(solve(&lhs, &rhs)?.is_some())
    }
}

/// Membership of `(PAP)(PBP)` in the corner `P·algebra·P`.
fn product_in_corner(alg: &Span, a: &Mat, b: &Mat, p: &Mat) -> Result<bool> {
    let pap = &(p * a) * p;
    let pbp = &(p * b) * p;
    alg.compress(p)?.contains(&(&pap * &pbp))
}

/// Asserts `lhs` is the constant `rhs`, with a diagnostic naming the step.
fn expect_constant(form: &Affine, rhs: &Q, what: &str) -> Result<Q> {
    if !form.is_constant() {
        return Err(internal(format!("{what}: combination still depends on the unknowns")));
    }
    if &form.c0 != rhs {
        return Err(internal(format!("{what}: got {} but expected {rhs}", form.c0)));
    }
    Ok(form.c0.clone())
}

fn cross_check(solvable: bool, in_corner: bool) -> Result<()> {
    if solvable != in_corner {
        return Err(internal("linear-system and span-membership routes disagree"));
    }
    if in_corner {
        return Err(internal("the product lies in the corner, contradicting the identity"));
    }
    Ok(())
}

fn real(k: &BigRational) -> Q {
    Q::real(k.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateB {
    pub s: Q,
    pub t: Q,
    pub k: Q,
    pub a: Mat,
    pub b: Mat,
    pub p: Mat,
    /// Scalar `c` with `P² = c·P`.
    pub p_scale: Q,
    pub identity_lhs: Q,
    pub identity_rhs: Q,
    pub system_solvable: bool,
    pub product_in_corner: bool,
}

/// Certificate that `P·B_st·P` is not an algebra for the projection
/// `P/(k²+2)` with `P = [[k²+1, −k, −1], [−k, 2, −k], [−1, −k, k²+1]]`.
pub fn certify_b(s: &Q, t: &Q, k: &BigRational) -> Result<CertificateB> {
    let kq = real(k);
    for (name, v) in [("0", &Q::zero()), ("s", s), ("t", t)] {
        if &kq == v {
            return Err(precondition(format!("k must differ from {name}")));
        }
    }
    let one = Q::from_int(1);
    let k2 = &kq * &kq;
    let z = Q::zero();
    let a = Mat::from_rows(vec![
        vec![one.clone(), s.clone(), z.clone()],
        vec![z.clone(), z.clone(), t.clone()],
        vec![z.clone(), z.clone(), one.clone()],
    ])?;
    let b = Mat::unit(3, 0, 2);
    let p = Mat::from_rows(vec![
        vec![&k2 + &one, -&kq, -&one],
        vec![-&kq, Q::from_int(2), -&kq],
        vec![-&one, -&kq, &k2 + &one],
    ])?;
    let p_scale = &k2 + &Q::from_int(2);
    check_scaled_projection(&p, &p_scale)?;

    // Unknowns: (α, β, x).
    let g = GForms::new(&a, &b, &p, &b_st_basis(s, t));
    let x0 = g.g(3, 1).solve_for(2)?;
    // x0 = k(α−β+1)(2k−s−t) + 2(α+1) + k²β
    let w = &kq * &(&(&kq + &kq) - &(s + t));
    let two = Q::from_int(2);
    let closed = Affine::from_parts(&w + &two, &[&w + &two, &k2 - &w, z.clone()]);
    if x0 != closed {
        return Err(internal("solved x0 differs from its closed form"));
    }
    let ks = &kq - s;
    let kt = &kq - t;
    let lhs = g.g(1, 1).substitute(2, &x0).scale(&ks).sub(&g.g(3, 3).substitute(2, &x0).scale(&kt));
    let rhs = &(&(&kq * &p_scale) * &ks) * &kt;
    let identity_lhs = expect_constant(&lhs, &rhs, "(k−s)g11 − (k−t)g33")?;

    let system_solvable = g.system_solvable()?;
    let product_in_corner = product_in_corner(&b_st(s, t), &a, &b, &p)?;
    cross_check(system_solvable, product_in_corner)?;
    Ok(CertificateB {
        s: s.clone(),
        t: t.clone(),
        k: kq,
        a,
        b,
        p,
        p_scale,
        identity_lhs,
        identity_rhs: rhs,
        system_solvable,
        product_in_corner,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateC {
    pub r: Q,
    pub a: Mat,
    pub b: Mat,
    pub p: Mat,
    pub p_scale: Q,
    pub identity_lhs: Q,
    pub identity_rhs: Q,
    pub system_solvable: bool,
    pub product_in_corner: bool,
}

/// Certificate that `P·C_r·P` is not an algebra, with `P/3` the projection
/// onto the orthogonal complement of `(1, 1, 1)`.
pub fn certify_c(r: &Q) -> Result<CertificateC> {
    let basis = c_r_basis(r)?;
    let a = basis[1].clone();
    let b = Mat::unit(3, 0, 2);
    let p = Mat::from_ints(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]);
    let p_scale = Q::from_int(3);
    check_scaled_projection(&p, &p_scale)?;

    // Unknowns: (α, x, y).
    let g = GForms::new(&a, &b, &p, &basis);
    let y0 = g.g(3, 1).solve_for(2)?;
    // y0 = 3α − (x+1)(r+1)
    let r1 = r + &Q::from_int(1);
    let closed = Affine::from_parts(-&r1, &[Q::from_int(3), -&r1, Q::zero()]);
    if y0 != closed {
        return Err(internal("solved y0 differs from its closed form"));
    }
    let lhs = g.g(2, 1).substitute(2, &y0).sub(&g.g(3, 2).substitute(2, &y0).scale(r));
    let rhs = r * &Q::from_int(3);
    let identity_lhs = expect_constant(&lhs, &rhs, "g21 − r·g32")?;

    let system_solvable = g.system_solvable()?;
    let product_in_corner = product_in_corner(&c_r(r)?, &a, &b, &p)?;
    cross_check(system_solvable, product_in_corner)?;
    Ok(CertificateC { r: r.clone(), a, b, p, p_scale, identity_lhs, identity_rhs: rhs, system_solvable, product_in_corner })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateD {
    pub r: Q,
    pub s: Q,
    pub t: Q,
    pub k: Q,
    pub m: Q,
    pub a: Mat,
    pub b: Mat,
    pub p: Mat,
    pub p_scale: Q,
    /// Coefficient `K` in `g31 − k·g21 = K·(β0 − γ0)`.
    pub beta_gamma_factor: Q,
    /// Coefficient `L` in `k·g23 − g33 = L·β0` once `β0 = γ0`.
    pub beta_factor: Q,
    pub identity_lhs: Q,
    pub identity_rhs: Q,
    pub system_solvable: bool,
    pub product_in_corner: bool,
}

/// The four side conditions on `(k, m)`, as violation messages.
pub fn d_constraint_violations(r: &Q, s: &Q, t: &Q, k: &BigRational, m: &BigRational) -> Vec<String> {
    let (kq, mq) = (real(k), real(m));
    let one = Q::from_int(1);
    let mut bad = Vec::new();
    if k.is_zero() {
        bad.push("k must be nonzero".to_string());
    }
    if m.is_zero() {
        bad.push("m must be nonzero".to_string());
    }
    if (t * &kq) == one {
        bad.push("t·k must differ from 1".to_string());
    }
    if (r * &mq) == one {
        bad.push("r·m must differ from 1".to_string());
    }
    if &(s * &kq) + &mq == -r {
        bad.push("s·k + m must differ from −r".to_string());
    }
    if &kq - &(&(&(r * t) + s) * &mq) == -t {
        bad.push("k − (r·t + s)·m must differ from −t".to_string());
    }
    bad
}

/// Certificate that `P·D_rst·P` is not an algebra, with
/// `P = [[k²+1, −m, −mk], [−m, k²+m², −k], [−mk, −k, m²+1]]`.
pub fn certify_d(r: &Q, s: &Q, t: &Q, k: &BigRational, m: &BigRational) -> Result<CertificateD> {
    let bad = d_constraint_violations(r, s, t, k, m);
    if !bad.is_empty() {
        return Err(Error::Precondition(bad.join("; ")));
    }
    let (kq, mq) = (real(k), real(m));
    let one = Q::from_int(1);
    let z = Q::zero();
    let (k2, m2) = (&kq * &kq, &mq * &mq);
    let mk = &mq * &kq;
    let a = Mat::from_rows(vec![
        vec![one.clone(), r.clone(), s.clone()],
        vec![z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone()],
    ])?;
    let b = Mat::from_rows(vec![
        vec![z.clone(), -r, r * t],
        vec![z.clone(), one.clone(), -t],
        vec![z.clone(), z.clone(), z.clone()],
    ])?;
    let p = Mat::from_rows(vec![
        vec![&k2 + &one, -&mq, -&mk],
        vec![-&mq, &k2 + &m2, -&kq],
        vec![-&mk, -&kq, &m2 + &one],
    ])?;
    let c = &(&k2 + &m2) + &one;
    check_scaled_projection(&p, &c)?;

    // Unknowns: (α, β, γ).
    let g = GForms::new(&a, &b, &p, &d_rst_basis(r, s, t));

    // Step 1: g31 − k·g21 = K(β − γ) with K = km·c·(tk − 1).
    let step1 = g.g(3, 1).sub(&g.g(2, 1).scale(&kq));
    let big_k = &(&mk * &c) * &(&(t * &kq) - &one);
    let expect1 = Affine::from_parts(z.clone(), &[z.clone(), big_k.clone(), -&big_k]);
    if step1 != expect1 {
        return Err(internal("g31 − k·g21 is not the expected multiple of β0 − γ0"));
    }
    // Step 2: with γ = β, k·g23 − g33 = c²·β.
    let gamma_is_beta = Affine::from_parts(z.clone(), &[z.clone(), one.clone(), z.clone()]);
    let step2 = g.g(2, 3).scale(&kq).sub(g.g(3, 3)).substitute(2, &gamma_is_beta);
    let big_l = &c * &c;
    let expect2 = Affine::from_parts(z.clone(), &[z.clone(), big_l.clone(), z.clone()]);
    if step2 != expect2 {
        return Err(internal("k·g23 − g33 is not the expected multiple of β0"));
    }
    // Step 3: with β = γ = 0 the weighted combination of g21 and g22 is a
    // nonzero constant.
    let zero_form = Affine::constant(z.clone(), 3);
    let at_zero = |f: &Affine| f.substitute(1, &zero_form).substitute(2, &zero_form);
    let w21 = &(r * &(&k2 + &m2)) - &(&(s * &kq) + &mq);
    let w22 = &(&(&k2 - &(&(s * &kq) * &mq)) - &(r * &mq)) + &one;
    let lhs = at_zero(g.g(2, 1)).scale(&w21).sub(&at_zero(g.g(2, 2)).scale(&w22));
    let rhs = &(&(&(&mk * &c) * &(&(r * &mq) - &one)) * &(&(&(s * &kq) + &mq) + r))
        * &(&(&kq - &(&(&(r * t) + s) * &mq)) + t);
    let identity_lhs = expect_constant(&lhs, &rhs, "weighted g21/g22 combination")?;
    if identity_lhs.is_zero() {
        return Err(internal("final identity vanished despite the side conditions"));
    }

    let system_solvable = g.system_solvable()?;
    let product_in_corner = product_in_corner(&d_rst(r, s, t), &a, &b, &p)?;
    cross_check(system_solvable, product_in_corner)?;
    Ok(CertificateD {
        r: r.clone(),
        s: s.clone(),
        t: t.clone(),
        k: kq,
        m: mq,
        a,
        b,
        p,
        p_scale: c,
        beta_gamma_factor: big_k,
        beta_factor: big_l,
        identity_lhs,
        identity_rhs: rhs,
        system_solvable,
        product_in_corner,
    })
}

fn check_scaled_projection(p: &Mat, c: &Q) -> Result<()> {
    let inv = c.inv().ok_or_else(|| internal("zero projection scale"))?;
    if !is_projection(&p.scale(&inv)) {
        return Err(internal("scaled matrix is not an orthogonal projection"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn rat(s: &str) -> BigRational {
        crate::exactnum::parse_rational(s).unwrap()
    }

    #[test]
    fn b_examples() {
        let c = certify_b(&q("0"), &q("0"), &rat("1")).unwrap();
        assert_eq!(c.identity_lhs, q("3"));
        assert_eq!(c.identity_rhs, q("3"));
        assert!(!c.product_in_corner && !c.system_solvable);
        assert_eq!(certify_b(&q("2"), &q("3"), &rat("1")).unwrap().identity_lhs, q("6"));
        assert!(certify_b(&q("2"), &q("3"), &rat("2")).is_err());
        assert!(certify_b(&q("2"), &q("3"), &rat("0")).is_err());
    }

    #[test]
    fn b_with_complex_parameters() {
        let c = certify_b(&q("1/2+i"), &q("-3i"), &rat("-5/4")).unwrap();
        assert_eq!(c.identity_lhs, c.identity_rhs);
    }

    #[test]
    fn c_examples() {
        assert_eq!(certify_c(&q("1")).unwrap().identity_lhs, q("3"));
        assert_eq!(certify_c(&q("-2")).unwrap().identity_lhs, q("-6"));
        assert!(certify_c(&q("0")).is_err());
        assert_eq!(certify_c(&q("2/3-i")).unwrap().identity_rhs, q("2-3i"));
    }

    #[test]
    fn d_examples() {
        let c = certify_d(&q("0"), &q("0"), &q("0"), &rat("1"), &rat("1")).unwrap();
        assert_eq!(c.identity_lhs, q("-3"));
        assert_eq!(c.beta_factor, q("9"));
        assert!(is_projection(&c.p.scale(&c.p_scale.inv().unwrap())));
        let err = certify_d(&q("1"), &q("0"), &q("0"), &rat("1"), &rat("1")).unwrap_err();
        assert!(err.to_string().contains("r·m"));
        let c = certify_d(&q("2"), &q("-1/3"), &q("1+i"), &rat("3"), &rat("-1/2")).unwrap();
        assert_eq!(c.identity_lhs, c.identity_rhs);
    }

    #[test]
    fn each_d_violation_is_named() {
        let v = d_constraint_violations(&q("1"), &q("0"), &q("1"), &rat("1"), &rat("1"));
        assert!(v.iter().any(|m| m.contains("t·k")));
        assert!(v.iter().any(|m| m.contains("r·m")));
        let v = d_constraint_violations(&q("0"), &q("0"), &q("0"), &rat("0"), &rat("1"));
        assert_eq!(v.len(), 2);
        assert!(v[0].contains("k must be nonzero") && v[1].contains("k − (r·t + s)·m"));
    }
}
