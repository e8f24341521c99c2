//! Characteristic polynomials and their Gaussian-rational roots.
//!
//! Polynomials are coefficient vectors, constant term first. Roots are found
//! by clearing denominators to a monic polynomial over `Z[i]`, lifting its
//! roots modulo a split prime `p ≡ 1 (mod 4)` to a large power of `p`, and
//! recombining the images under both embeddings `i ↦ ±sqrt(-1)`. Every
//! candidate is confirmed by exact evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{GaussianRational as Q, Mat};

pub(crate) type Poly = Vec<Q>;

fn trim(mut f: Poly) -> Poly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

pub(crate) fn eval(f: &[Q], x: &Q) -> Q {
    f.iter().rev().fold(Q::zero(), |acc, c| &(&acc * x) + c)
}

fn derivative(f: &[Q]) -> Poly {
    trim(f.iter().enumerate().skip(1).map(|(k, c)| c * &Q::from_int(k as i64)).collect())
}

fn monic(f: Poly) -> Poly {
    let lead = f.last().expect("nonzero polynomial").inv().expect("nonzero lead");
    f.iter().map(|c| c * &lead).collect()
}

fn div_rem(f: &[Q], g: &[Q]) -> (Poly, Poly) {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lead = g[dg].inv().expect("nonzero divisor");
    if r.len() <= dg {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![Q::zero(); r.len() - dg];
    for k in (0..q.len()).rev() {
        let c = &r[k + dg] * &lead;
        if !c.is_zero() {
            for (j, gj) in g.iter().enumerate() {
                let t = &c * gj;
                r[k + j] -= &t;
            }
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

fn gcd(f: &[Q], g: &[Q]) -> Poly {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// `det(x·I − a)` by the Faddeev–LeVerrier recurrence.
pub(crate) fn char_poly(a: &Mat) -> Poly {
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &Mat::identity(n).scale(&c[n - k + 1]);
        c[n - k] = -(&(a * &m).trace() * &Q::ratio(1, k as i64));
    }
    c
}

/// Distinct roots of `f` lying in `Q(i)`, in no particular order.
pub(crate) fn gaussian_roots(f: &[Q]) -> Vec<Q> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut g = monic(div_rem(&f, &gcd(&f, &derivative(&f))).0);
    let mut roots = Vec::new();
    if g[0].is_zero() {
        roots.push(Q::zero());
        g.remove(0);
    }
    match g.len() {
        0 | 1 => return roots,
        2 => {
            roots.push(-&g[0]);
            return roots;
        }
        _ => {}
    }
    // h(y) = D^deg · g(y / D) is monic over Z[i].
    let deg = g.len() - 1;
    let d = g.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let mut h: Vec<(BigInt, BigInt)> = Vec::with_capacity(deg + 1);
    let mut power = BigInt::one();
    for k in (0..=deg).rev() {
        let c = &g[k];
        let re = c.re() * num_rational::BigRational::from_integer(power.clone());
        let im = c.im() * num_rational::BigRational::from_integer(power.clone());
        h.push((re.to_integer(), im.to_integer()));
        power *= &d;
    }
    h.reverse();
    let scale = Q::real(num_rational::BigRational::from_integer(d));
    for z in integer_roots(&h) {
        let root = &z / &scale;
        if eval(&g, &root).is_zero() {
            roots.push(root);
        }
    }
    roots
}

/// Gaussian-integer roots of a squarefree monic `h` with nonzero constant term.
fn integer_roots(h: &[(BigInt, BigInt)]) -> Vec<Q> {
    let bound = BigInt::one() + h.iter().map(|(a, b)| a.abs() + b.abs()).max().expect("nonempty");
    let Some((p, iota)) = split_prime(h) else {
        return Vec::new();
    };
    let mut modulus = p.clone();
    while modulus <= &bound * 2 + 1 {
        modulus *= &p;
    }
    let iota = lift(&[BigInt::one(), BigInt::zero(), BigInt::one()], iota, &modulus);
    let plus = image(h, &iota, &modulus);
    let minus = image(h, &(&modulus - &iota), &modulus);
    let lift_all = |f: &[BigInt]| -> Vec<BigInt> {
        let fp: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&p)).collect();
        (0..p_as_u64(&p))
            .map(BigInt::from)
            .filter(|x| eval_mod(&fp, x, &p).is_zero())
            .map(|x| lift(f, x, &modulus))
            .collect()
    };
    let us = lift_all(&plus);
    let vs = lift_all(&minus);
    let inv2 = inverse_mod(&BigInt::from(2), &modulus);
    let inv2i = inverse_mod(&(&iota * 2), &modulus);
    let half = &modulus / 2;
    let sym = |x: BigInt| {
        let x = x.mod_floor(&modulus);
        if x > half {
            x - &modulus
        } else {
            x
        }
    };
    let hq: Vec<Q> = h.iter().map(|(re, im)| Q::new(re.clone().into(), im.clone().into())).collect();
    let mut out = Vec::new();
    for u in &us {
        for v in &vs {
            let a = sym((u + v) * &inv2);
            let b = sym((u - v) * &inv2i);
            let z = Q::new(a.into(), b.into());
            if eval(&hq, &z).is_zero() && !out.contains(&z) {
                out.push(z);
            }
        }
    }
    out
}

fn p_as_u64(p: &BigInt) -> u64 {
    u64::try_from(p).expect("small prime")
}

/// The coefficients of `h` under `i ↦ iota`, reduced mod `m`.
fn image(h: &[(BigInt, BigInt)], iota: &BigInt, m: &BigInt) -> Vec<BigInt> {
    h.iter().map(|(a, b)| (a + b * iota).mod_floor(m)).collect()
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn deriv_mod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(k, c)| (c * k).mod_floor(m)).collect()
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not a unit");
    e.x.mod_floor(m)
}

/// Newton-lifts a simple root `x` of `f` mod `p` to a root mod `m = p^k`.
fn lift(f: &[BigInt], mut x: BigInt, m: &BigInt) -> BigInt {
    let df = deriv_mod(f, m);
    for _ in 0..128 {
        let fx = eval_mod(f, &x, m);
        if fx.is_zero() {
            break;
        }
        let d = eval_mod(&df, &x, m);
        x = (x - fx * inverse_mod(&d, m)).mod_floor(m);
    }
    x
}

/// A prime `p ≡ 1 (mod 4)` with a square root of −1, such that both
/// embeddings of `h` have only simple roots modulo `p`.
fn split_prime(h: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt)> {
    (5u64..200_000).step_by(4).filter(|&p| is_prime(p)).find_map(|p| {
        let iota = (2..p).find(|x| (x * x + 1) % p == 0)?;
        let pb = BigInt::from(p);
        let ib = BigInt::from(iota);
        for emb in [ib.clone(), &pb - &ib] {
            let f = image(h, &emb, &pb);
            let df = deriv_mod(&f, &pb);
            for x in (0..p).map(BigInt::from) {
                if eval_mod(&f, &x, &pb).is_zero() && eval_mod(&df, &x, &pb).is_zero() {
                    return None;
                }
            }
        }
        Some((pb, ib))
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
