//! Fraction-free corner test over the Gaussian integers.
//!
//! Whether `span{L·A·R : A in basis}` is closed under multiplication does not
//! change when `L`, `R`, or any basis element is multiplied by a nonzero
//! scalar. Clearing denominators once therefore lets the whole test run on
//! Gaussian integers, which is far cheaper than reduced rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Gi {
    re: BigInt,
    im: BigInt,
}

impl Gi {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Gi) -> Gi {
        if self.im.is_zero() && o.im.is_zero() {
            return Gi { re: &self.re * &o.re, im: BigInt::zero() };
        }
        Gi { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn add_assign(&mut self, o: &Gi) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

/// Dense integer matrix obtained by scaling a rational one.
#[derive(Clone, Debug)]
pub(crate) struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Gi>,
}

impl IntMat {
    /// `c·m` for the smallest positive rational `c` making every entry a
    /// Gaussian integer with coprime parts overall.
    pub(crate) fn scaled(m: &Mat) -> IntMat {
        let mut den = BigInt::one();
        for x in m.entries() {
            den = den.lcm(x.re().denom()).lcm(x.im().denom());
        }
        let mut data: Vec<Gi> = m
            .entries()
            .iter()
            .map(|x| Gi {
                re: x.re().numer() * (&den / x.re().denom()),
                im: x.im().numer() * (&den / x.im().denom()),
            })
            .collect();
        remove_content(&mut data);
        IntMat { rows: m.rows(), cols: m.cols(), data }
    }

    fn mul(&self, o: &IntMat) -> IntMat {
        let (n, m, p) = (self.rows, self.cols, o.cols);
        let mut data = Vec::with_capacity(n * p);
        for i in 0..n {
            for j in 0..p {
                let mut acc = Gi { re: BigInt::zero(), im: BigInt::zero() };
                for k in 0..m {
                    let (a, b) = (&self.data[i * m + k], &o.data[k * p + j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                data.push(acc);
            }
        }
        IntMat { rows: n, cols: p, data }
    }
}

/// Divides a vector by the gcd of all integer parts of its entries.
fn remove_content(v: &mut [Gi]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(&x.re).gcd(&x.im);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    let g = g.abs();
    for x in v.iter_mut() {
        x.re /= &g;
        x.im /= &g;
    }
}

/// Row echelon basis over the Gaussian integers (not reduced, not normalized).
struct Echelon {
    rows: Vec<(usize, Vec<Gi>)>,
}

impl Echelon {
    fn reduce(&self, v: &mut [Gi]) {
        for (c, row) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let a = row[*c].clone();
            let b = v[*c].clone();
            for (x, y) in v.iter_mut().zip(row) {
                let mut t = a.mul(x);
                let s = b.mul(y);
                t.re -= s.re;
                t.im -= s.im;
                *x = t;
            }
            remove_content(v);
        }
    }

    fn contains(&self, v: &[Gi]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Gi::is_zero)
    }

    fn insert(&mut self, v: &[Gi]) {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let at = self.rows.partition_point(|(c, _)| *c < p);
            self.rows.insert(at, (p, v));
        }
    }
}

/// Whether `span{corange·A·range : A in basis}` is multiplicatively closed.
pub(crate) fn compressed_closed(basis: &[IntMat], corange: &IntMat, range: &IntMat) -> bool {
    let r = range.cols;
    let mut ech = Echelon { rows: Vec::new() };
    let mut elems: Vec<IntMat> = Vec::new();
    for a in basis {
        let w = corange.mul(a).mul(range);
        let before = ech.rows.len();
        ech.insert(&w.data);
        if ech.rows.len() > before {
            elems.push(w);
        }
    }
    if elems.len() == r * r {
        return true;
    }
    for a in &elems {
        for b in &elems {
            if !ech.contains(&a.mul(b).data) {
                return false;
            }
        }
    }
    true
}
