use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GaussianRational;
use crate::error::{shape, Error, Result};

type Q = GaussianRational;

/// Dense row-major matrix over Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Mat {
    /// Builds a matrix from row-major entries, checking the shape.
    pub fn new(rows: usize, cols: usize, data: Vec<Q>) -> Result<Mat> {
        if rows == 0 || cols == 0 {
            return Err(shape(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Mat { rows, cols, data })
    }

    pub(crate) fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(shape("ragged rows"));
        }
        Mat::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer literal helper; panics on an empty argument.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Mat {
        assert!(!rows.is_empty() && C > 0, "empty literal");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Q::from_int(x))).collect();
        Mat { rows: rows.len(), cols: C, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    /// The matrix unit with a single 1 in position `(i, j)` (zero-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        m.data[i * n + j] = Q::one();
        m
    }

    pub fn diag(entries: &[Q]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Q>]) -> Result<Mat> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if c == 0 || r == 0 || cols.iter().any(|v| v.len() != r) {
            return Err(shape("column vectors must be nonempty and of equal length"));
        }
        let mut m = Mat::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entries; this is also the vectorization used by spans.
    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Q> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        self.data.chunks(self.cols).map(<[Q]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn same_shape(&self, other: &Mat) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = Vec::with_capacity(n * p);
        for i in 0..n {
            for j in 0..p {
                let mut acc = Q::zero();
                for k in 0..m {
                    let a = &self.data[i * m + k];
                    let b = &other.data[k * p + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                out.push(acc);
            }
        }
        Ok(Mat::from_vec(n, p, out))
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&Q, &Q) -> Q) -> Result<Mat> {
        if !self.same_shape(other) {
            return Err(shape(format!(
                "{}x{} versus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Mat::from_vec(self.rows, self.cols, data))
    }

    pub fn checked_add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Q) -> Mat {
        let data = self.data.iter().map(|x| x * c).collect();
        Mat::from_vec(self.rows, self.cols, data)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Mat {
        let mut out = self.transpose();
        for x in &mut out.data {
            *x = x.conj();
        }
        out
    }

    /// Reflection about the anti-diagonal, `J·Aᵀ·J` with `J` the flip.
    pub fn anti_transpose(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(shape("anti-transpose needs a square matrix"));
        }
        let n = self.rows;
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.get(n - 1 - j, n - 1 - i).clone();
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Copy of the `nr × nc` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        let mut out = Vec::with_capacity(nr * nc);
        for i in r0..r0 + nr {
            out.extend_from_slice(&self.row(i)[c0..c0 + nc]);
        }
        Mat::from_vec(nr, nc, out)
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(shape("hstack needs equal row counts"));
        }
        let mut out = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            out.extend_from_slice(self.row(i));
            out.extend_from_slice(other.row(i));
        }
        Ok(Mat::from_vec(self.rows, self.cols + other.cols, out))
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.to_rows();
        let pivots = rref_rows(&mut rows, self.cols);
        Rref { reduced: Mat::from_vec(self.rows, self.cols, rows.concat()), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the right null space `{x : A·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let Rref { reduced, pivots } = self.rref();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(r, f);
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Result<Q> {
        if !self.is_square() {
            return Err(shape("determinant needs a square matrix"));
        }
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut det = Q::one();
        for c in 0..n {
            let Some(k) = (c..n).find(|&k| !rows[k][c].is_zero()) else {
                return Ok(Q::zero());
            };
            if k != c {
                rows.swap(k, c);
                det = -det;
            }
            let pivot = rows[c][c].clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if rows[r][c].is_zero() {
                    continue;
                }
                let f = &rows[r][c] * &inv;
                let (top, bottom) = rows.split_at_mut(r);
                for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                    *x -= &(&f * y);
                }
            }
            det = det * pivot;
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(shape("inverse needs a square matrix"));
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n))?;
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(reduced.block(0, n, n, n))
    }
}

/// In-place reduced row echelon form of `rows` (each of length `ncols`).
///
/// Pivots are chosen in the leftmost remaining column, from the first row
/// at or below the current one with a nonzero entry. Zero rows end up at
/// the bottom. Returns the pivot columns.
pub fn rref_rows(rows: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in &mut rows[r][c..] {
                *x = &*x * &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    let t = &f * &pivot_row[j];
                    other[j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// One exact solution `X` of `A·X = B` with free variables set to zero,
/// or `None` when the system is inconsistent.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.rows != b.rows {
        return Err(shape("solve needs A and B with equal row counts"));
    }
    let Rref { reduced, pivots } = a.hstack(b)?.rref();
    if pivots.iter().any(|&p| p >= a.cols) {
        return Ok(None);
    }
    let mut x = Mat::zeros(a.cols, b.cols);
    for (r, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, reduced.get(r, a.cols + j).clone());
        }
    }
    Ok(Some(x))
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix product shape")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.checked_add(rhs).expect("matrix sum shape")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.checked_sub(rhs).expect("matrix difference shape")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_vec(self.rows, self.cols, self.data.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Q>>::deserialize(deserializer)?;
        Mat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_sec2() -> Mat {
        Mat::from_ints(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    }

    #[test]
    fn identity_is_neutral() {
        let a = Mat::from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        assert_eq!(&Mat::identity(3) * &a, a);
        assert_eq!(&a * &Mat::identity(3), a);
    }

    #[test]
    fn squared_compression_matches_hand_value() {
        let p = p_sec2();
        let b = Mat::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]);
        let pbp = &(&p * &b) * &p;
        assert_eq!(&pbp * &pbp, Mat::from_ints(&[[42, -39, -3], [-39, 42, -3], [-3, -3, 6]]));
    }

    #[test]
    fn rref_examples() {
        let z = Mat::zeros(3, 3).rref();
        assert_eq!(z.rank(), 0);
        let i = Mat::identity(3).rref();
        assert_eq!(i.reduced, Mat::identity(3));
        assert_eq!(i.rank(), 3);
        assert_eq!(p_sec2().rank(), 2);
        let r = p_sec2().rref();
        assert_eq!(r.reduced.rref().reduced, r.reduced);
    }

    #[test]
    fn rref_pivot_rule_is_leftmost_first_row() {
        let a = Mat::from_ints(&[[0, 2, 4], [0, 1, 1], [3, 0, 0]]);
        let r = a.rref();
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.reduced, Mat::identity(3));
    }

    #[test]
    fn solve_examples() {
        let v = Mat::from_ints(&[[1], [-2], [3]]);
        assert_eq!(solve(&Mat::identity(3), &v).unwrap(), Some(v));
        let a = Mat::from_ints(&[[1], [1]]);
        let b = Mat::from_ints(&[[1], [2]]);
        assert_eq!(solve(&a, &b).unwrap(), None);
        // Free variables are zeroed.
        let a = Mat::from_ints(&[[1, 1]]);
        let b = Mat::from_ints(&[[5]]);
        assert_eq!(solve(&a, &b).unwrap(), Some(Mat::from_ints(&[[5], [0]])));
        assert!(solve(&a, &Mat::zeros(2, 1)).is_err());
    }

    #[test]
    fn transposes() {
        let d = Mat::diag(&[Q::from_int(1), Q::from_int(2), Q::from_int(3)]);
        assert_eq!(d.anti_transpose().unwrap(), Mat::diag(&[Q::from_int(3), Q::from_int(2), Q::from_int(1)]));
        assert_eq!(Mat::unit(3, 0, 1).anti_transpose().unwrap(), Mat::unit(3, 1, 2));
        let j = Mat::from_ints(&[[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        let a = Mat::from_rows(vec![
            vec![Q::gaussian(1, 2), Q::from_int(3), Q::ratio(1, 2)],
            vec![Q::i(), Q::from_int(0), Q::from_int(-4)],
            vec![Q::from_int(5), Q::gaussian(-1, 1), Q::from_int(7)],
        ])
        .unwrap();
        assert_eq!(a.anti_transpose().unwrap(), &(&j * &a.transpose()) * &j);
        assert_eq!(a.conj_transpose().get(0, 0), &Q::gaussian(1, -2));
        assert!(Mat::zeros(2, 3).anti_transpose().is_err());
    }

    #[test]
    fn det_and_inverse() {
        assert_eq!(Mat::identity(3).det().unwrap(), Q::from_int(1));
        assert_eq!(p_sec2().det().unwrap(), Q::from_int(0));
        let s = &Mat::identity(3) + &Mat::unit(3, 0, 1);
        assert_eq!(s.inverse().unwrap(), &Mat::identity(3) - &Mat::unit(3, 0, 1));
        assert_eq!(p_sec2().inverse(), Err(Error::Singular));
        let a = Mat::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(a.det().unwrap(), Q::from_int(-1));
    }

    #[test]
    fn kernel_spans_null_space() {
        let k = p_sec2().kernel();
        assert_eq!(k, vec![vec![Q::from_int(1); 3]]);
        assert!(Mat::identity(2).kernel().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let a = Mat::from_rows(vec![vec![Q::gaussian(1, -1), Q::ratio(2, 3)]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1-i","2/3"]]"#);
        assert_eq!(serde_json::from_str::<Mat>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Mat>(r#"[["1"],["2","3"]]"#).is_err());
        assert!(serde_json::from_str::<Mat>(r#"[]"#).is_err());
    }
}
