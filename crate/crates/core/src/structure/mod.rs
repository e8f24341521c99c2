//! Block upper triangular structure of matrix algebras.
//!
//! A unital algebra is brought to reduced block upper triangular form by
//! splitting off minimal invariant subspaces with respect to an orthogonal
//! flag. From that form we read off the block diagonal, the radical (the
//! strictly block-upper elements), which diagonal blocks are linked, and an
//! unhinging similarity that makes the algebra the direct sum of the two.

mod invariant;
mod roots;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{internal, precondition, shape, Result};
use crate::exactnum::{solve, GaussianRational as Q, Mat};
use crate::span::Span;

pub use invariant::invariant_subspace;

/// A triangularized algebra together with the data derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForm {
    /// Columns are the new basis: `triangularized = similarity⁻¹·A·similarity`.
    pub similarity: Mat,
    pub block_dims: Vec<usize>,
    pub triangularized: Span,
    pub block_diagonal: Span,
    pub radical: Span,
    /// Groups of linked diagonal blocks, numbered from 1.
    pub linked_partition: Vec<Vec<usize>>,
    pub unhinged: bool,
}

/// Dimension of `Q_i·Rad·Q_j` for a pair of blocks `i < j`, numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSupport {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(crate::error::Error::Parse(format!("unknown side '{s}'"))),
        }
    }
}

fn require_algebra(s: &Span) -> Result<()> {
    if !s.is_square() {
        return Err(shape("structure needs a span of square matrices"));
    }
    if !s.is_mult_closed()? {
        return Err(precondition("span is not closed under multiplication"));
    }
    Ok(())
}

/// Whether `s` acts irreducibly, i.e. is all of `M_n`.
pub fn is_irreducible(s: &Span) -> Result<bool> {
    require_algebra(s)?;
    Ok(s.dim() == s.n() * s.n())
}

impl BlockForm {
    pub fn n(&self) -> usize {
        self.similarity.rows()
    }

    /// The same form for the anti-transposed algebra, with block order
    /// reversed. Block upper triangularity is preserved.
    pub fn anti_transpose(&self) -> Result<BlockForm> {
        let mut out = BlockForm {
            similarity: self.similarity.inverse()?.anti_transpose()?,
            block_dims: self.block_dims.iter().rev().copied().collect(),
            triangularized: self.triangularized.anti_transpose()?,
            block_diagonal: self.block_diagonal.anti_transpose()?,
            radical: Span::zero(self.n(), self.n()),
            linked_partition: Vec::new(),
            unhinged: self.unhinged,
        };
        out.radical = compute_radical(&out)?;
        out.linked_partition = linked_partition(&out)?;
        Ok(out)
    }

    /// Block index of each coordinate.
    fn owner(&self) -> Vec<usize> {
        self.block_dims.iter().enumerate().flat_map(|(b, &d)| std::iter::repeat_n(b, d)).collect()
    }

    fn offsets(&self) -> Vec<usize> {
        self.block_dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    }

    fn block_of(&self, a: &Mat, i: usize, j: usize) -> Mat {
        let off = self.offsets();
        a.block(off[i], off[j], self.block_dims[i], self.block_dims[j])
    }

    fn diagonal_part(&self, a: &Mat) -> Mat {
        let owner = self.owner();
        let mut d = a.clone();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if owner[i] != owner[j] {
                    d.set(i, j, Q::zero());
                }
            }
        }
        d
    }

    fn strict_upper_positions(&self) -> Vec<(usize, usize)> {
        let owner = self.owner();
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| owner[i] < owner[j]).collect()
    }

    fn is_block_upper(&self, a: &Mat) -> bool {
        let owner = self.owner();
        (0..a.rows()).all(|i| (0..a.cols()).all(|j| owner[i] <= owner[j] || a.get(i, j).is_zero()))
    }

    /// Dimension of the algebra of `i`-th diagonal blocks.
    fn diagonal_block_dim(&self, i: usize) -> usize {
        let d = self.block_dims[i];
        let blocks: Vec<Mat> = self.triangularized.basis().iter().map(|a| self.block_of(a, i, i)).collect();
        Span::from_generators(d, d, &blocks).expect("square blocks").dim()
    }
}

/// Orthogonal-flag basis splitting `s` into irreducible diagonal blocks.
fn flag(s: &Span) -> Result<(Vec<Vec<Q>>, Vec<usize>)> {
    let n = s.n();
    let Some(w) = invariant::minimal_invariant(s)? else {
        let basis = (0..n).map(|i| Mat::identity(n).column(i)).collect();
        return Ok((basis, vec![n]));
    };
    let complement = w.conj_transpose().kernel();
    let u = Mat::from_columns(&complement)?;
    let quotient = invariant::restrict(s, &u)?;
    let (sub, mut dims) = flag(&quotient)?;
    let mut basis: Vec<Vec<Q>> = (0..w.cols()).map(|j| w.column(j)).collect();
    basis.extend(sub.iter().map(|v| u.mul_vec(v)));
    dims.insert(0, w.cols());
    Ok((basis, dims))
}

fn inner(x: &[Q], y: &[Q]) -> Q {
    x.iter().zip(y).map(|(a, b)| &a.conj() * b).sum()
}

/// Gram–Schmidt without normalization, so everything stays in `Q(i)`.
fn orthogonalize(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut u = v.clone();
        for w in &out {
            let c = &inner(w, v) / &inner(w, w);
            for (x, y) in u.iter_mut().zip(w) {
                *x -= &(&c * y);
            }
        }
        out.push(u);
    }
    out
}

fn strict_upper_space(bf: &BlockForm) -> Span {
    let n = bf.n();
    let units: Vec<Mat> = bf.strict_upper_positions().into_iter().map(|(i, j)| Mat::unit(n, i, j)).collect();
    Span::from_generators(n, n, &units).expect("n×n units")
}

/// Reduced block upper triangular form of a unital algebra with respect to
/// an orthogonal decomposition of `Q(i)^n`.
pub fn triangularize(s: &Span) -> Result<BlockForm> {
    require_algebra(s)?;
    if !s.contains_identity() {
        return Err(precondition("triangularize needs a unital algebra"));
    }
    let (basis, block_dims) = flag(s)?;
    let similarity = Mat::from_columns(&orthogonalize(&basis))?;
    let triangularized = s.conjugate(&similarity)?;
    let mut bf = BlockForm {
        similarity,
        block_dims,
        triangularized,
        block_diagonal: Span::zero(s.n(), s.n()),
        radical: Span::zero(s.n(), s.n()),
        linked_partition: Vec::new(),
        unhinged: false,
    };
    if !bf.triangularized.basis().iter().all(|a| bf.is_block_upper(a)) {
        return Err(internal("flag basis does not triangularize the algebra"));
    }
    for i in 0..bf.block_dims.len() {
        let d = bf.block_dims[i];
        if bf.diagonal_block_dim(i) != d * d {
            return Err(internal("diagonal block is not a full matrix algebra"));
        }
    }
    bf.block_diagonal = bf.triangularized.map(s.n(), s.n(), |a| bf.diagonal_part(a))?;
    bf.radical = compute_radical(&bf)?;
    bf.linked_partition = linked_partition(&bf)?;
    Ok(bf)
}

/// Elements of the triangularized algebra that are strictly block upper.
pub fn compute_radical(bf: &BlockForm) -> Result<Span> {
    bf.triangularized.intersect(&strict_upper_space(bf))
}

/// Linked diagonal blocks, numbered from 1, grouped by transitive closure.
///
/// Blocks `i` and `j` are linked when the pairs `(A_ii, A_jj)` fill less than
/// the direct sum of the two diagonal block algebras.
pub fn linked_partition(bf: &BlockForm) -> Result<Vec<Vec<usize>>> {
    let m = bf.block_dims.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let dims: Vec<usize> = (0..m).map(|i| bf.diagonal_block_dim(i)).collect();
    for i in 0..m {
        for j in i + 1..m {
            let pairs: Vec<Vec<Q>> = bf
                .triangularized
                .basis()
                .iter()
                .map(|a| {
                    let mut v = bf.block_of(a, i, i).into_entries();
                    v.extend(bf.block_of(a, j, j).into_entries());
                    v
                })
                .collect();
            let joint = Mat::from_rows(pairs)?.rank();
            if joint < dims[i] + dims[j] {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; m];
    for i in 0..m {
        let r = root(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i + 1);
    }
    Ok(groups)
}

/// Coordinates of `m` at the given positions.
fn entries_at(m: &Mat, positions: &[(usize, usize)]) -> Vec<Q> {
    positions.iter().map(|&(i, j)| m.get(i, j).clone()).collect()
}

/// Conjugates by `I + N`, `N` strictly block upper, so that the algebra
/// becomes `BD(A) ⊕ Rad(A)`.
///
/// First a subalgebra of the triangularized algebra mapping isomorphically
/// onto the block diagonal is found, correcting a linear lift modulo
/// successive powers of the radical. That subalgebra is then conjugated
/// onto the block diagonal itself.
pub fn unhinge(bf: &BlockForm) -> Result<BlockForm> {
    let n = bf.n();
    let bd = bf.block_diagonal.basis().to_vec();
    let k = bd.len();
    let positions = bf.strict_upper_positions();
    let tri = bf.triangularized.basis();

    // Linear lift: sigma_j in the algebra with diagonal part bd_j.
    let diag_cols: Vec<Vec<Q>> = tri.iter().map(|a| bf.diagonal_part(a).into_entries()).collect();
    let diag_mat = Mat::from_columns(&diag_cols)?;
    let mut sigma = Vec::with_capacity(k);
    for b in &bd {
        let rhs = Mat::new(n * n, 1, b.entries().to_vec())?;
        let x = solve(&diag_mat, &rhs)?.ok_or_else(|| internal("block diagonal element has no lift"))?;
        sigma.push(bf.triangularized.combine(&x.column(0)));
    }
    let structure: Vec<Vec<Vec<Q>>> = bd
        .iter()
        .map(|a| {
            bd.iter()
                .map(|b| bf.block_diagonal.coordinates(&(a * b)).map(|c| c.expect("closed block diagonal")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut power = bf.radical.clone();
    while !power.is_zero() {
        let defect: Vec<Mat> = (0..k * k)
            .map(|jk| {
                let (j, l) = (jk / k, jk % k);
                let mut y = &sigma[j] * &sigma[l];
                for (c, s) in structure[j][l].iter().zip(&sigma) {
                    if !c.is_zero() {
                        y = &y - &s.scale(c);
                    }
                }
                y
            })
            .collect();
        if defect.iter().all(Mat::is_zero) {
            break;
        }
        let next = power.product(&bf.radical)?;
        // Unknowns: r_j in `power` for each j, then z_jl in `next` for each pair.
        let pb = power.basis();
        let nb = next.basis();
        let cols = k * pb.len() + k * k * nb.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..k {
            for l in 0..k {
                let jl = j * k + l;
                let mut block = vec![vec![Q::zero(); cols]; positions.len()];
                for (a, p) in pb.iter().enumerate() {
                    // sigma_j·r_l + r_j·sigma_l − sum_m c_jlm r_m
                    let contributions = [(l, &sigma[j] * p, true), (j, p * &sigma[l], true)];
                    for (who, m, _) in contributions {
                        for (row, x) in block.iter_mut().zip(entries_at(&m, &positions)) {
                            row[who * pb.len() + a] += &x;
                        }
                    }
                    for (mi, c) in structure[j][l].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (row, x) in block.iter_mut().zip(entries_at(p, &positions)) {
                            row[mi * pb.len() + a] -= &(c * &x);
                        }
                    }
                }
                for (c, z) in nb.iter().enumerate() {
                    for (row, x) in block.iter_mut().zip(entries_at(z, &positions)) {
                        row[k * pb.len() + jl * nb.len() + c] -= &x;
                    }
                }
                rows.extend(block);
                rhs.extend(entries_at(&defect[jl], &positions).into_iter().map(|x| -x));
            }
        }
        let a = Mat::from_rows(rows)?;
        let b = Mat::new(rhs.len(), 1, rhs)?;
        let x = solve(&a, &b)?.ok_or_else(|| internal("no multiplicative lift of the block diagonal"))?.column(0);
        for (j, s) in sigma.iter_mut().enumerate() {
            let r = power.combine(&x[j * pb.len()..(j + 1) * pb.len()]);
            *s = &*s + &r;
        }
        power = next;
    }

    // sigma_j·N − N·bd_j = bd_j − sigma_j over strictly block-upper N.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (s, b) in sigma.iter().zip(&bd) {
        let mut block = vec![vec![Q::zero(); positions.len()]; positions.len()];
        for (u, &(p, q)) in positions.iter().enumerate() {
            let e = Mat::unit(n, p, q);
            let m = &(s * &e) - &(&e * b);
            for (row, x) in block.iter_mut().zip(entries_at(&m, &positions)) {
                row[u] = x;
            }
        }
        rows.extend(block);
        rhs.extend(entries_at(&(b - s), &positions));
    }
    let mut t = Mat::identity(n);
    if !positions.is_empty() {
        let a = Mat::from_rows(rows)?;
        let b = Mat::new(rhs.len(), 1, rhs)?;
        let x = solve(&a, &b)?.ok_or_else(|| internal("lifted block diagonal is not conjugate to BD"))?;
        for (u, &(p, q)) in positions.iter().enumerate() {
            t.set(p, q, x.get(u, 0).clone());
        }
    }
    let triangularized = bf.triangularized.conjugate(&t)?;
    let mut out = BlockForm {
        similarity: &bf.similarity * &t,
        triangularized,
        unhinged: true,
        ..bf.clone()
    };
    out.radical = compute_radical(&out)?;
    let split = out.block_diagonal.is_subspace_of(&out.triangularized)
        && out.block_diagonal.dim() + out.radical.dim() == out.triangularized.dim();
    if !split {
        return Err(internal("unhinging similarity failed to split the algebra"));
    }
    out.linked_partition = linked_partition(&out)?;
    Ok(out)
}

/// `dim Q_i·Rad·Q_j` for every pair of blocks `i < j`.
pub fn radical_block_supports(bf: &BlockForm) -> Vec<PairSupport> {
    let m = bf.block_dims.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let parts: Vec<Mat> = bf.radical.basis().iter().map(|r| bf.block_of(r, i, j)).collect();
            let dim = Span::from_generators(bf.block_dims[i], bf.block_dims[j], &parts).expect("blocks").dim();
            out.push(PairSupport { i: i + 1, j: j + 1, dim });
        }
    }
    out
}

/// Compact summary of a block form for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureSummary {
    pub block_dims: Vec<usize>,
    pub block_diagonal_dim: usize,
    pub radical_dim: usize,
    pub linked_partition: Vec<Vec<usize>>,
    pub radical_supports: Vec<PairSupport>,
    pub unhinged: bool,
    pub similarity: Mat,
}

impl From<&BlockForm> for StructureSummary {
    fn from(bf: &BlockForm) -> StructureSummary {
        StructureSummary {
            block_dims: bf.block_dims.clone(),
            block_diagonal_dim: bf.block_diagonal.dim(),
            radical_dim: bf.radical.dim(),
            linked_partition: bf.linked_partition.clone(),
            radical_supports: radical_block_supports(bf),
            unhinged: bf.unhinged,
            similarity: bf.similarity.clone(),
        }
    }
}

/// Triangularize and unhinge in one step.
pub fn analyze(s: &Span) -> Result<BlockForm> {
    unhinge(&triangularize(s)?)
}

/// The projection `Q` with `s = M_{n×p}·Q` (left modules) or `s = Q·M_{n×p}`
/// (right modules).
pub fn find_module_projection(s: &Span, side: Side) -> Result<Mat> {
    let (n, p) = (s.n(), s.p());
    let ok = match side {
        Side::Left => (0..n * n).all(|u| {
            let e = Mat::unit(n, u / n, u % n);
            s.basis().iter().all(|x| s.contains(&(&e * x)).unwrap_or(false))
        }),
        Side::Right => (0..p * p).all(|u| {
            let e = Mat::unit(p, u / p, u % p);
            s.basis().iter().all(|x| s.contains(&(x * &e)).unwrap_or(false))
        }),
    };
    if !ok {
        return Err(precondition("span is not a module over the full matrix algebra on that side"));
    }
    let (size, vectors): (usize, Vec<Vec<Q>>) = match side {
        Side::Left => (p, s.basis().iter().flat_map(|x| x.to_rows()).collect()),
        Side::Right => (n, s.basis().iter().flat_map(|x| (0..p).map(move |j| x.column(j))).collect()),
    };
    let mut rows = vectors;
    let pivots = crate::exactnum::rref_rows(&mut rows, size);
    rows.truncate(pivots.len());
    let q = if rows.is_empty() {
        Mat::zeros(size, size)
    } else {
        // Left: row vectors x project as x·Q with Q = W*(WW*)⁻¹W, which is
        // the column formula applied to V = W*.
        let v = match side {
            Side::Left => Mat::from_columns(&rows.iter().map(|r| r.iter().map(Q::conj).collect()).collect::<Vec<_>>())?,
            Side::Right => Mat::from_columns(&rows)?,
        };
        crate::generators::projection_from_columns(&v)?
    };
    let other = match side {
        Side::Left => n,
        Side::Right => p,
    };
    if s.dim() != other * q.rank() {
        return Err(internal("module dimension does not match the projection rank"));
    }
    Ok(q)
}
