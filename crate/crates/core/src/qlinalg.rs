//! Exact linear algebra over the rationals.
//!
//! Every basis returned here is read off a reduced row echelon form with
//! pivot columns in ascending order, so repeated runs produce identical
//! matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `a - 1/2*b + c` from `(coefficient, monomial)` pairs; an empty monomial
/// is a constant term. Zero coefficients are dropped; the empty sum is `0`.
pub fn fmt_linear(terms: &[(Q, String)]) -> String {
    let mut out = String::new();
    for (c, m) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let neg = c.is_negative();
        let a = c.abs();
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if m.is_empty() {
            out.push_str(&fmt_q(&a));
        } else {
            if !a.is_one() {
                out.push_str(&fmt_q(&a));
                out.push('*');
            }
            out.push_str(m);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

/// `acc += c * a`
pub fn axpy(acc: &mut [Q], c: &Q, a: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

/// Dense matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| fmt_q(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Q) {
        self.data[r * self.cols + c] = x;
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &Q) {
        self.data[r * self.cols + c] += x;
    }

    pub fn row(&self, r: usize) -> Vec<Q> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                m.set(r - r0, c - c0, self.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and the (ascending) pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let sub = &f * m.get(row, c);
                    if !sub.is_zero() {
                        m.data[r * m.cols + c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

/// Basis of `{x : m x = 0}`, one vector per free column, ascending.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Q>> {
    let (r, pivots) = m.rref();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vec(n);
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Canonical particular solution of `m x = b` (free variables zero), or
/// `None` when the system is inconsistent.
pub fn solve(m: &RatMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix has {} rows, right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    let col = RatMatrix::from_columns(m.rows(), &[b.to_vec()]);
    let aug = m.hstack(&col)?;
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = zero_vec(m.cols());
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols()).clone();
    }
    Ok(Some(x))
}

pub fn in_column_space(m: &RatMatrix, v: &[Q]) -> Result<bool> {
    Ok(solve(m, v)?.is_some())
}

/// `ker(d_out) / im(d_in)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub dim: usize,
    /// Kernel vectors whose classes form a basis of the quotient.
    pub representatives: Vec<Vec<Q>>,
}

/// Computes `ker(d_out)/im(d_in)` where `d_in: U -> V`, `d_out: V -> W`.
pub fn subquotient_dim(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<Subquotient> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "subquotient: d_in lands in dimension {}, d_out starts from {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotComposable("d_out * d_in != 0".into()));
    }
    let kernel = kernel_basis(d_out);
    let image_rank = d_in.rank();
    // Greedily extend the image by kernel vectors in their canonical order.
    let mut echelon = Echelon::new();
    for c in 0..d_in.cols() {
        echelon.insert(dense_to_sparse(&d_in.column(c)));
    }
    let mut reps = Vec::new();
    for k in kernel.iter() {
        if echelon.insert(dense_to_sparse(k)) {
            reps.push(k.clone());
        }
    }
    debug_assert_eq!(reps.len(), kernel.len() - image_rank);
    Ok(Subquotient {
        dim: reps.len(),
        representatives: reps,
    })
}

/// Coordinates of a cycle `v` in the basis of classes `reps`, modulo the
/// column space of `d_in`. `None` if `v` is not in `span(reps) + im(d_in)`.
pub fn class_coordinates(d_in: &RatMatrix, reps: &[Vec<Q>], v: &[Q]) -> Result<Option<Vec<Q>>> {
    let n = v.len();
    let r = RatMatrix::from_columns(n, reps);
    let m = r.hstack(d_in)?;
    Ok(solve(&m, v)?.map(|x| x[..reps.len()].to_vec()))
}

pub fn dense_to_sparse(v: &[Q]) -> BTreeMap<usize, Q> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Incremental row echelon form over an ordered key set. Each stored row has
/// its smallest key as pivot, and that pivot is absent from all later rows'
/// reductions. Used for sparse ranks and for spanning-set bases.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<BTreeMap<K, Q>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the residual and the
    /// multipliers used (row index, coefficient): `v = residual + sum c_i row_i`.
    pub fn reduce(&self, mut v: BTreeMap<K, Q>) -> (BTreeMap<K, Q>, Vec<(usize, Q)>) {
        let mut used = Vec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|k| self.pivots.contains_key(*k)).cloned(),
                Some(c) => v
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.pivots.contains_key(*k))
                    .cloned(),
            };
            let Some(key) = next else { break };
            let ri = self.pivots[&key];
            let row = &self.rows[ri];
            let c = v[&key].clone() / &row[&key];
            for (k, x) in row {
                let e = v.entry(k.clone()).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            used.push((ri, c));
            cursor = Some(key);
        }
        (v, used)
    }

    /// Inserts `v`; returns whether it increased the rank.
    pub fn insert(&mut self, v: BTreeMap<K, Q>) -> bool {
        self.insert_indexed(v).is_some()
    }

    /// Like `insert`, also returns the stored row index and the reduction
    /// multipliers when the rank increased.
    pub fn insert_indexed(&mut self, v: BTreeMap<K, Q>) -> Option<(usize, Vec<(usize, Q)>)> {
        let (res, used) = self.reduce(v);
        let pivot = res.keys().next()?.clone();
        let idx = self.rows.len();
        self.pivots.insert(pivot, idx);
        self.rows.push(res);
        Some((idx, used))
    }
}

/// Sparse matrix given by its rows; only used for exact ranks of large
/// structured systems.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &Q) {
        assert!(r < self.rows && c < self.cols, "sparse index out of range");
        if x.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for ((r, c), x) in &self.entries {
            m.set(*r, *c, x.clone());
        }
        m
    }

    pub fn from_dense(m: &RatMatrix) -> Self {
        let mut s = SparseMatrix::new(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                s.add_to(r, c, m.get(r, c));
            }
        }
        s
    }

    /// `self * other`
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("sparse mul".into()));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for ((r, c), x) in &other.entries {
            by_row.entry(*r).or_default().push((*c, x));
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    out.add_to(*r, *c, &(a * *b));
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact rank by sparse elimination, processing the sparsest rows first.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); self.rows];
        for ((r, c), x) in &self.entries {
            rows[*r].insert(*c, x.clone());
        }
        rows.retain(|r| !r.is_empty());
        rows.sort_by_key(|r| r.len());
        let mut ech = Echelon::new();
        for r in rows {
            ech.insert(r);
        }
        ech.rank()
    }
}

pub fn abs_max_height(v: &[Q]) -> BigInt {
    v.iter()
        .map(|x| x.numer().abs().max(x.denom().abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let k = kernel_basis(&RatMatrix::zeros(2, 2));
        assert_eq!(k, vec![v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(kernel_basis(&m), vec![v(&[-2, 1])]);
    }

    #[test]
    fn solve_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(solve(&id, &v(&[3, 5])).unwrap(), Some(v(&[3, 5])));
        let m = RatMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(solve(&m, &v(&[2])).unwrap(), Some(v(&[2, 0])));
        let z = RatMatrix::from_i64(&[&[0]]);
        assert_eq!(solve(&z, &v(&[1])).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let id = RatMatrix::identity(2);
        assert!(matches!(solve(&id, &v(&[1])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn subquotient_examples() {
        let z = RatMatrix::zeros(2, 0);
        let z2 = RatMatrix::zeros(0, 2);
        assert_eq!(subquotient_dim(&z, &z2).unwrap().dim, 2);
        let id = RatMatrix::identity(1);
        let out = RatMatrix::zeros(0, 1);
        assert_eq!(subquotient_dim(&id, &out).unwrap().dim, 0);
        let zz = RatMatrix::from_i64(&[&[0]]);
        assert_eq!(subquotient_dim(&zz, &zz).unwrap().dim, 1);
    }

    #[test]
    fn subquotient_rejects_non_composable() {
        let id = RatMatrix::identity(1);
        assert!(matches!(subquotient_dim(&id, &id), Err(Error::NotComposable(_))));
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let m = RatMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[1, 3, 4]]);
        assert_eq!(SparseMatrix::from_dense(&m).rank(), m.rank());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn echelon_reduce_reports_multipliers() {
        let mut e = Echelon::new();
        e.insert(dense_to_sparse(&v(&[1, 1, 0])));
        e.insert(dense_to_sparse(&v(&[0, 1, 1])));
        let (res, used) = e.reduce(dense_to_sparse(&v(&[2, 3, 1])));
        assert!(res.is_empty());
        assert_eq!(used, vec![(0, q(2)), (1, q(1))]);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let rows: Vec<Vec<Q>> = xs.chunks(c).map(|ch| ch.iter().map(|&x| q(x)).collect()).collect();
                RatMatrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + kernel_basis(&m).len(), m.cols());
            for k in kernel_basis(&m) {
                prop_assert!(is_zero_vec(&m.mul_vec(&k).unwrap()));
            }
        }

        #[test]
        fn solve_is_sound_and_complete(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 5)) {
            let b: Vec<Q> = (0..m.rows()).map(|i| q(seed[i % seed.len()])).collect();
            match solve(&m, &b).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b),
                None => {
                    let aug = m.hstack(&RatMatrix::from_columns(m.rows(), &[b])).unwrap();
                    prop_assert!(aug.rank() > m.rank());
                }
            }
        }

        #[test]
        fn deterministic(m in small_matrix()) {
            prop_assert_eq!(kernel_basis(&m), kernel_basis(&m.clone()));
        }
    }
}
