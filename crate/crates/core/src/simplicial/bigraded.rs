//! Bigraded Artinian algebras: ideal in bidegrees `(i, j)` with cochain
//! degree `i >= 0` and chain degree `j >= 0`, a horizontal differential of
//! bidegree `(1, 0)` and a vertical one of bidegree `(0, -1)`.
//!
//! Signs use the total parity `i + j`: products commute with
//! `(-1)^{(i+j)(i'+j')}`, `d_h` is a derivation of total parity, and so is
//! `(-1)^i d_v`; equivalently `d_v(ab) = (-1)^{i_b} d_v(a) b + (-1)^{j_a} a d_v(b)`.
//! The total algebra has chain degree `j - i` and differential
//! `d_h + (-1)^i d_v`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::artin::{ArtinCdga, CdgaMap, MultTable};
use crate::error::{invalid, Error, Result};
use crate::qlinalg::{sign, RatMatrix, Q};

#[derive(Clone, Debug)]
pub struct BigradedArtin {
    pub name: String,
    /// (label, cochain degree i, chain degree j)
    pub basis: Vec<(String, i32, i32)>,
    pub d_h: RatMatrix,
    pub d_v: RatMatrix,
    pub mult: MultTable,
}

impl PartialEq for BigradedArtin {
    fn eq(&self, o: &Self) -> bool {
        self.basis == o.basis && self.d_h == o.d_h && self.d_v == o.d_v && {
            let n = self.dim();
            (0..n).all(|a| (0..n).all(|b| self.mul_basis(a, b) == o.mul_basis(a, b)))
        }
    }
}

impl BigradedArtin {
    /// Entries `(src, tgt, c)` for the differentials and `(a, b, c, x)` for
    /// products, both orders listed; indices refer to `basis`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<(String, i32, i32)>,
        d_h: &[(usize, usize, Q)],
        d_v: &[(usize, usize, Q)],
        mult: &[(usize, usize, usize, Q)],
    ) -> Result<Self> {
        let n = basis.len();
        let mut seen = std::collections::HashSet::new();
        for (l, i, j) in &basis {
            if *i < 0 || *j < 0 {
                return invalid(format!("{l}: bidegrees must be nonnegative"));
            }
            if !seen.insert(l.clone()) {
                return invalid(format!("duplicate label {l}"));
            }
        }
        let mut mh = RatMatrix::zeros(n, n);
        let mut mv = RatMatrix::zeros(n, n);
        for (m, entries) in [(&mut mh, d_h), (&mut mv, d_v)] {
            for (s, t, x) in entries {
                if *s >= n || *t >= n {
                    return Err(Error::IndexOutOfRange { index: (*s).max(*t), max: n });
                }
                m.add_to(*t, *s, x);
            }
        }
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for (a, b, c, x) in mult {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::IndexOutOfRange { index: (*a).max(*b).max(*c), max: n });
            }
            *table.entry((*a, *b)).or_default().entry(*c).or_insert_with(Q::zero) += x;
        }
        let mut mt: MultTable = HashMap::new();
        for (k, v) in table {
            let v: Vec<(usize, Q)> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if !v.is_empty() {
                mt.insert(k, v);
            }
        }
        let b = BigradedArtin {
            name: name.into(),
            basis,
            d_h: mh,
            d_v: mv,
            mult: mt,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cochain(&self, a: usize) -> i32 {
        self.basis[a].1
    }

    pub fn chain(&self, a: usize) -> i32 {
        self.basis[a].2
    }

    pub fn label(&self, a: usize) -> &str {
        &self.basis[a].0
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.0 == label)
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &[(usize, Q)] {
        self.mult.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Basis indices in cochain degree `k`.
    pub fn slice(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.cochain(a) == k).collect()
    }

    pub fn max_cochain(&self) -> i32 {
        self.basis.iter().map(|b| b.1).max().unwrap_or(0)
    }

    fn col(m: &RatMatrix, a: usize) -> Vec<(usize, Q)> {
        (0..m.rows())
            .filter(|&r| !m.get(r, a).is_zero())
            .map(|r| (r, m.get(r, a).clone()))
            .collect()
    }

    pub fn d_h_basis(&self, a: usize) -> Vec<(usize, Q)> {
        Self::col(&self.d_h, a)
    }

    pub fn d_v_basis(&self, a: usize) -> Vec<(usize, Q)> {
        Self::col(&self.d_v, a)
    }

    /// Bidegree and square-zero checks, commuting differentials, the
    /// Leibniz rule for `d_h`, then the total algebra's validator (which
    /// covers associativity, commutativity, the total Leibniz rule and
    /// nilpotence).
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for (t, _) in self.d_h_basis(a) {
                if self.cochain(t) != self.cochain(a) + 1 || self.chain(t) != self.chain(a) {
                    return invalid(format!("d_h of {} has the wrong bidegree", self.label(a)));
                }
            }
            for (t, _) in self.d_v_basis(a) {
                if self.cochain(t) != self.cochain(a) || self.chain(t) != self.chain(a) - 1 {
                    return invalid(format!("d_v of {} has the wrong bidegree", self.label(a)));
                }
            }
        }
        for (&(a, b), v) in &self.mult {
            for (c, _) in v {
                if self.cochain(*c) != self.cochain(a) + self.cochain(b) || self.chain(*c) != self.chain(a) + self.chain(b) {
                    return invalid(format!(
                        "product of {} and {} has the wrong bidegree",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        if !self.d_h.mul(&self.d_h)?.is_zero() || !self.d_v.mul(&self.d_v)?.is_zero() {
            return invalid("differentials do not square to zero");
        }
        if self.d_h.mul(&self.d_v)? != self.d_v.mul(&self.d_h)? {
            return invalid("horizontal and vertical differentials do not commute");
        }
        for a in 0..n {
            for b in 0..n {
                let mut lhs = vec![Q::zero(); n];
                for (c, x) in self.mul_basis(a, b) {
                    for (t, y) in self.d_h_basis(*c) {
                        lhs[t] += x * &y;
                    }
                }
                let mut rhs = vec![Q::zero(); n];
                for (da, x) in self.d_h_basis(a) {
                    for (t, y) in self.mul_basis(da, b) {
                        rhs[*t] += &x * y;
                    }
                }
                let s = sign((self.cochain(a) + self.chain(a)) as i64);
                for (db, x) in self.d_h_basis(b) {
                    for (t, y) in self.mul_basis(a, db) {
                        rhs[*t] += &s * &x * y;
                    }
                }
                if lhs != rhs {
                    return invalid(format!(
                        "Leibniz rule for d_h fails on ({}, {})",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        self.tot().map(|_| ())
    }

    /// Entries of the total algebra in this basis order.
    fn tot_entries(&self) -> (Vec<(String, i32)>, Vec<(usize, usize, Q)>, Vec<(usize, usize, usize, Q)>) {
        let basis = self.basis.iter().map(|(l, i, j)| (l.clone(), j - i)).collect();
        let mut d = Vec::new();
        for a in 0..self.dim() {
            for (t, x) in self.d_h_basis(a) {
                d.push((a, t, x));
            }
            let s = sign(self.cochain(a) as i64);
            for (t, x) in self.d_v_basis(a) {
                d.push((a, t, &s * x));
            }
        }
        let mut mult = Vec::new();
        for (&(a, b), v) in &self.mult {
            for (c, x) in v {
                mult.push((a, b, *c, x.clone()));
            }
        }
        (basis, d, mult)
    }

    /// The total algebra: chain degree `j - i`, differential `d_h + (-1)^i d_v`.
    pub fn tot(&self) -> Result<ArtinCdga> {
        let (basis, d, mult) = self.tot_entries();
        ArtinCdga::new(format!("Tot({})", self.name), basis, &d, &mult)
    }
}

/// A map of bigraded Artinian algebras (on ideals).
#[derive(Clone, Debug)]
pub struct BigradedMap {
    pub source: BigradedArtin,
    pub target: BigradedArtin,
    pub matrix: RatMatrix,
}

impl BigradedMap {
    pub fn new(source: BigradedArtin, target: BigradedArtin, matrix: RatMatrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch("bigraded map shape".into()));
        }
        for a in 0..source.dim() {
            for t in 0..target.dim() {
                if !matrix.get(t, a).is_zero()
                    && (source.cochain(a) != target.cochain(t) || source.chain(a) != target.chain(t))
                {
                    return invalid("bigraded map does not preserve bidegrees");
                }
            }
        }
        if matrix.mul(&source.d_h)? != target.d_h.mul(&matrix)? || matrix.mul(&source.d_v)? != target.d_v.mul(&matrix)? {
            return Err(Error::NotChainMap("bigraded map does not commute with the differentials".into()));
        }
        let m = BigradedMap { source, target, matrix };
        m.tot()?;
        Ok(m)
    }

    /// The induced map of total algebras (validated as a cdga map).
    pub fn tot(&self) -> Result<CdgaMap> {
        let s = self.source.tot()?;
        let t = self.target.tot()?;
        let mut m = RatMatrix::zeros(t.dim(), s.dim());
        for a in 0..self.source.dim() {
            let ca = s.index_of(self.source.label(a)).expect("label");
            for r in 0..self.target.dim() {
                let x = self.matrix.get(r, a);
                if !x.is_zero() {
                    m.set(t.index_of(self.target.label(r)).expect("label"), ca, x.clone());
                }
            }
        }
        CdgaMap::new(s, t, m)
    }
}

/// Wraps an ordinary nonnegatively graded Artinian algebra as a bigraded one
/// concentrated in cochain degree 0.
pub fn from_artin(a: &ArtinCdga) -> Result<BigradedArtin> {
    if !a.is_nonneg() {
        return invalid("algebra has negative chain degrees");
    }
    let basis = (0..a.dim()).map(|i| (a.label(i).to_string(), 0, a.chain_degree(i))).collect();
    let d: Vec<(usize, usize, Q)> = (0..a.dim())
        .flat_map(|s| a.d_basis(s).into_iter().map(move |(t, x)| (s, t, x)))
        .collect();
    let mut mult = Vec::new();
    for (&(x, y), v) in a.mult_table() {
        for (c, q) in v {
            mult.push((x, y, *c, q.clone()));
        }
    }
    BigradedArtin::new(a.name(), basis, &[], &d, &mult)
}
