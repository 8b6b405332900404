//! Finite-dimensional DGLAs (cochain graded), the standard constructors and
//! the coefficient extension `Tot(L (x) m(A))`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::artin::{ArtinCdga, CdgaMap};
use crate::complexes::{check_degree, BasisElem, Cohomology, CochainComplex, GradedSpace};
use crate::error::{invalid, Error, Result};
use crate::qlinalg::{axpy, kernel_basis, q, sign, solve, zero_vec, RatMatrix, Q};

pub type BracketTable = HashMap<(usize, usize), Vec<(usize, Q)>>;

#[derive(Clone, Debug)]
pub struct Dgla {
    name: String,
    complex: CochainComplex,
    bracket: BracketTable,
}

impl PartialEq for Dgla {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex
            && (0..self.dim()).all(|a| {
                (0..self.dim()).all(|b| self.bracket_basis_vec(a, b) == other.bracket_basis_vec(a, b))
            })
    }
}

impl Dgla {
    /// Builds and validates a DGLA from `(label, cochain degree)` basis
    /// entries, differential entries `(src, tgt, c)` and bracket entries
    /// `(a, b, c, x)` meaning `[e_a, e_b]` has coefficient `x` on `e_c`.
    /// If only one order of a pair is listed, the other is filled in by graded
    /// antisymmetry. Indices refer to the input order.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<(String, i32)>,
        d: &[(usize, usize, Q)],
        bracket: &[(usize, usize, usize, Q)],
    ) -> Result<Self> {
        let l = Self::new_unchecked(name, basis, d, bracket, true)?;
        l.validate()?;
        Ok(l)
    }

    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        basis: Vec<(String, i32)>,
        d: &[(usize, usize, Q)],
        bracket: &[(usize, usize, usize, Q)],
        complete_antisymmetry: bool,
    ) -> Result<Self> {
        let n = basis.len();
        let mut seen = std::collections::HashSet::new();
        for (l, _) in &basis {
            if !seen.insert(l.clone()) {
                return invalid(format!("duplicate label {l}"));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (basis[i].1, i));
        let mut pos = vec![0usize; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let space = GradedSpace::from_sorted(
            order
                .iter()
                .map(|&i| BasisElem {
                    degree: basis[i].1,
                    label: basis[i].0.clone(),
                })
                .collect(),
        );
        let mut dm = RatMatrix::zeros(n, n);
        for (s, t, x) in d {
            if *s >= n || *t >= n {
                return Err(Error::IndexOutOfRange { index: (*s).max(*t), max: n });
            }
            dm.add_to(pos[*t], pos[*s], x);
        }
        let complex = CochainComplex::new(space, dm)?;
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for (a, b, c, x) in bracket {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::IndexOutOfRange { index: (*a).max(*b).max(*c), max: n });
            }
            *table
                .entry((pos[*a], pos[*b]))
                .or_default()
                .entry(pos[*c])
                .or_insert_with(Q::zero) += x;
        }
        if complete_antisymmetry {
            let keys: Vec<(usize, usize)> = table.keys().copied().collect();
            for (a, b) in keys {
                if a != b && !table.contains_key(&(b, a)) {
                    let s = -sign((basis[order[a]].1 * basis[order[b]].1) as i64);
                    let v: BTreeMap<usize, Q> = table[&(a, b)].iter().map(|(k, x)| (*k, &s * x)).collect();
                    table.insert((b, a), v);
                }
            }
        }
        let mut bt = BracketTable::new();
        for (k, v) in table {
            let v: Vec<(usize, Q)> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if !v.is_empty() {
                bt.insert(k, v);
            }
        }
        Self::from_parts(name.into(), complex, bt)
    }

    pub(crate) fn from_parts(name: String, complex: CochainComplex, bracket: BracketTable) -> Result<Self> {
        for (&(a, b), v) in &bracket {
            for (c, _) in v {
                if complex.space().degree(*c) != complex.space().degree(a) + complex.space().degree(b) {
                    return invalid(format!(
                        "bracket of {} and {} has the wrong degree",
                        complex.space().label(a),
                        complex.space().label(b)
                    ));
                }
            }
        }
        Ok(Dgla { name, complex, bracket })
    }

    pub fn zero() -> Self {
        Dgla {
            name: "0".into(),
            complex: CochainComplex::zero(),
            bracket: BracketTable::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.complex.space().degree(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.complex.space().label(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.complex.space().index_of(label)
    }

    pub fn range_at(&self, n: i32) -> std::ops::Range<usize> {
        self.complex.space().range_at(n)
    }

    pub fn bracket_table(&self) -> &BracketTable {
        &self.bracket
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_empty()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Q)] {
        self.bracket.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn bracket_basis_vec(&self, a: usize, b: usize) -> BTreeMap<usize, Q> {
        let mut m = BTreeMap::new();
        for (c, x) in self.bracket_basis(a, b) {
            *m.entry(*c).or_insert_with(Q::zero) += x;
        }
        m.retain(|_, x: &mut Q| !x.is_zero());
        m
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = zero_vec(self.dim());
        let ys: Vec<(usize, &Q)> = y.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in &ys {
                if let Some(v) = self.bracket.get(&(a, *b)) {
                    let c = xa * *yb;
                    for (k, m) in v {
                        out[*k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn d_vec(&self, v: &[Q]) -> Vec<Q> {
        self.complex.apply_d(v)
    }

    pub fn unit_vec(&self, i: usize) -> Vec<Q> {
        let mut v = zero_vec(self.dim());
        v[i] = Q::one();
        v
    }

    pub fn cohomology(&self, n: i32) -> Cohomology {
        self.complex.cohomology(n)
    }

    /// Checks graded antisymmetry, the graded Jacobi identity and the Leibniz
    /// rule (`d^2 = 0` is checked when the complex is built).
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in a..n {
                let s = -sign((self.degree(a) * self.degree(b)) as i64);
                let ab = self.bracket_basis_vec(a, b);
                let ba: BTreeMap<usize, Q> = self
                    .bracket_basis_vec(b, a)
                    .into_iter()
                    .map(|(k, x)| (k, &s * x))
                    .collect();
                if ab != ba {
                    return invalid(format!(
                        "bracket is not graded antisymmetric on ({}, {})",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        for a in 0..n {
            let ea = self.unit_vec(a);
            for b in 0..n {
                let eb = self.unit_vec(b);
                let eab = self.bracket(&ea, &eb);
                // Leibniz
                let lhs = self.d_vec(&eab);
                let mut rhs = self.bracket(&self.d_vec(&ea), &eb);
                axpy(&mut rhs, &sign(self.degree(a) as i64), &self.bracket(&ea, &self.d_vec(&eb)));
                if lhs != rhs {
                    return invalid(format!("Leibniz rule fails on ({}, {})", self.label(a), self.label(b)));
                }
                for c in 0..n {
                    let ec = self.unit_vec(c);
                    let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let mut rhs = self.bracket(&eab, &ec);
                    axpy(
                        &mut rhs,
                        &sign((self.degree(a) * self.degree(b)) as i64),
                        &self.bracket(&eb, &self.bracket(&ea, &ec)),
                    );
                    if lhs != rhs {
                        return invalid(format!(
                            "Jacobi identity fails on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn basis_pairs(&self) -> Vec<(String, i32)> {
        (0..self.dim()).map(|i| (self.label(i).to_string(), self.degree(i))).collect()
    }

    pub fn d_entries(&self) -> Vec<(usize, usize, Q)> {
        let d = self.complex.differential();
        let mut out = Vec::new();
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                if !d.get(r, c).is_zero() {
                    out.push((c, r, d.get(r, c).clone()));
                }
            }
        }
        out
    }

    pub fn bracket_entries(&self) -> Vec<(usize, usize, usize, Q)> {
        let mut keys: Vec<_> = self.bracket.keys().copied().collect();
        keys.sort();
        let mut out = Vec::new();
        for (a, b) in keys {
            for (c, x) in &self.bracket[&(a, b)] {
                out.push((a, b, *c, x.clone()));
            }
        }
        out
    }

    /// Replaces the differential and bracket with arbitrary entries (in the
    /// internal basis order) without validation; for exercising validators.
    pub fn corrupted(&self, extra_bracket: (usize, usize, usize, Q)) -> Dgla {
        let mut b = self.bracket.clone();
        let (x, y, z, c) = extra_bracket;
        b.entry((x, y)).or_default().push((z, c));
        Dgla {
            name: format!("{}-corrupted", self.name),
            complex: self.complex.clone(),
            bracket: b,
        }
    }
}

/// Zero bracket on a complex.
pub fn abelian_dgla(c: &CochainComplex) -> Dgla {
    Dgla {
        name: "abelian".into(),
        complex: c.clone(),
        bracket: BracketTable::new(),
    }
}

/// `End(V)` for a chain complex `V` (stored in cochain convention):
/// `L^n` = maps raising the cochain degree by `n`, graded commutator bracket,
/// `d f = [d_V, f]`.
pub fn end_dgla(v: &CochainComplex) -> Result<Dgla> {
    let n = v.dim();
    let sp = v.space();
    let mut basis = Vec::new();
    let mut idx = HashMap::new();
    for r in 0..n {
        for c in 0..n {
            idx.insert((r, c), basis.len());
            basis.push((format!("E[{},{}]", sp.label(r), sp.label(c)), sp.degree(r) - sp.degree(c)));
        }
    }
    let dv = v.differential();
    // Compose elementary matrices: E_{rc} E_{c'r'} = delta_{c c'} E_{r r'}.
    let mut bracket = Vec::new();
    for (&(r1, c1), &i) in &idx {
        for (&(r2, c2), &j) in &idx {
            let d1 = basis[i].1;
            let d2 = basis[j].1;
            if c1 == r2 {
                bracket.push((i, j, idx[&(r1, c2)], Q::one()));
            }
            if c2 == r1 {
                bracket.push((i, j, idx[&(r2, c1)], -sign((d1 * d2) as i64)));
            }
        }
    }
    // d f = d_V f - (-1)^{|f|} f d_V
    let mut d = Vec::new();
    for (&(r, c), &i) in &idx {
        let df = basis[i].1;
        for k in 0..n {
            let x = dv.get(k, r);
            if !x.is_zero() {
                d.push((i, idx[&(k, c)], x.clone()));
            }
            let y = dv.get(c, k);
            if !y.is_zero() {
                d.push((i, idx[&(r, k)], -sign(df as i64) * y));
            }
        }
    }
    let l = Dgla::new_unchecked("End(V)", basis, &d, &bracket, false)?;
    Ok(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Associative,
    Commutative,
    Lie,
}

/// A finite-dimensional chain-graded algebra with structure constants, used
/// as input to the derivation DGLA.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub flavor: Flavor,
    /// `(label, chain degree)`
    pub basis: Vec<(String, i32)>,
    /// `(a, b, c, x)`: `e_a * e_b` has coefficient `x` on `e_c`
    pub mult: Vec<(usize, usize, usize, Q)>,
    /// `(src, tgt, x)`: `d e_src` has coefficient `x` on `e_tgt`
    pub d: Vec<(usize, usize, Q)>,
}

impl GradedAlgebra {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn deg(&self, i: usize) -> i32 {
        self.basis[i].1
    }

    fn mult_matrix(&self) -> Vec<Vec<BTreeMap<usize, Q>>> {
        let n = self.dim();
        let mut m = vec![vec![BTreeMap::new(); n]; n];
        for (a, b, c, x) in &self.mult {
            *m[*a][*b].entry(*c).or_insert_with(Q::zero) += x;
        }
        m
    }

    fn mul(&self, table: &[Vec<BTreeMap<usize, Q>>], x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = zero_vec(self.dim());
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                for (c, m) in &table[a][b] {
                    out[*c] += xa * yb * m;
                }
            }
        }
        out
    }

    /// The differential as a matrix (lowers chain degree by one).
    fn d_matrix(&self) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for (s, t, x) in &self.d {
            m.add_to(*t, *s, x);
        }
        m
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = zero_vec(self.dim());
        v[i] = Q::one();
        v
    }

    /// Validates the axioms of the flavor, that `d` is a derivation of chain
    /// degree -1 and `d^2 = 0`.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let t = self.mult_matrix();
        for (a, b, c, _) in &self.mult {
            if self.deg(*c) != self.deg(*a) + self.deg(*b) {
                return invalid("product has the wrong degree");
            }
        }
        let dm = self.d_matrix();
        for c in 0..n {
            for r in 0..n {
                if !dm.get(r, c).is_zero() && self.deg(r) != self.deg(c) - 1 {
                    return invalid("structural differential must lower the chain degree by one");
                }
            }
        }
        if !dm.mul(&dm)?.is_zero() {
            return invalid("structural differential does not square to zero");
        }
        for a in 0..n {
            for b in 0..n {
                let (ea, eb) = (self.unit(a), self.unit(b));
                let ab = self.mul(&t, &ea, &eb);
                let ba = self.mul(&t, &eb, &ea);
                let s = sign((self.deg(a) * self.deg(b)) as i64);
                match self.flavor {
                    Flavor::Commutative if ab != crate::qlinalg::scale_vec(&s, &ba) => {
                        return invalid("algebra is not graded commutative")
                    }
                    Flavor::Lie if ab != crate::qlinalg::scale_vec(&-s.clone(), &ba) => {
                        return invalid("bracket is not graded antisymmetric")
                    }
                    _ => {}
                }
                let lhs = dm.mul_vec(&ab)?;
                let mut rhs = self.mul(&t, &dm.mul_vec(&ea)?, &eb);
                axpy(&mut rhs, &sign(self.deg(a) as i64), &self.mul(&t, &ea, &dm.mul_vec(&eb)?));
                if lhs != rhs {
                    return invalid("structural differential is not a derivation");
                }
                for c in 0..n {
                    let ec = self.unit(c);
                    match self.flavor {
                        Flavor::Lie => {
                            let lhs = self.mul(&t, &ea, &self.mul(&t, &eb, &ec));
                            let mut rhs = self.mul(&t, &ab, &ec);
                            axpy(&mut rhs, &s, &self.mul(&t, &eb, &self.mul(&t, &ea, &ec)));
                            if lhs != rhs {
                                return invalid("Jacobi identity fails");
                            }
                        }
                        _ => {
                            if self.mul(&t, &ab, &ec) != self.mul(&t, &ea, &self.mul(&t, &eb, &ec)) {
                                return invalid("multiplication is not associative");
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The DGLA of graded derivations of `r` (strict derivations for the
/// flavor's operation), bracket the graded commutator and differential
/// `[d_R, -]`. A derivation of cochain degree `n` lowers the chain degree by
/// `n` and satisfies `D(ab) = D(a) b + (-1)^{n|a|} a D(b)`; the derivation
/// spaces are computed as kernels of the Leibniz constraints on all pairs of
/// basis elements.
pub fn der_dgla(r: &GradedAlgebra) -> Result<Dgla> {
    r.validate()?;
    let n = r.dim();
    let t = r.mult_matrix();
    let mut degs: Vec<i32> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            degs.push(r.deg(b) - r.deg(a));
        }
    }
    degs.sort();
    degs.dedup();
    // derivations as n x n matrices (column = image of basis element)
    let mut derivs: Vec<(i32, RatMatrix)> = Vec::new();
    for &k in &degs {
        // variables: entries (row, col) with deg(col) - deg(row) = k
        let vars: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (0..n).map(move |rr| (rr, c)))
            .filter(|&(rr, c)| r.deg(c) - r.deg(rr) == k)
            .collect();
        if vars.is_empty() {
            continue;
        }
        // constraint rows: for each pair (a, b) and output coordinate.
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = r.mul(&t, &r.unit(a), &r.unit(b));
                let mut block = vec![zero_vec(vars.len()); n];
                for (vi, &(row, col)) in vars.iter().enumerate() {
                    // D e_col = e_row. Contribution of D(ab):
                    if !ab[col].is_zero() {
                        block[row][vi] += &ab[col];
                    }
                    // - D(a) b
                    if col == a {
                        let p = r.mul(&t, &r.unit(row), &r.unit(b));
                        for (o, x) in p.into_iter().enumerate() {
                            block[o][vi] -= x;
                        }
                    }
                    // - (-1)^{k|a|} a D(b)
                    if col == b {
                        let s = sign((k * r.deg(a)) as i64);
                        let p = r.mul(&t, &r.unit(a), &r.unit(row));
                        for (o, x) in p.into_iter().enumerate() {
                            block[o][vi] -= &s * x;
                        }
                    }
                }
                rows.extend(block.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())));
            }
        }
        let sols = if rows.is_empty() {
            (0..vars.len())
                .map(|i| {
                    let mut v = zero_vec(vars.len());
                    v[i] = Q::one();
                    v
                })
                .collect()
        } else {
            kernel_basis(&RatMatrix::from_rows(rows))
        };
        for s in sols {
            let mut m = RatMatrix::zeros(n, n);
            for (vi, &(row, col)) in vars.iter().enumerate() {
                m.set(row, col, s[vi].clone());
            }
            derivs.push((k, m));
        }
    }
    let flat = |m: &RatMatrix| -> Vec<Q> {
        (0..n).flat_map(|c| (0..n).map(move |rr| (rr, c))).map(|(rr, c)| m.get(rr, c).clone()).collect()
    };
    let basis_mat = RatMatrix::from_columns(n * n, &derivs.iter().map(|(_, m)| flat(m)).collect::<Vec<_>>());
    let coords = |m: &RatMatrix| -> Result<Vec<Q>> {
        solve(&basis_mat, &flat(m))?.ok_or_else(|| Error::Validation("derivations not closed".into()))
    };
    let dr = r.d_matrix();
    let mut basis = Vec::new();
    let mut counters: BTreeMap<i32, usize> = BTreeMap::new();
    for (k, _) in &derivs {
        let c = counters.entry(*k).or_insert(0);
        basis.push((format!("D{k}.{c}"), *k));
        *c += 1;
    }
    let mut bracket = Vec::new();
    let mut d = Vec::new();
    for (i, (ki, mi)) in derivs.iter().enumerate() {
        for (j, (kj, mj)) in derivs.iter().enumerate() {
            let com = mi.mul(mj)?.sub(&mj.mul(mi)?.scale(&sign((ki * kj) as i64)))?;
            for (c, x) in coords(&com)?.into_iter().enumerate() {
                if !x.is_zero() {
                    bracket.push((i, j, c, x));
                }
            }
        }
        // d_R has cochain degree +1 as a derivation
        let com = dr.mul(mi)?.sub(&mi.mul(&dr)?.scale(&sign(*ki as i64)))?;
        for (c, x) in coords(&com)?.into_iter().enumerate() {
            if !x.is_zero() {
                d.push((i, c, x));
            }
        }
    }
    let l = Dgla::new_unchecked("Der(R)", basis, &d, &bracket, false)?;
    l.validate()?;
    Ok(l)
}

/// `Tot(L (x) m(A))` with its provenance and weight filtration.
#[derive(Clone, Debug)]
pub struct NilpotentDgla {
    pub dgla: Dgla,
    pub l: Dgla,
    pub a: ArtinCdga,
    /// internal basis index -> (index in L, index in m(A))
    pub pairs: Vec<(usize, usize)>,
    weights: Vec<usize>,
}

impl PartialEq for NilpotentDgla {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.a == other.a
    }
}

impl NilpotentDgla {
    pub fn dim(&self) -> usize {
        self.dgla.dim()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// All elements of weight at least this bound vanish.
    pub fn nilpotency_bound(&self) -> usize {
        self.a.max_weight() + 1
    }

    pub fn index_of_pair(&self, l: usize, a: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (l, a))
    }

    pub fn range_at(&self, n: i32) -> std::ops::Range<usize> {
        self.dgla.range_at(n)
    }

    /// `sum_i u_i (x) a_i` from a list of `(L vector, A basis index)`.
    pub fn element(&self, parts: &[(Vec<Q>, usize)]) -> Vec<Q> {
        let mut out = zero_vec(self.dim());
        for (u, a) in parts {
            for (li, x) in u.iter().enumerate() {
                if !x.is_zero() {
                    let i = self.index_of_pair(li, *a).expect("pair in basis");
                    out[i] += x;
                }
            }
        }
        out
    }

    /// Component of a vector of weight exactly `w`.
    pub fn weight_part(&self, v: &[Q], w: usize) -> Vec<Q> {
        v.iter()
            .enumerate()
            .map(|(i, x)| if self.weights[i] == w { x.clone() } else { Q::zero() })
            .collect()
    }

    /// Zero out coordinates of weight below `w` (projection onto `F^w`
    /// complement-free coordinates).
    pub fn min_weight(&self, v: &[Q]) -> Option<usize> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| self.weights[i])
            .min()
    }

    /// Degree-n coordinates as a full-length vector.
    pub fn embed(&self, n: i32, v: &[Q]) -> Vec<Q> {
        self.dgla.space().embed(n, v)
    }

    pub fn restrict(&self, n: i32, v: &[Q]) -> Vec<Q> {
        self.dgla.space().restrict(n, v)
    }
}

/// `Tot(L (x) m(A))`: basis `l_alpha (x) a` in degree `|l_alpha| - chain(a)`,
/// ordered by (degree, L index, A index);
/// `d(u (x) a) = du (x) a + (-1)^{|u|} u (x) da` and
/// `[u (x) a, v (x) b] = (-1)^{|v||a|} [u,v] (x) ab`.
pub fn coefficient_extension(l: &Dgla, a: &ArtinCdga) -> Result<NilpotentDgla> {
    let mut cells: Vec<(i32, usize, usize)> = Vec::new();
    for li in 0..l.dim() {
        for ai in 0..a.dim() {
            cells.push((l.degree(li) - a.chain_degree(ai), li, ai));
        }
    }
    cells.sort();
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &(_, li, ai)) in cells.iter().enumerate() {
        pos.insert((li, ai), k);
    }
    let basis: Vec<(String, i32)> = cells
        .iter()
        .map(|&(deg, li, ai)| (format!("{}*{}", l.label(li), a.label(ai)), deg))
        .collect();
    let mut d = Vec::new();
    for (k, &(_, li, ai)) in cells.iter().enumerate() {
        for (lj, x) in l.d_vec(&l.unit_vec(li)).into_iter().enumerate() {
            if !x.is_zero() {
                d.push((k, pos[&(lj, ai)], x));
            }
        }
        let s = sign(l.degree(li) as i64);
        for (aj, x) in a.d_basis(ai) {
            d.push((k, pos[&(li, aj)], &s * x));
        }
    }
    let mut bracket = Vec::new();
    for (&(u, v), lv) in l.bracket_table() {
        for ai in 0..a.dim() {
            for bi in 0..a.dim() {
                let ab = a.mul_basis(ai, bi);
                if ab.is_empty() {
                    continue;
                }
                let s = sign((l.degree(v) * a.chain_degree(ai)) as i64);
                for (w, x) in lv {
                    for (ci, y) in ab {
                        bracket.push((pos[&(u, ai)], pos[&(v, bi)], pos[&(*w, *ci)], &s * x * y));
                    }
                }
            }
        }
    }
    let dgla = Dgla::new_unchecked(format!("{} (x) m({})", l.name(), a.name()), basis, &d, &bracket, false)?;
    let pairs: Vec<(usize, usize)> = cells.iter().map(|&(_, li, ai)| (li, ai)).collect();
    let weights = pairs.iter().map(|&(_, ai)| a.weight(ai)).collect();
    Ok(NilpotentDgla {
        dgla,
        l: l.clone(),
        a: a.clone(),
        pairs,
        weights,
    })
}

/// A map of DGLAs.
#[derive(Clone, Debug)]
pub struct DglaMap {
    pub source: Dgla,
    pub target: Dgla,
    pub matrix: RatMatrix,
}

impl DglaMap {
    pub fn new(source: Dgla, target: Dgla, matrix: RatMatrix) -> Result<Self> {
        check_degree(&matrix, source.space(), target.space(), 0, "DGLA map")?;
        let m = DglaMap { source, target, matrix };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix.mul(self.source.complex().differential())?
            != self.target.complex().differential().mul(&self.matrix)?
        {
            return Err(Error::NotChainMap("DGLA map does not commute with d".into()));
        }
        for a in 0..self.source.dim() {
            for b in 0..self.source.dim() {
                let lhs = self.apply(&self.source.bracket(&self.source.unit_vec(a), &self.source.unit_vec(b)));
                let rhs = self.target.bracket(&self.matrix.column(a), &self.matrix.column(b));
                if lhs != rhs {
                    return invalid(format!(
                        "DGLA map does not preserve the bracket on ({}, {})",
                        self.source.label(a),
                        self.source.label(b)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(v).expect("vector in source")
    }
}

/// The map `Tot(L (x) m(A)) -> Tot(M (x) m(B))` induced by `f (x) g`.
pub fn extension_map(f: &DglaMap, g: &CdgaMap, src: &NilpotentDgla, tgt: &NilpotentDgla) -> Result<RatMatrix> {
    if src.l != f.source || tgt.l != f.target || src.a != g.source || tgt.a != g.target {
        return Err(Error::HostMismatch("extension_map".into()));
    }
    let mut m = RatMatrix::zeros(tgt.dim(), src.dim());
    for (c, &(li, ai)) in src.pairs.iter().enumerate() {
        for lj in 0..f.target.dim() {
            let x = f.matrix.get(lj, li);
            if x.is_zero() {
                continue;
            }
            for aj in 0..g.target.dim() {
                let y = g.matrix.get(aj, ai);
                if !y.is_zero() {
                    let r = tgt.index_of_pair(lj, aj).expect("pair");
                    m.add_to(r, c, &(x * y));
                }
            }
        }
    }
    Ok(m)
}

/// The map on coefficient extensions induced by a cdga map alone.
pub fn coefficient_map(g: &CdgaMap, src: &NilpotentDgla, tgt: &NilpotentDgla) -> Result<RatMatrix> {
    let id = DglaMap {
        source: src.l.clone(),
        target: tgt.l.clone(),
        matrix: RatMatrix::identity(src.l.dim()),
    };
    if src.l != tgt.l {
        return Err(Error::HostMismatch("coefficient_map needs the same L".into()));
    }
    extension_map(&id, g, src, tgt)
}

/// `u in L^1, v in L^2`, `d = 0`, `[u,u] = 2v`.
pub fn lobs() -> Dgla {
    Dgla::new(
        "Lobs",
        vec![("u".into(), 1), ("v".into(), 2)],
        &[],
        &[(0, 0, 1, q(2))],
    )
    .expect("Lobs")
}

/// Abelian DGLA `Q` in degree `n`, basis `w`.
pub fn labh(n: i32) -> Dgla {
    Dgla::new(format!("Labh{n}"), vec![("w".into(), n)], &[], &[]).expect("Labh")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{dual_numbers, truncated_polynomial};

    fn chain_complex(elems: &[(i32, &str)], d: &[(&str, &str, i64)]) -> CochainComplex {
        let mut map = BTreeMap::new();
        for (s, t, x) in d {
            map.insert((s.to_string(), t.to_string()), q(*x));
        }
        CochainComplex::from_chain(elems.iter().map(|(i, l)| (*i, l.to_string())).collect(), &map).unwrap()
    }

    #[test]
    fn abelian_examples() {
        let z = abelian_dgla(&CochainComplex::zero());
        assert_eq!(z.dim(), 0);
        let l = labh(1);
        assert!(l.is_abelian());
        l.validate().unwrap();
    }

    #[test]
    fn end_dgla_examples() {
        let v = chain_complex(&[(0, "a"), (1, "b")], &[]);
        let l = end_dgla(&v).unwrap();
        l.validate().unwrap();
        assert_eq!(
            (l.space().dim_at(-1), l.space().dim_at(0), l.space().dim_at(1)),
            (1, 2, 1)
        );
        let one = end_dgla(&chain_complex(&[(2, "a")], &[])).unwrap();
        assert_eq!(one.dim(), 1);
        assert_eq!(one.degree(0), 0);
        assert!(one.is_abelian());
        let three = end_dgla(&chain_complex(&[(0, "a"), (1, "b"), (1, "c")], &[("b", "a", 1)])).unwrap();
        three.validate().unwrap();
    }

    #[test]
    fn end_of_acyclic_pair() {
        let v = chain_complex(&[(0, "a"), (1, "b")], &[("b", "a", 1)]);
        let l = end_dgla(&v).unwrap();
        l.validate().unwrap();
        let dims = l.complex().cohomology_dims();
        assert!(dims.values().all(|&d| d == 0), "{dims:?}");
    }

    #[test]
    fn der_dgla_examples() {
        let ext = GradedAlgebra {
            flavor: Flavor::Commutative,
            basis: vec![("1".into(), 0), ("y".into(), 1)],
            mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
            d: vec![],
        };
        let l = der_dgla(&ext).unwrap();
        assert_eq!(l.space().dim_at(1), 1);
        assert_eq!(l.space().dim_at(0), 1);
        assert_eq!(l.dim(), 2);
        let k = GradedAlgebra {
            flavor: Flavor::Commutative,
            basis: vec![("1".into(), 0)],
            mult: vec![(0, 0, 0, q(1))],
            d: vec![],
        };
        assert_eq!(der_dgla(&k).unwrap().dim(), 0);
        let dual = GradedAlgebra {
            flavor: Flavor::Commutative,
            basis: vec![("1".into(), 0), ("x".into(), 0)],
            mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
            d: vec![],
        };
        let l = der_dgla(&dual).unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.degree(0), 0);
    }

    #[test]
    fn coefficient_extension_examples() {
        let e = coefficient_extension(&lobs(), &crate::artin::ArtinCdga::base_field()).unwrap();
        assert_eq!(e.dim(), 0);
        let e = coefficient_extension(&labh(1), &dual_numbers(0)).unwrap();
        assert_eq!(e.dgla.space().dim_at(1), 1);
        assert!(e.dgla.is_abelian());
        let a = truncated_polynomial(3).unwrap();
        let e = coefficient_extension(&lobs(), &a).unwrap();
        e.dgla.validate().unwrap();
        let ut = e.element(&[(vec![q(1), q(0)], 0)]);
        let v_t2 = e.element(&[(vec![q(0), q(2)], 1)]);
        assert_eq!(e.dgla.bracket(&ut, &ut), v_t2);
    }

    #[test]
    fn cohomology_examples() {
        let l = lobs();
        assert_eq!(l.cohomology(1).dim, 1);
        assert_eq!(l.cohomology(2).dim, 1);
        let acyc = chain_complex(&[(0, "a"), (1, "b")], &[("b", "a", 1)]);
        let ab = abelian_dgla(&acyc);
        assert!(ab.complex().is_acyclic());
        let v = chain_complex(&[(0, "a"), (1, "b")], &[("b", "a", 1)]);
        let e = end_dgla(&v).unwrap();
        assert_eq!(e.cohomology(0).dim, 0);
    }

    #[test]
    fn validator_rejects_corruption() {
        let jac = Dgla::new(
            "bad",
            vec![("x".into(), 0), ("y".into(), 0), ("z".into(), 0)],
            &[],
            &[(0, 1, 0, q(1)), (1, 2, 1, q(1))],
        );
        assert!(jac.is_err());
        let t = end_dgla(&chain_complex(&[(0, "a"), (0, "b")], &[])).unwrap();
        let bad = t.corrupted((0, 1, 2, q(1)));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn functoriality_on_small_instance() {
        let l = lobs();
        let a = truncated_polynomial(3).unwrap();
        let b = truncated_polynomial(2).unwrap();
        let g = CdgaMap::new(a.clone(), b.clone(), RatMatrix::from_i64(&[&[1, 0]])).unwrap();
        let src = coefficient_extension(&l, &a).unwrap();
        let tgt = coefficient_extension(&l, &b).unwrap();
        let m = coefficient_map(&g, &src, &tgt).unwrap();
        let f = DglaMap::new(src.dgla.clone(), tgt.dgla.clone(), m).unwrap();
        f.validate().unwrap();
    }
}
