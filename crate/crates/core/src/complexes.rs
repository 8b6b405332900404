//! Graded vector spaces, cochain complexes, cones, shifts and total
//! complexes of bicomplexes.
//!
//! Sign conventions, fixed once for the whole crate:
//! * chain-graded data is stored cochain-graded via `chain i <-> cochain -i`;
//! * `(C[k])^n = C^{n+k}` with differential `(-1)^k d`;
//! * `cone(f: A -> B)^n = B^n + A^{n+1}`, `d(b, a) = (d b + f a, -d a)`;
//! * the total complex of a bicomplex has `D = d_h + (-1)^i d_v` on the
//!   `(i, j)` component, with `d_h d_v = d_v d_h`.

use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::qlinalg::{kernel_basis, sign, solve, subquotient_dim, zero_vec, RatMatrix, SparseMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub degree: i32,
    pub label: String,
}

/// Finite-dimensional graded vector space with a labelled basis, ordered by
/// degree (stable within a degree).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    elems: Vec<BasisElem>,
}

impl GradedSpace {
    pub fn new(elems: Vec<(i32, String)>) -> Result<Self> {
        let mut elems: Vec<BasisElem> = elems
            .into_iter()
            .map(|(degree, label)| BasisElem { degree, label })
            .collect();
        elems.sort_by_key(|e| e.degree);
        for w in elems.windows(2) {
            if w[0].degree == w[1].degree && w[0].label == w[1].label {
                return invalid(format!("duplicate label {} in degree {}", w[0].label, w[0].degree));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &elems {
            if !seen.insert((e.degree, e.label.clone())) {
                return invalid(format!("duplicate label {} in degree {}", e.label, e.degree));
            }
        }
        Ok(GradedSpace { elems })
    }

    /// Builds a space whose element order is already sorted by degree.
    pub(crate) fn from_sorted(elems: Vec<BasisElem>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0].degree <= w[1].degree));
        GradedSpace { elems }
    }

    pub fn zero() -> Self {
        GradedSpace { elems: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn dim_at(&self, n: i32) -> usize {
        self.range_at(n).len()
    }

    pub fn elems(&self) -> &[BasisElem] {
        &self.elems
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.elems[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elems[i].label
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.elems.iter().map(|e| e.degree).collect();
        d.dedup();
        d
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.elems.first().map(|e| e.degree)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.elems.last().map(|e| e.degree)
    }

    pub fn range_at(&self, n: i32) -> Range<usize> {
        let start = self.elems.partition_point(|e| e.degree < n);
        let end = self.elems.partition_point(|e| e.degree <= n);
        start..end
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elems.iter().position(|e| e.label == label)
    }

    /// Embeds a vector supported in degree `n` into the full space.
    pub fn embed(&self, n: i32, v: &[Q]) -> Vec<Q> {
        let r = self.range_at(n);
        assert_eq!(r.len(), v.len(), "embed: wrong length");
        let mut out = zero_vec(self.dim());
        out[r].clone_from_slice(v);
        out
    }

    pub fn restrict(&self, n: i32, v: &[Q]) -> Vec<Q> {
        v[self.range_at(n)].to_vec()
    }

    /// The degree of a nonzero homogeneous vector, `None` if zero or mixed.
    pub fn homogeneous_degree(&self, v: &[Q]) -> Option<i32> {
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let d = self.degree(i);
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }
}

/// Checks that `m` maps degree `n` of `src` into degree `n + shift` of `tgt`.
pub(crate) fn check_degree(m: &RatMatrix, src: &GradedSpace, tgt: &GradedSpace, shift: i32, what: &str) -> Result<()> {
    if m.rows() != tgt.dim() || m.cols() != src.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: matrix {}x{} for spaces of dims {} -> {}",
            m.rows(),
            m.cols(),
            src.dim(),
            tgt.dim()
        )));
    }
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            if !m.get(r, c).is_zero() && tgt.degree(r) != src.degree(c) + shift {
                return invalid(format!(
                    "{what}: entry ({}, {}) maps degree {} to degree {}",
                    tgt.label(r),
                    src.label(c),
                    src.degree(c),
                    tgt.degree(r)
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: i32,
    pub dim: usize,
    /// Cycles (full-length vectors) whose classes form a basis.
    pub representatives: Vec<Vec<Q>>,
}

/// Cochain complex over Q, the differential stored as one matrix of degree +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    space: GradedSpace,
    d: RatMatrix,
}

impl CochainComplex {
    pub fn new(space: GradedSpace, d: RatMatrix) -> Result<Self> {
        check_degree(&d, &space, &space, 1, "differential")?;
        if !d.mul(&d)?.is_zero() {
            return invalid("d^2 != 0");
        }
        Ok(CochainComplex { space, d })
    }

    pub fn zero_differential(space: GradedSpace) -> Self {
        let n = space.dim();
        CochainComplex {
            space,
            d: RatMatrix::zeros(n, n),
        }
    }

    /// Chain-graded input: `(chain degree, label)` and a differential lowering
    /// the chain degree by one.
    pub fn from_chain(basis: Vec<(i32, String)>, d: &BTreeMap<(String, String), Q>) -> Result<Self> {
        let space = GradedSpace::new(basis.into_iter().map(|(i, l)| (-i, l)).collect())?;
        let mut m = RatMatrix::zeros(space.dim(), space.dim());
        for ((src, tgt), x) in d {
            let c = space.index_of(src).ok_or_else(|| Error::Validation(format!("unknown label {src}")))?;
            let r = space.index_of(tgt).ok_or_else(|| Error::Validation(format!("unknown label {tgt}")))?;
            m.set(r, c, x.clone());
        }
        Self::new(space, m)
    }

    pub fn zero() -> Self {
        Self::zero_differential(GradedSpace::zero())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn differential(&self) -> &RatMatrix {
        &self.d
    }

    /// Block `d^n : C^n -> C^{n+1}`.
    pub fn d_block(&self, n: i32) -> RatMatrix {
        let src = self.space.range_at(n);
        let tgt = self.space.range_at(n + 1);
        self.d.block(tgt.start, tgt.end, src.start, src.end)
    }

    pub fn apply_d(&self, v: &[Q]) -> Vec<Q> {
        self.d.mul_vec(v).expect("vector length matches complex")
    }

    pub fn cohomology(&self, n: i32) -> Cohomology {
        let d_in = self.d_block(n - 1);
        let d_out = self.d_block(n);
        let sq = subquotient_dim(&d_in, &d_out).expect("validated complex");
        Cohomology {
            degree: n,
            dim: sq.dim,
            representatives: sq
                .representatives
                .iter()
                .map(|r| self.space.embed(n, r))
                .collect(),
        }
    }

    pub fn cocycles(&self, n: i32) -> Vec<Vec<Q>> {
        kernel_basis(&self.d_block(n))
            .into_iter()
            .map(|v| self.space.embed(n, &v))
            .collect()
    }

    /// Degrees in which cohomology can be nonzero.
    pub fn degree_range(&self) -> Vec<i32> {
        self.space.degrees()
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        self.degree_range()
            .into_iter()
            .map(|n| (n, self.cohomology(n).dim))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degree_range().into_iter().all(|n| self.cohomology(n).dim == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .elems()
            .iter()
            .map(|e| if e.degree.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn cohomology_euler_characteristic(&self) -> i64 {
        self.cohomology_dims()
            .into_iter()
            .map(|(n, d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Is the (cocycle) vector `v` of degree `n` a coboundary? Returns a
    /// primitive `x` with `d x = v` if so.
    pub fn primitive(&self, v: &[Q]) -> Option<Vec<Q>> {
        solve(&self.d, v).expect("length checked")
    }

    /// `C[k]`.
    pub fn shift(&self, k: i32) -> CochainComplex {
        let elems = self
            .space
            .elems()
            .iter()
            .map(|e| BasisElem {
                degree: e.degree - k,
                label: e.label.clone(),
            })
            .collect();
        CochainComplex {
            space: GradedSpace::from_sorted(elems),
            d: self.d.scale(&sign(k as i64)),
        }
    }

    /// Contracting homotopy `h` (degree -1) with `d h + h d = id`; fails
    /// unless the complex is acyclic.
    pub fn contracting_homotopy(&self) -> Result<RatMatrix> {
        if !self.is_acyclic() {
            return Err(Error::NotAcyclic("complex has nonzero cohomology".into()));
        }
        let n = self.dim();
        let mut h = RatMatrix::zeros(n, n);
        for deg in self.degree_range() {
            // On C^{deg}: write z = b + c with b in B^{deg}, c in a complement
            // spanned by non-pivot unit vectors; h(z) is the unique preimage of b
            // in the complement of degree deg-1.
            let here = self.space.range_at(deg);
            let below = self.space.range_at(deg - 1);
            let d_in = self.d_block(deg - 1);
            let (comp_here, _) = complement_of_image(&d_in, here.len());
            let (comp_below, _) = complement_of_image(&self.d_block(deg - 2), below.len());
            let img_basis: Vec<Vec<Q>> = image_basis(&d_in);
            let mut cols = img_basis.clone();
            cols.extend(comp_here.iter().cloned());
            let p = RatMatrix::from_columns(here.len(), &cols);
            let dc = if comp_below.is_empty() {
                RatMatrix::zeros(here.len(), 0)
            } else {
                d_in.mul(&RatMatrix::from_columns(below.len(), &comp_below))?
            };
            for j in 0..here.len() {
                let mut e = zero_vec(here.len());
                e[j] = Q::one();
                let coords = solve(&p, &e)?.expect("basis of degree");
                let mut b = zero_vec(here.len());
                for (k, ib) in img_basis.iter().enumerate() {
                    crate::qlinalg::axpy(&mut b, &coords[k], ib);
                }
                if crate::qlinalg::is_zero_vec(&b) {
                    continue;
                }
                let y = solve(&dc, &b)?.expect("d restricted to complement is onto image");
                let mut x = zero_vec(below.len());
                for (k, cb) in comp_below.iter().enumerate() {
                    crate::qlinalg::axpy(&mut x, &y[k], cb);
                }
                for (i, xi) in x.into_iter().enumerate() {
                    h.set(below.start + i, here.start + j, xi);
                }
            }
        }
        let check = self.d.mul(&h)?.add(&h.mul(&self.d)?)?;
        if check != RatMatrix::identity(n) {
            return invalid("contracting homotopy check failed");
        }
        Ok(h)
    }
}

fn image_basis(m: &RatMatrix) -> Vec<Vec<Q>> {
    let (r, pivots) = m.transpose().rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Unit vectors at positions that are not pivots of the image's row echelon
/// form; they span a complement of the image.
fn complement_of_image(m: &RatMatrix, dim: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let pivots = if m.cols() == 0 || m.rows() == 0 {
        Vec::new()
    } else {
        m.transpose().rref().1
    };
    let mut out = Vec::new();
    let mut idx = Vec::new();
    for j in 0..dim {
        if !pivots.contains(&j) {
            let mut e = zero_vec(dim);
            e[j] = Q::one();
            out.push(e);
            idx.push(j);
        }
    }
    (out, idx)
}

/// Degree-preserving map of complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: CochainComplex,
    pub target: CochainComplex,
    pub matrix: RatMatrix,
}

impl ChainMap {
    pub fn new(source: CochainComplex, target: CochainComplex, matrix: RatMatrix) -> Result<Self> {
        check_degree(&matrix, source.space(), target.space(), 0, "chain map")?;
        let lhs = matrix.mul(source.differential())?;
        let rhs = target.differential().mul(&matrix)?;
        if lhs != rhs {
            return Err(Error::NotChainMap("f d != d f".into()));
        }
        Ok(ChainMap { source, target, matrix })
    }

    pub fn identity(c: &CochainComplex) -> Self {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            matrix: RatMatrix::identity(c.dim()),
        }
    }

    /// Induced map on cohomology in degree `n`, in the canonical bases of
    /// representatives.
    pub fn on_cohomology(&self, n: i32) -> Result<RatMatrix> {
        let hs = self.source.cohomology(n);
        let ht = self.target.cohomology(n);
        let d_in = self.target.d_block(n - 1);
        let reps_t: Vec<Vec<Q>> = ht
            .representatives
            .iter()
            .map(|r| self.target.space().restrict(n, r))
            .collect();
        let mut cols = Vec::new();
        for r in &hs.representatives {
            let img = self.matrix.mul_vec(r)?;
            let img_n = self.target.space().restrict(n, &img);
            let c = crate::qlinalg::class_coordinates(&d_in, &reps_t, &img_n)?
                .ok_or_else(|| Error::Validation("image is not a cycle".into()))?;
            cols.push(c);
        }
        Ok(RatMatrix::from_columns(ht.dim, &cols))
    }

    pub fn is_quasi_isomorphism(&self) -> bool {
        cone(self).map(|c| c.is_acyclic()).unwrap_or(false)
    }
}

/// Mapping cone of `f: A -> B`: degree `n` is `B^n + A^{n+1}`.
pub fn cone(f: &ChainMap) -> Result<CochainComplex> {
    let a = &f.source;
    let b = &f.target;
    // Basis: per degree, the B part first, then the shifted A part.
    let mut degrees: Vec<i32> = b.space().degrees();
    degrees.extend(a.space().degrees().into_iter().map(|d| d - 1));
    degrees.sort();
    degrees.dedup();
    let mut elems = Vec::new();
    let mut from_b = vec![0usize; b.dim()];
    let mut from_a = vec![0usize; a.dim()];
    for &n in &degrees {
        for i in b.space().range_at(n) {
            from_b[i] = elems.len();
            elems.push(BasisElem {
                degree: n,
                label: b.space().label(i).to_string(),
            });
        }
        for i in a.space().range_at(n + 1) {
            from_a[i] = elems.len();
            elems.push(BasisElem {
                degree: n,
                label: format!("s({})", a.space().label(i)),
            });
        }
    }
    let dim = elems.len();
    let mut d = RatMatrix::zeros(dim, dim);
    for c in 0..b.dim() {
        for r in 0..b.dim() {
            let x = b.differential().get(r, c);
            if !x.is_zero() {
                d.set(from_b[r], from_b[c], x.clone());
            }
        }
    }
    for c in 0..a.dim() {
        for r in 0..b.dim() {
            let x = f.matrix.get(r, c);
            if !x.is_zero() {
                d.set(from_b[r], from_a[c], x.clone());
            }
        }
        for r in 0..a.dim() {
            let x = a.differential().get(r, c);
            if !x.is_zero() {
                d.set(from_a[r], from_a[c], -x.clone());
            }
        }
    }
    CochainComplex::new(GradedSpace::from_sorted(elems), d)
}

/// Bicomplex with cochain index `i >= 0` and chain index `j >= 0`;
/// `d_h` has bidegree `(+1, 0)`, `d_v` has bidegree `(0, -1)`, and they commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicomplex {
    pub basis: Vec<(i32, i32, String)>,
    pub d_h: RatMatrix,
    pub d_v: RatMatrix,
}

impl Bicomplex {
    pub fn new(basis: Vec<(i32, i32, String)>, d_h: RatMatrix, d_v: RatMatrix) -> Result<Self> {
        let n = basis.len();
        if d_h.rows() != n || d_h.cols() != n || d_v.rows() != n || d_v.cols() != n {
            return Err(Error::DimensionMismatch("bicomplex differentials".into()));
        }
        if basis.iter().any(|(i, j, _)| *i < 0 || *j < 0) {
            return invalid("bicomplex bidegrees must be non-negative");
        }
        for c in 0..n {
            for r in 0..n {
                let (ic, jc, _) = &basis[c];
                let (ir, jr, _) = &basis[r];
                if !d_h.get(r, c).is_zero() && (*ir != ic + 1 || jr != jc) {
                    return invalid("d_h must have bidegree (1,0)");
                }
                if !d_v.get(r, c).is_zero() && (ir != ic || *jr != jc - 1) {
                    return invalid("d_v must have bidegree (0,-1)");
                }
            }
        }
        if !d_h.mul(&d_h)?.is_zero() || !d_v.mul(&d_v)?.is_zero() {
            return invalid("bicomplex differential squares to nonzero");
        }
        if d_h.mul(&d_v)? != d_v.mul(&d_h)? {
            return invalid("d_h and d_v do not commute");
        }
        Ok(Bicomplex { basis, d_h, d_v })
    }
}

/// Total complex, cochain degree `i - j` (chain degree `j - i`), with
/// differential `d_h + (-1)^i d_v`.
pub fn tot_bicomplex(b: &Bicomplex) -> Result<(CochainComplex, Vec<usize>)> {
    let mut order: Vec<usize> = (0..b.basis.len()).collect();
    order.sort_by_key(|&k| (b.basis[k].0 - b.basis[k].1, k));
    let mut pos = vec![0usize; order.len()];
    for (p, &k) in order.iter().enumerate() {
        pos[k] = p;
    }
    let elems = order
        .iter()
        .map(|&k| BasisElem {
            degree: b.basis[k].0 - b.basis[k].1,
            label: b.basis[k].2.clone(),
        })
        .collect();
    let n = order.len();
    let mut d = RatMatrix::zeros(n, n);
    for c in 0..n {
        let s = sign(b.basis[c].0 as i64);
        for r in 0..n {
            let mut x = b.d_h.get(r, c).clone();
            x += &s * b.d_v.get(r, c);
            if !x.is_zero() {
                d.set(pos[r], pos[c], x);
            }
        }
    }
    Ok((CochainComplex::new(GradedSpace::from_sorted(elems), d)?, pos))
}

/// Cochain complex with sparse per-degree differential blocks, used when
/// only cohomology dimensions of large complexes are needed.
#[derive(Clone, Debug, Default)]
pub struct SparseComplex {
    /// degree -> dimension
    pub dims: BTreeMap<i32, usize>,
    /// degree n -> block d^n : C^n -> C^{n+1}
    pub blocks: BTreeMap<i32, SparseMatrix>,
}

impl SparseComplex {
    pub fn block(&self, n: i32) -> SparseMatrix {
        self.blocks.get(&n).cloned().unwrap_or_else(|| {
            SparseMatrix::new(
                self.dims.get(&(n + 1)).copied().unwrap_or(0),
                self.dims.get(&n).copied().unwrap_or(0),
            )
        })
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (&n, _) in self.dims.iter() {
            let prod = self.block(n + 1).mul(&self.block(n))?;
            if !prod.is_zero() {
                return invalid(format!("d^2 != 0 in degree {n}"));
            }
        }
        Ok(())
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let ranks: BTreeMap<i32, usize> = self
            .dims
            .keys()
            .map(|&n| (n, self.block(n).rank()))
            .collect();
        self.dims
            .iter()
            .map(|(&n, &dim)| {
                let out = ranks.get(&n).copied().unwrap_or(0);
                let inc = ranks.get(&(n - 1)).copied().unwrap_or(0);
                (n, dim - out - inc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    fn space(v: &[(i32, &str)]) -> GradedSpace {
        GradedSpace::new(v.iter().map(|(d, l)| (*d, l.to_string())).collect()).unwrap()
    }

    #[test]
    fn zero_complex_has_no_cohomology() {
        let c = CochainComplex::zero();
        assert_eq!(c.cohomology(0).dim, 0);
        assert_eq!(c.cohomology(5).dim, 0);
    }

    #[test]
    fn identity_complex_is_exact() {
        let s = space(&[(0, "a"), (1, "b")]);
        let d = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let c = CochainComplex::new(s, d).unwrap();
        assert_eq!(c.cohomology(0).dim, 0);
        assert_eq!(c.cohomology(1).dim, 0);
    }

    #[test]
    fn zero_differential_cohomology() {
        let c = CochainComplex::zero_differential(space(&[(1, "a"), (2, "b"), (2, "c")]));
        assert_eq!(c.cohomology(1).dim, 1);
        assert_eq!(c.cohomology(2).dim, 2);
    }

    #[test]
    fn rejects_non_square_zero() {
        let s = space(&[(0, "a"), (1, "b"), (2, "c")]);
        let d = RatMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert!(CochainComplex::new(s, d).is_err());
    }

    #[test]
    fn shift_examples() {
        let c = CochainComplex::zero_differential(space(&[(1, "a")]));
        assert_eq!(c.shift(0), c);
        let s = c.shift(1);
        assert_eq!(s.space().dim_at(0), 1);
        let ex = CochainComplex::new(space(&[(0, "a"), (1, "b")]), RatMatrix::from_i64(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(ex.shift(1).differential(), &ex.differential().scale(&q(-1)));
    }

    #[test]
    fn cone_examples() {
        let qc = CochainComplex::zero_differential(space(&[(0, "x")]));
        assert!(cone(&ChainMap::identity(&qc)).unwrap().is_acyclic());

        let zero = CochainComplex::zero();
        let f = ChainMap::new(zero, qc.clone(), RatMatrix::zeros(1, 0)).unwrap();
        let c = cone(&f).unwrap();
        assert_eq!(c.cohomology(0).dim, 1);
        assert_eq!(c.dim(), 1);

        let q2 = CochainComplex::zero_differential(space(&[(0, "y1"), (0, "y2")]));
        let inc = ChainMap::new(qc, q2, RatMatrix::from_i64(&[&[1], &[0]])).unwrap();
        let c = cone(&inc).unwrap();
        let total: usize = c.cohomology_dims().values().sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn non_chain_map_rejected() {
        let a = CochainComplex::new(space(&[(0, "a"), (1, "b")]), RatMatrix::from_i64(&[&[0, 0], &[1, 0]])).unwrap();
        let b = CochainComplex::zero_differential(space(&[(0, "x"), (1, "y")]));
        let f = RatMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        assert!(matches!(ChainMap::new(a, b, f), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn tot_degrees() {
        let b = Bicomplex::new(vec![(1, 1, "g".into())], RatMatrix::zeros(1, 1), RatMatrix::zeros(1, 1)).unwrap();
        let (t, _) = tot_bicomplex(&b).unwrap();
        assert_eq!(t.space().dim_at(0), 1);
        let b = Bicomplex::new(vec![(0, 3, "g".into())], RatMatrix::zeros(1, 1), RatMatrix::zeros(1, 1)).unwrap();
        let (t, _) = tot_bicomplex(&b).unwrap();
        assert_eq!(t.space().dim_at(-3), 1);
    }

    #[test]
    fn tot_of_square_bicomplex_squares_to_zero() {
        // a(0,1) -> b(1,1) horizontally, a -> c(0,0) vertically, b -> e(1,0), c -> e.
        let basis = vec![
            (0, 1, "a".into()),
            (1, 1, "b".into()),
            (0, 0, "c".into()),
            (1, 0, "e".into()),
        ];
        let mut dh = RatMatrix::zeros(4, 4);
        dh.set(1, 0, q(2));
        dh.set(3, 2, q(3));
        let mut dv = RatMatrix::zeros(4, 4);
        dv.set(2, 0, q(1));
        dv.set(3, 1, q(3) / q(2) * q(1));
        // commutation: dh dv (a) = 3 e ; dv dh (a) = 2 * 3/2 e = 3 e
        let b = Bicomplex::new(basis, dh, dv).unwrap();
        let (t, _) = tot_bicomplex(&b).unwrap();
        assert!(t.differential().mul(t.differential()).unwrap().is_zero());
        assert_eq!(t.euler_characteristic(), t.cohomology_euler_characteristic());
    }

    #[test]
    fn contracting_homotopy_of_acyclic() {
        let c = CochainComplex::new(space(&[(0, "a"), (1, "b")]), RatMatrix::from_i64(&[&[0, 0], &[2, 0]])).unwrap();
        let h = c.contracting_homotopy().unwrap();
        assert_eq!(h.get(0, 1), &(q(1) / q(2)));
        let nc = CochainComplex::zero_differential(space(&[(0, "a")]));
        assert!(nc.contracting_homotopy().is_err());
    }
}
