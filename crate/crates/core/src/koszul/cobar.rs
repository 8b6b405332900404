//! Truncated cobar DGLA of an Artinian cdga: the free graded Lie algebra on
//! generators `x_a` dual to the basis of `m(A)`, `x_a` in cochain degree
//! `i_a + 1` for `e_a` in chain degree `i_a`, modulo brackets of length above
//! `N`. With `d e_a = sum_c D_ca e_c` and `e_a e_b = sum_c M^c_ab e_c`,
//!
//! `d x_c = -sum_a (-1)^{|x_a|} D_ca x_a - 1/2 sum_{a,b} (-1)^{|x_b| i_a} M^c_ab [x_a, x_b]`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::artin::ArtinCdga;
use crate::dgla::{Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::qlinalg::{qf, sign, RatMatrix, Q};

use super::freelie::{add_into, FreeLie, TElem};

#[derive(Clone, Debug)]
pub struct CobarTruncation {
    pub a: ArtinCdga,
    pub order: usize,
    pub free: FreeLie,
    pub dgla: Dgla,
    /// free Lie basis index -> DGLA basis index
    pub pos: Vec<usize>,
    gen_d: Vec<TElem>,
}

fn gen_label(a: &ArtinCdga, g: usize) -> String {
    format!("x({})", a.label(g))
}

/// `d x_c` in the tensor algebra on the generators.
pub(crate) fn cobar_generator_d(a: &ArtinCdga, free: &FreeLie) -> Vec<TElem> {
    let n = a.dim();
    let mut out = vec![TElem::new(); n];
    for src in 0..n {
        for (c, x) in a.d_basis(src) {
            let s = -sign(free.gen_degree[src] as i64);
            add_into(&mut out[c], vec![src], s * x);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for (c, x) in a.mul_basis(i, j) {
                let s = -qf(1, 2) * sign((free.gen_degree[j] * a.chain_degree(i)) as i64) * x;
                let xi: TElem = std::iter::once((vec![i], Q::one())).collect();
                let xj: TElem = std::iter::once((vec![j], Q::one())).collect();
                for (w, y) in free.commutator(&xi, &xj) {
                    add_into(&mut out[*c], w, &s * y);
                }
            }
        }
    }
    out
}

impl CobarTruncation {
    pub fn new(a: &ArtinCdga, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Validation("truncation order must be positive".into()));
        }
        let n = a.dim();
        let degs: Vec<i32> = (0..n).map(|i| a.chain_degree(i) + 1).collect();
        let free = FreeLie::new(degs, vec![1; n], order)?;
        let gen_d = cobar_generator_d(a, &free);
        let labels: Vec<String> = (0..free.dim()).map(|i| free.label(i, &|g| gen_label(a, g))).collect();
        let basis: Vec<(String, i32)> = (0..free.dim())
            .map(|i| (labels[i].clone(), free.basis[i].degree))
            .collect();
        let mut d = Vec::new();
        for (i, b) in free.basis.iter().enumerate() {
            let db = free.derivation(&b.expansion, &gen_d);
            for (t, x) in free.coords(&db)? {
                d.push((i, t, x));
            }
        }
        let mut br = Vec::new();
        for i in 0..free.dim() {
            for j in 0..free.dim() {
                if free.basis[i].weight + free.basis[j].weight > order {
                    continue;
                }
                let c = free.commutator(&free.basis[i].expansion, &free.basis[j].expansion);
                for (t, x) in free.coords(&c)? {
                    br.push((i, j, t, x));
                }
            }
        }
        let dgla = Dgla::new_unchecked(format!("cobar({},{order})", a.name()), basis, &d, &br, false)?;
        let pos = labels.iter().map(|l| dgla.index_of(l).expect("label")).collect();
        Ok(CobarTruncation {
            a: a.clone(),
            order,
            free,
            dgla,
            pos,
            gen_d,
        })
    }

    /// DGLA index of the generator `x_a`.
    pub fn generator(&self, g: usize) -> usize {
        self.pos[g]
    }

    pub fn generator_d(&self) -> &[TElem] {
        &self.gen_d
    }

    /// The quotient DGLA map onto a lower truncation of the same algebra.
    /// Bases are built weight by weight, so lower weights share their basis.
    pub fn quotient_to(&self, lower: &CobarTruncation) -> Result<crate::dgla::DglaMap> {
        if lower.a != self.a || lower.order > self.order {
            return Err(Error::Validation("not a lower truncation of the same algebra".into()));
        }
        let mut m = RatMatrix::zeros(lower.dgla.dim(), self.dgla.dim());
        for i in 0..lower.free.dim() {
            m.set(lower.pos[i], self.pos[i], Q::one());
        }
        crate::dgla::DglaMap::new(self.dgla.clone(), lower.dgla.clone(), m)
    }
}

/// A Lie algebra map from a truncated cobar DGLA to `L`, determined by the
/// images of the generators. Compatibility with brackets and differentials
/// is validated up to the truncation order.
#[derive(Clone, Debug)]
pub struct CobarMap {
    pub cobar: CobarTruncation,
    pub target: Dgla,
    /// columns indexed by the free Lie basis
    pub images: Vec<Vec<Q>>,
}

impl CobarMap {
    pub fn from_generator_images(cobar: CobarTruncation, target: Dgla, gens: Vec<Vec<Q>>) -> Result<Self> {
        if gens.len() != cobar.a.dim() || gens.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::DimensionMismatch("generator images".into()));
        }
        for (g, v) in gens.iter().enumerate() {
            let deg = cobar.free.gen_degree[g];
            if v.iter().enumerate().any(|(i, x)| !x.is_zero() && target.degree(i) != deg) {
                return Err(Error::Validation(format!(
                    "image of {} is not in degree {deg}",
                    gen_label(&cobar.a, g)
                )));
            }
        }
        let images = cobar.free.evaluate(&gens, |x, y| target.bracket(x, y));
        let m = CobarMap { cobar, target, images };
        m.validate()?;
        Ok(m)
    }

    fn apply_coords(&self, c: &BTreeMap<usize, Q>) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.target.dim()];
        for (i, x) in c {
            crate::qlinalg::axpy(&mut out, x, &self.images[*i]);
        }
        out
    }

    /// Checks `f d = d f` on generators and on all basis elements whose
    /// differential lies within the truncation, and bracket compatibility
    /// for pairs of total length at most `N`. Generator differentials are
    /// quadratic, so they are complete once `N >= 2` or the product vanishes.
    pub fn validate(&self) -> Result<()> {
        let free = &self.cobar.free;
        let order = self.cobar.order;
        for (i, b) in free.basis.iter().enumerate() {
            let needs = b.weight == 1 || b.weight < order;
            if !needs {
                continue;
            }
            let db = free.derivation(&b.expansion, self.cobar.generator_d());
            let lhs = self.apply_coords(&free.coords(&db)?);
            let rhs = self.target.d_vec(&self.images[i]);
            if lhs != rhs {
                return Err(Error::NotChainMap(format!(
                    "map does not commute with d on {}",
                    self.cobar.dgla.label(self.cobar.pos[i])
                )));
            }
        }
        for i in 0..free.dim() {
            for j in 0..free.dim() {
                if free.basis[i].weight + free.basis[j].weight > order {
                    continue;
                }
                let c = free.coords(&free.commutator(&free.basis[i].expansion, &free.basis[j].expansion))?;
                if self.apply_coords(&c) != self.target.bracket(&self.images[i], &self.images[j]) {
                    return Err(Error::Validation("map does not preserve brackets".into()));
                }
            }
        }
        Ok(())
    }

    /// Matrix in the cobar DGLA basis.
    pub fn matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.target.dim(), self.cobar.dgla.dim());
        for (i, v) in self.images.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m.set(r, self.cobar.pos[i], x.clone());
            }
        }
        m
    }

    pub fn generator_images(&self) -> Vec<Vec<Q>> {
        (0..self.cobar.a.dim())
            .map(|g| {
                let k = self.cobar.free.basis.iter().position(|b| b.form == super::freelie::LieForm::Gen(g));
                self.images[k.expect("generator in basis")].clone()
            })
            .collect()
    }
}

pub(crate) fn check_order(a: &ArtinCdga, order: usize) -> Result<()> {
    let needed = a.nilpotency_index().saturating_sub(1).max(1);
    if order < needed {
        return Err(Error::InsufficientOrder { given: order, needed });
    }
    Ok(())
}

/// Transport (a): `x_a` goes to the `L`-component of `omega` along `e_a`.
pub fn mc_to_dgla_map(host: &NilpotentDgla, omega: &[Q], order: usize) -> Result<CobarMap> {
    check_order(&host.a, order)?;
    let cobar = CobarTruncation::new(&host.a, order)?;
    mc_to_dgla_map_on(cobar, host, omega)
}

pub fn mc_to_dgla_map_on(cobar: CobarTruncation, host: &NilpotentDgla, omega: &[Q]) -> Result<CobarMap> {
    if cobar.a != host.a {
        return Err(Error::HostMismatch("cobar construction of a different algebra".into()));
    }
    check_order(&host.a, cobar.order)?;
    if omega.len() != host.dim() {
        return Err(Error::DimensionMismatch("MC element length".into()));
    }
    let mut gens = vec![vec![Q::zero(); host.l.dim()]; host.a.dim()];
    for (k, &(li, ai)) in host.pairs.iter().enumerate() {
        if !omega[k].is_zero() {
            if host.dgla.degree(k) != 1 {
                return Err(Error::Validation("element is not of degree 1".into()));
            }
            gens[ai][li] += &omega[k];
        }
    }
    CobarMap::from_generator_images(cobar, host.l.clone(), gens)
}

/// Transport (b): `omega = sum_a f(x_a) (x) e_a`.
pub fn dgla_map_to_mc(f: &CobarMap, host: &NilpotentDgla) -> Result<Vec<Q>> {
    if f.cobar.a != host.a || f.target != host.l {
        return Err(Error::HostMismatch("map does not match the host".into()));
    }
    f.validate()?;
    let mut omega = vec![Q::zero(); host.dim()];
    for (ai, v) in f.generator_images().into_iter().enumerate() {
        for (li, x) in v.into_iter().enumerate() {
            if !x.is_zero() {
                let k = host
                    .index_of_pair(li, ai)
                    .ok_or_else(|| Error::Validation("map does not preserve degrees".into()))?;
                omega[k] = x;
            }
        }
    }
    Ok(omega)
}
