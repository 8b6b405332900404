//! Weight-by-weight acyclicity check for the counit `cobar(bar(L)) -> L`.
//!
//! The generators `x_m` of `cobar(bar(L, N))` are dual to bar monomials `m`
//! and get weight = number of letters of `m`; brackets add weights. The
//! differential does not increase weight; its weight-preserving part (dual
//! to `d_L` on monomials plus the dual of the bar multiplication) makes
//! each weight a complex. `L` sits in weight 1, and the counit sends
//! `x_{xi_a}` to `l_a` and every other generator to 0.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complexes::SparseComplex;
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::qlinalg::{qf, sign, SparseMatrix, Q};

use super::bar::BarTruncation;
use super::freelie::{add_into, FreeLie, TElem};

/// Cohomology dimensions (by cochain degree, zeros included) of the weight-`w`
/// piece of the cone of the counit, computed from `bar(L, N)`.
pub fn counit_cone_weight_cohomology(l: &Dgla, w: usize, order: usize) -> Result<BTreeMap<i32, usize>> {
    let c = counit_cone_weight_complex(l, w, order)?;
    Ok(c.cohomology_dims())
}

/// The weight-`w` piece of the cone as a sparse complex.
pub fn counit_cone_weight_complex(l: &Dgla, w: usize, order: usize) -> Result<SparseComplex> {
    if w == 0 {
        return Err(Error::Validation("weight must be at least 1".into()));
    }
    if order < w {
        return Err(Error::InsufficientOrder { given: order, needed: w });
    }
    let bar = BarTruncation::new(l, order)?;
    let a = &bar.algebra;
    // generators: monomials with at most w letters
    let gens: Vec<usize> = (0..a.dim()).filter(|&i| bar.letters(i) <= w).collect();
    let mut gen_of = vec![usize::MAX; a.dim()];
    for (g, &i) in gens.iter().enumerate() {
        gen_of[i] = g;
    }
    let degs: Vec<i32> = gens.iter().map(|&i| a.chain_degree(i) + 1).collect();
    let wts: Vec<usize> = gens.iter().map(|&i| bar.letters(i)).collect();
    let free = FreeLie::new(degs, wts, w)?;
    let mut gen_d = vec![TElem::new(); gens.len()];
    for (ga, &ia) in gens.iter().enumerate() {
        for (ic, x) in a.d_basis(ia) {
            if bar.letters(ic) == bar.letters(ia) {
                add_into(&mut gen_d[gen_of[ic]], vec![ga], -sign(free.gen_degree[ga] as i64) * x);
            }
        }
    }
    for (ga, &ia) in gens.iter().enumerate() {
        for (gb, &ib) in gens.iter().enumerate() {
            if bar.letters(ia) + bar.letters(ib) > w {
                continue;
            }
            for (ic, x) in a.mul_basis(ia, ib) {
                let s = -qf(1, 2) * sign((free.gen_degree[gb] * a.chain_degree(ia)) as i64) * x;
                let xa: TElem = std::iter::once((vec![ga], Q::one())).collect();
                let xb: TElem = std::iter::once((vec![gb], Q::one())).collect();
                for (word, y) in free.commutator(&xa, &xb) {
                    add_into(&mut gen_d[gen_of[*ic]], word, &s * y);
                }
            }
        }
    }
    // cone basis: (degree, position); L first when w = 1, then G shifted by one
    let piece: Vec<usize> = (0..free.dim()).filter(|&i| free.basis[i].weight == w).collect();
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut pos_l = vec![0usize; l.dim()];
    if w == 1 {
        for (i, p) in pos_l.iter_mut().enumerate() {
            let e = dims.entry(l.degree(i)).or_insert(0);
            *p = *e;
            *e += 1;
        }
    }
    let mut pos_g: BTreeMap<usize, (i32, usize)> = BTreeMap::new();
    for &b in &piece {
        let deg = free.basis[b].degree - 1;
        let e = dims.entry(deg).or_insert(0);
        pos_g.insert(b, (deg, *e));
        *e += 1;
    }
    let mut entries: Vec<(i32, usize, usize, Q)> = Vec::new();
    if w == 1 {
        for src in 0..l.dim() {
            for tgt in 0..l.dim() {
                let x = l.complex().differential().get(tgt, src);
                if !x.is_zero() {
                    entries.push((l.degree(src), pos_l[tgt], pos_l[src], x.clone()));
                }
            }
        }
    }
    for &b in &piece {
        let (deg, col) = pos_g[&b];
        let db = free.derivation(&free.basis[b].expansion, &gen_d);
        let coords = free.coords(&db)?;
        let mut eps_db = vec![Q::zero(); l.dim()];
        for (t, x) in coords {
            let (tdeg, row) = *pos_g
                .get(&t)
                .ok_or_else(|| Error::Other("differential left the weight piece".into()))?;
            debug_assert_eq!(tdeg, deg + 1);
            entries.push((deg, row, col, -x.clone()));
            if w == 1 {
                if let Some(li) = counit_generator(&free, &bar, &gens, t) {
                    eps_db[li] += x;
                }
            }
        }
        if w == 1 {
            // counit on the generator itself, and the chain-map check
            if let Some(li) = counit_generator(&free, &bar, &gens, b) {
                entries.push((deg, pos_l[li], col, Q::one()));
                let d_eps = l.d_vec(&l.unit_vec(li));
                if d_eps != eps_db {
                    return Err(Error::NotChainMap("counit does not commute with d".into()));
                }
            }
        }
    }
    let mut blocks: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
    for (deg, r, c, x) in entries {
        let m = blocks.entry(deg).or_insert_with(|| {
            SparseMatrix::new(
                dims.get(&(deg + 1)).copied().unwrap_or(0),
                dims.get(&deg).copied().unwrap_or(0),
            )
        });
        m.add_to(r, c, &x);
    }
    let c = SparseComplex { dims, blocks };
    c.check_square_zero()?;
    Ok(c)
}

fn counit_generator(free: &FreeLie, bar: &BarTruncation, gens: &[usize], b: usize) -> Option<usize> {
    match free.basis[b].form {
        super::freelie::LieForm::Gen(g) if bar.letters(gens[g]) == 1 => Some(bar.monomials[gens[g]][0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{labh, lobs};

    fn all_zero(m: &BTreeMap<i32, usize>) -> bool {
        m.values().all(|&d| d == 0)
    }

    #[test]
    fn weight_one_is_acyclic() {
        for l in [lobs(), labh(1), labh(0), labh(2), Dgla::zero()] {
            assert!(all_zero(&counit_cone_weight_cohomology(&l, 1, 1).unwrap()));
        }
    }

    #[test]
    fn higher_weights_are_acyclic() {
        assert!(all_zero(&counit_cone_weight_cohomology(&labh(1), 2, 2).unwrap()));
        for w in 2..=3 {
            let a = counit_cone_weight_cohomology(&lobs(), w, w).unwrap();
            let b = counit_cone_weight_cohomology(&lobs(), w, w + 1).unwrap();
            assert_eq!(a, b);
            assert!(all_zero(&a), "weight {w}: {a:?}");
        }
    }

    #[test]
    fn insufficient_order_rejected() {
        assert!(matches!(
            counit_cone_weight_cohomology(&lobs(), 3, 2),
            Err(Error::InsufficientOrder { given: 2, needed: 3 })
        ));
    }
}
