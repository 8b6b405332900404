//! Truncated Chevalley-Eilenberg cdga of a finite DGLA: the free graded
//! commutative algebra on generators `xi_a` dual to the basis of `L`, with
//! `xi_a` in chain degree `|l_a| - 1`, modulo words of length above `N`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::artin::{ArtinCdga, CdgaMap};
use crate::dgla::{Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::qlinalg::{qf, sign, RatMatrix, Q};

/// A monomial: sorted multiset of L-basis indices.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug)]
pub struct BarTruncation {
    pub algebra: ArtinCdga,
    pub l: Dgla,
    pub order: usize,
    /// monomial of each algebra basis element
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn xi_degree(l: &Dgla, a: usize) -> i32 {
    l.degree(a) - 1
}

/// Sorts a word of generators into a monomial with its Koszul sign; `None`
/// if an odd generator repeats.
pub(crate) fn normalize(l: &Dgla, word: &[usize]) -> Option<(Monomial, Q)> {
    let mut w = word.to_vec();
    let mut s = 1i64;
    // insertion sort, tracking swaps of odd pairs
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if xi_degree(l, w[j - 1]).rem_euclid(2) == 1 && xi_degree(l, w[j]).rem_euclid(2) == 1 {
                s = -s;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    for k in 1..w.len() {
        if w[k] == w[k - 1] && xi_degree(l, w[k]).rem_euclid(2) == 1 {
            return None;
        }
    }
    Some((w, Q::from_integer(s.into())))
}

/// `d xi_c` as a list of (coefficient, word of one or two generators).
fn d_generator(l: &Dgla, c: usize) -> Vec<(Q, Vec<usize>)> {
    let mut out = Vec::new();
    let pre = -sign(l.degree(c) as i64);
    let n = l.dim();
    for a in 0..n {
        let x = &l.complex().differential().get(c, a);
        if !x.is_zero() {
            out.push((&pre * *x, vec![a]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for (t, x) in l.bracket_basis(a, b) {
                if *t == c {
                    let s = sign((l.degree(b) * (l.degree(a) - 1)) as i64);
                    out.push((&pre * qf(1, 2) * s * x, vec![a, b]));
                }
            }
        }
    }
    out
}

impl BarTruncation {
    pub fn new(l: &Dgla, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Validation("truncation order must be positive".into()));
        }
        let n = l.dim();
        let mut monomials: Vec<Monomial> = Vec::new();
        let mut layer: Vec<Monomial> = (0..n).map(|a| vec![a]).collect();
        for len in 1..=order {
            monomials.extend(layer.iter().cloned());
            if len == order {
                break;
            }
            let mut next = Vec::new();
            for m in &layer {
                let last = *m.last().unwrap();
                for a in last..n {
                    if a == last && xi_degree(l, a).rem_euclid(2) == 1 {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.push(a);
                    next.push(m2);
                }
            }
            layer = next;
        }
        // same order the algebra uses for its basis, so indices agree
        monomials.sort_by_key(|m| -m.iter().map(|&a| xi_degree(l, a)).sum::<i32>());
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let label = |m: &Monomial| -> String {
            m.iter().map(|&a| format!("xi({})", l.label(a))).collect::<Vec<_>>().join("*")
        };
        let basis: Vec<(String, i32)> = monomials
            .iter()
            .map(|m| (label(m), m.iter().map(|&a| xi_degree(l, a)).sum()))
            .collect();
        let dgen: Vec<Vec<(Q, Vec<usize>)>> = (0..n).map(|c| d_generator(l, c)).collect();
        let mut d: Vec<(usize, usize, Q)> = Vec::new();
        for (src, m) in monomials.iter().enumerate() {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            let mut prefix_deg = 0i32;
            for i in 0..m.len() {
                let s = sign(prefix_deg as i64);
                for (c, w) in &dgen[m[i]] {
                    let mut word = m[..i].to_vec();
                    word.extend_from_slice(w);
                    word.extend_from_slice(&m[i + 1..]);
                    if word.len() > order {
                        continue;
                    }
                    if let Some((mono, ks)) = normalize(l, &word) {
                        *acc.entry(index[&mono]).or_insert_with(Q::zero) += &s * c * ks;
                    }
                }
                prefix_deg += xi_degree(l, m[i]);
            }
            for (t, x) in acc {
                if !x.is_zero() {
                    d.push((src, t, x));
                }
            }
        }
        let mut mult: Vec<(usize, usize, usize, Q)> = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if a.len() + b.len() > order {
                    continue;
                }
                let mut word = a.clone();
                word.extend_from_slice(b);
                if let Some((mono, s)) = normalize(l, &word) {
                    mult.push((i, j, index[&mono], s));
                }
            }
        }
        let algebra = ArtinCdga::new_unchecked(format!("bar({},{order})", l.name()), basis, &d, &mult)?;
        Ok(BarTruncation {
            algebra,
            l: l.clone(),
            order,
            monomials,
            index,
        })
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of the generator `xi_a` in the algebra basis.
    pub fn generator(&self, a: usize) -> usize {
        self.index[&vec![a]]
    }

    pub fn letters(&self, i: usize) -> usize {
        self.monomials[i].len()
    }

    /// The quotient map onto a lower truncation of the same DGLA.
    pub fn quotient_to(&self, lower: &BarTruncation) -> Result<CdgaMap> {
        if lower.l != self.l || lower.order > self.order {
            return Err(Error::Validation("not a lower truncation of the same DGLA".into()));
        }
        let mut m = RatMatrix::zeros(lower.algebra.dim(), self.algebra.dim());
        for (i, mono) in self.monomials.iter().enumerate() {
            if let Some(j) = lower.index_of(mono) {
                m.set(j, i, Q::from_integer(1.into()));
            }
        }
        CdgaMap::new(self.algebra.clone(), lower.algebra.clone(), m)
    }
}

/// Images `a_i` of the generators: `omega = sum_i l_i (x) a_i`.
pub(crate) fn generator_images(host: &NilpotentDgla, omega: &[Q]) -> Vec<Vec<Q>> {
    let mut out = vec![vec![Q::zero(); host.a.dim()]; host.l.dim()];
    for (k, &(li, ai)) in host.pairs.iter().enumerate() {
        if !omega[k].is_zero() {
            out[li][ai] += &omega[k];
        }
    }
    out
}

fn check_order(a: &ArtinCdga, order: usize) -> Result<()> {
    let needed = a.nilpotency_index().saturating_sub(1).max(1);
    if order < needed {
        return Err(Error::InsufficientOrder { given: order, needed });
    }
    Ok(())
}

/// The cdga map `bar(L, N) -> A` classifying a degree-1 element; it is a
/// cdga map exactly when the element is MC.
pub fn mc_to_cdga_map(host: &NilpotentDgla, omega: &[Q], order: usize) -> Result<CdgaMap> {
    let bar = BarTruncation::new(&host.l, order)?;
    mc_to_cdga_map_on(&bar, host, omega)
}

pub fn mc_to_cdga_map_on(bar: &BarTruncation, host: &NilpotentDgla, omega: &[Q]) -> Result<CdgaMap> {
    if bar.l != host.l {
        return Err(Error::HostMismatch("bar construction of a different DGLA".into()));
    }
    check_order(&host.a, bar.order)?;
    let images = generator_images(host, omega);
    let a = &host.a;
    let mut m = RatMatrix::zeros(a.dim(), bar.algebra.dim());
    for (col, mono) in bar.monomials.iter().enumerate() {
        let mut v = images[mono[0]].clone();
        for &g in &mono[1..] {
            v = a.mul(&v, &images[g]);
        }
        for (r, x) in v.into_iter().enumerate() {
            m.set(r, col, x);
        }
    }
    CdgaMap::new(bar.algebra.clone(), a.clone(), m)
}

/// Inverse direction: `omega = sum_i l_i (x) f(xi_i)`.
pub fn cdga_map_to_mc(bar: &BarTruncation, f: &CdgaMap, host: &NilpotentDgla) -> Result<Vec<Q>> {
    if f.source != bar.algebra || f.target != host.a || bar.l != host.l {
        return Err(Error::HostMismatch("map does not match the bar construction and host".into()));
    }
    f.validate()?;
    let mut omega = vec![Q::zero(); host.dim()];
    for li in 0..host.l.dim() {
        let col = f.matrix.column(bar.generator(li));
        for (ai, x) in col.into_iter().enumerate() {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::truncated_polynomial;
    use crate::dgla::{coefficient_extension, end_dgla, labh, lobs};
    use crate::mcgauge::is_mc;
    use crate::qlinalg::q;

    #[test]
    fn bar_of_labh1_is_truncated_polynomials() {
        let b = BarTruncation::new(&labh(1), 2).unwrap();
        b.algebra.validate().unwrap();
        assert_eq!(b.algebra.dim(), 2);
        assert_eq!(b.algebra.nilpotency_index(), 3);
        assert!(b.algebra.ideal().differential().is_zero());
    }

    #[test]
    fn bar_of_lobs_has_quadratic_differential() {
        let b = BarTruncation::new(&lobs(), 2).unwrap();
        b.algebra.validate().unwrap();
        let v = b.generator(1);
        let uu = b.index_of(&vec![0, 0]).unwrap();
        let dv = b.algebra.d_basis(v);
        assert_eq!(dv.len(), 1);
        assert_eq!(dv[0].0, uu);
        assert!(dv[0].1 == q(1) || dv[0].1 == q(-1));
    }

    #[test]
    fn bar_axioms_on_end_dgla() {
        let v = crate::complexes::CochainComplex::from_chain(
            vec![(0, "a".into()), (1, "b".into())],
            &std::iter::once((("b".to_string(), "a".to_string()), q(1))).collect(),
        )
        .unwrap();
        let e = end_dgla(&v).unwrap();
        for n in 1..=3 {
            BarTruncation::new(&e, n).unwrap().algebra.validate().unwrap();
        }
    }

    #[test]
    fn chain_map_iff_mc() {
        let l = lobs();
        let a = truncated_polynomial(3).unwrap();
        let host = coefficient_extension(&l, &a).unwrap();
        let bar = BarTruncation::new(&l, 2).unwrap();
        for cu in -2..=2 {
            for cv in -2..=2 {
                {
                    let cu2 = cv;
                    let w = host.element(&[(vec![q(cu), q(0)], 0), (vec![q(cu2), q(0)], 1)]);
                    let mc = is_mc(&host, &w);
                    let map = mc_to_cdga_map_on(&bar, &host, &w);
                    assert_eq!(mc, map.is_ok(), "cu={cu} cu2={cu2}");
                    if let Ok(f) = map {
                        assert_eq!(cdga_map_to_mc(&bar, &f, &host).unwrap(), w);
                    }
                }
            }
        }
    }
}
