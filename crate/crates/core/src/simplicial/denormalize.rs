//! Cosimplicial denormalization of a bigraded Artinian algebra.
//!
//! Level `n` is the sum over surjections `sigma: [n] -> [k]` of the cochain
//! degree `k` slice; `sigma` is recorded by its jump set
//! `J = { i in 1..n : sigma(i) = sigma(i-1) + 1 }` and the summand element
//! `(J, x)` is labelled `x@{J}`. The level differential is `d_v` on each
//! summand. For a monotone `theta: [n] -> [m]`,
//!
//! `theta_*(sigma, x) = sum_{tau theta = sigma} (tau, x) + sum_{tau theta = delta^0 sigma} (tau, d_h x)`
//!
//! with `delta^0` the coface skipping 0. The product is the shuffle product
//! `(J1, x)(J2, y) = eps(J1, J2) (-1)^{j_x |J2|} (J1 u J2, xy)` for disjoint
//! jump sets (zero otherwise), `eps` the sign of the shuffle of `J1` and `J2`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::artin::{ArtinCdga, CdgaMap};
use crate::error::{Error, Result};
use crate::qlinalg::{sign, RatMatrix, Q};

use super::bigraded::{BigradedArtin, BigradedMap};

#[derive(Clone, Debug)]
pub struct Level {
    pub algebra: ArtinCdga,
    /// (jump set, bigraded basis index) for each algebra basis element
    pub summands: Vec<(Vec<usize>, usize)>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

#[derive(Clone, Debug)]
pub struct CosimplicialArtin {
    pub source: BigradedArtin,
    pub levels: Vec<Level>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn surjection(n: usize, jumps: &[usize]) -> Vec<usize> {
    let mut v = vec![0usize; n + 1];
    for i in 1..=n {
        v[i] = v[i - 1] + usize::from(jumps.contains(&i));
    }
    v
}

fn shuffle_sign(j1: &[usize], j2: &[usize]) -> i64 {
    let inv = j1.iter().map(|a| j2.iter().filter(|b| *b < a).count()).sum::<usize>();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn label(b: &BigradedArtin, jumps: &[usize], x: usize) -> String {
    let j: Vec<String> = jumps.iter().map(|i| i.to_string()).collect();
    format!("{}@{{{}}}", b.label(x), j.join(","))
}

fn build_level(b: &BigradedArtin, n: usize) -> Result<Level> {
    let mut elems: Vec<(Vec<usize>, usize)> = Vec::new();
    for x in 0..b.dim() {
        let k = b.cochain(x) as usize;
        if k > n {
            continue;
        }
        for j in subsets(n, k) {
            elems.push((j, x));
        }
    }
    let pos: HashMap<(Vec<usize>, usize), usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let basis: Vec<(String, i32)> = elems.iter().map(|(j, x)| (label(b, j, *x), b.chain(*x))).collect();
    let mut d = Vec::new();
    for (i, (j, x)) in elems.iter().enumerate() {
        for (t, c) in b.d_v_basis(*x) {
            d.push((i, pos[&(j.clone(), t)], c));
        }
    }
    let mut mult = Vec::new();
    for (i, (j1, x)) in elems.iter().enumerate() {
        for (k, (j2, y)) in elems.iter().enumerate() {
            if j1.iter().any(|a| j2.contains(a)) {
                continue;
            }
            let prods = b.mul_basis(*x, *y);
            if prods.is_empty() {
                continue;
            }
            let mut ju: Vec<usize> = j1.iter().chain(j2.iter()).copied().collect();
            ju.sort_unstable();
            let s = Q::from_integer(shuffle_sign(j1, j2).into()) * sign((b.chain(*x) * b.cochain(*y)) as i64);
            for (c, coeff) in prods {
                mult.push((i, k, pos[&(ju.clone(), *c)], &s * coeff));
            }
        }
    }
    let by_label: HashMap<String, usize> = basis.iter().enumerate().map(|(i, (l, _))| (l.clone(), i)).collect();
    let algebra = ArtinCdga::new(format!("D({})[{n}]", b.name), basis, &d, &mult)?;
    let summands: Vec<(Vec<usize>, usize)> = (0..algebra.dim())
        .map(|i| elems[by_label[algebra.label(i)]].clone())
        .collect();
    let index = summands.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Ok(Level {
        algebra,
        summands,
        index,
    })
}

/// Levels `0..=max_level` of the denormalization, each validated.
pub fn denormalize(b: &BigradedArtin, max_level: usize) -> Result<CosimplicialArtin> {
    let levels = (0..=max_level).map(|n| build_level(b, n)).collect::<Result<Vec<_>>>()?;
    Ok(CosimplicialArtin {
        source: b.clone(),
        levels,
    })
}

fn compose(tau: &[usize], theta: &[usize]) -> Vec<usize> {
    theta.iter().map(|&i| tau[i]).collect()
}

pub fn coface_map(n: usize, i: usize) -> Vec<usize> {
    // [n-1] -> [n] skipping i
    (0..n).map(|k| if k < i { k } else { k + 1 }).collect()
}

pub fn codegeneracy_map(n: usize, i: usize) -> Vec<usize> {
    // [n+1] -> [n] hitting i twice
    (0..=n + 1).map(|k| if k <= i { k } else { k - 1 }).collect()
}

impl CosimplicialArtin {
    pub fn level(&self, n: usize) -> Result<&Level> {
        self.levels.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            max: self.levels.len().saturating_sub(1),
        })
    }

    /// The structure map `theta_*` for a monotone `theta: [n] -> [m]`.
    pub fn structure_map(&self, theta: &[usize], m: usize) -> Result<CdgaMap> {
        let n = theta.len().checked_sub(1).ok_or_else(|| Error::Validation("empty map".into()))?;
        if theta.windows(2).any(|w| w[0] > w[1]) || theta.iter().any(|&v| v > m) {
            return Err(Error::Validation("not a monotone map".into()));
        }
        let src = self.level(n)?;
        let tgt = self.level(m)?;
        let b = &self.source;
        let mut mat = RatMatrix::zeros(tgt.algebra.dim(), src.algebra.dim());
        for (col, (j, x)) in src.summands.iter().enumerate() {
            let k = j.len();
            let sigma = surjection(n, j);
            for tj in subsets(m, k) {
                if compose(&surjection(m, &tj), theta) == sigma {
                    mat.add_to(tgt.index[&(tj, *x)], col, &Q::one());
                }
            }
            let shifted: Vec<usize> = sigma.iter().map(|v| v + 1).collect();
            let dh = b.d_h_basis(*x);
            if dh.is_empty() {
                continue;
            }
            for tj in subsets(m, k + 1) {
                if compose(&surjection(m, &tj), theta) == shifted {
                    for (t, c) in &dh {
                        mat.add_to(tgt.index[&(tj.clone(), *t)], col, c);
                    }
                }
            }
        }
        CdgaMap::new(src.algebra.clone(), tgt.algebra.clone(), mat)
    }

    /// Coface `d^i`: level `n - 1` to level `n`.
    pub fn coface(&self, n: usize, i: usize) -> Result<CdgaMap> {
        if n == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        self.structure_map(&coface_map(n, i), n)
    }

    /// Codegeneracy `s^i`: level `n + 1` to level `n`.
    pub fn codegeneracy(&self, n: usize, i: usize) -> Result<CdgaMap> {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        self.structure_map(&codegeneracy_map(n, i), n)
    }

    /// Checks `(phi theta)_* = phi_* theta_*` for all composable pairs of
    /// cofaces and codegeneracies within the built levels; together these
    /// give the cosimplicial identities.
    pub fn validate(&self) -> Result<()> {
        let top = self.levels.len() - 1;
        let mut gens: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for n in 1..=top {
            for i in 0..=n {
                gens.push((n - 1, n, coface_map(n, i)));
            }
        }
        for n in 0..top {
            for i in 0..=n {
                gens.push((n + 1, n, codegeneracy_map(n, i)));
            }
        }
        let maps: Vec<CdgaMap> = gens.iter().map(|(_, m, t)| self.structure_map(t, *m)).collect::<Result<_>>()?;
        for (a, (s1, t1, th)) in gens.iter().enumerate() {
            for (b, (s2, t2, ph)) in gens.iter().enumerate() {
                if t1 != s2 {
                    continue;
                }
                let direct = self.structure_map(&compose(ph, th), *t2)?;
                let composite = maps[a].then(&maps[b])?;
                if direct.matrix != composite.matrix {
                    return Err(Error::Validation(format!(
                        "cosimplicial identity fails for maps [{s1}]->[{t1}]->[{t2}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The levelwise map induced by a bigraded map.
pub fn denormalize_map(f: &BigradedMap, src: &CosimplicialArtin, tgt: &CosimplicialArtin, n: usize) -> Result<CdgaMap> {
    let ls = src.level(n)?;
    let lt = tgt.level(n)?;
    let mut mat = RatMatrix::zeros(lt.algebra.dim(), ls.algebra.dim());
    for (col, (j, x)) in ls.summands.iter().enumerate() {
        for r in 0..f.target.dim() {
            let c = f.matrix.get(r, *x);
            if !c.is_zero() {
                mat.add_to(lt.index[&(j.clone(), r)], col, c);
            }
        }
    }
    CdgaMap::new(ls.algebra.clone(), lt.algebra.clone(), mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::truncated_polynomial;
    use crate::qlinalg::q;
    use crate::simplicial::bigraded::from_artin;

    fn one_generator_in_cochain_one() -> BigradedArtin {
        // x (1,0), y (1,0), xy (2,0) with x y = -y x
        BigradedArtin::new(
            "B",
            vec![("x".into(), 1, 0), ("y".into(), 1, 0), ("xy".into(), 2, 0)],
            &[],
            &[],
            &[(0, 1, 2, q(1)), (1, 0, 2, q(-1))],
        )
        .unwrap()
    }

    #[test]
    fn constant_for_cochain_zero() {
        let a = truncated_polynomial(3).unwrap();
        let c = denormalize(&from_artin(&a).unwrap(), 3).unwrap();
        for n in 0..=3 {
            assert_eq!(c.levels[n].algebra.dim(), a.dim());
        }
        c.validate().unwrap();
    }

    #[test]
    fn dold_kan_dimension_count() {
        let b = BigradedArtin::new("B", vec![("x".into(), 1, 0)], &[], &[], &[]).unwrap();
        let c = denormalize(&b, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(c.levels[n].algebra.dim(), n);
        }
        c.validate().unwrap();
    }

    #[test]
    fn shuffle_product_at_level_two() {
        let c = denormalize(&one_generator_in_cochain_one(), 3).unwrap();
        c.validate().unwrap();
        let lv = &c.levels[2];
        let a = &lv.algebra;
        let x1 = a.index_of("x@{1}").unwrap();
        let y2 = a.index_of("y@{2}").unwrap();
        let y1 = a.index_of("y@{1}").unwrap();
        let x2 = a.index_of("x@{2}").unwrap();
        let xy = a.index_of("xy@{1,2}").unwrap();
        assert_eq!(a.mul_basis(x1, y2), &[(xy, q(1))]);
        assert_eq!(a.mul_basis(x2, y1), &[(xy, q(-1))]);
        assert_eq!(a.mul_basis(y2, x1), &[(xy, q(1))]);
        assert!(a.mul_basis(x1, y1).is_empty());
    }

    #[test]
    fn horizontal_differential_enters_cofaces() {
        // a (0,0) -> c (1,0) horizontally
        let b = BigradedArtin::new("B", vec![("a".into(), 0, 0), ("c".into(), 1, 0)], &[(0, 1, q(1))], &[], &[]).unwrap();
        let c = denormalize(&b, 3).unwrap();
        c.validate().unwrap();
    }
}
