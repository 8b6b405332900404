//! Free graded Lie algebras truncated by weight, realised inside the tensor
//! algebra on their generators.
//!
//! Generators carry a cochain degree and a positive weight. The basis of the
//! weight-`w` part is chosen greedily: first the generators of weight `w` in
//! index order, then right-normed brackets `[g, b]` with `g` a generator and
//! `b` an earlier basis element, scanned in (generator, basis index) order
//! and kept when linearly independent of what is already chosen. Right-normed
//! brackets span the free Lie algebra in characteristic 0, so this gives a
//! canonical basis.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qlinalg::{sign, Echelon, Q};

pub type Word = Vec<usize>;
pub type TElem = BTreeMap<Word, Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieForm {
    Gen(usize),
    /// `[generator, basis element]`
    Bracket(usize, usize),
}

#[derive(Clone, Debug)]
pub struct LieBasisElem {
    pub weight: usize,
    pub degree: i32,
    pub form: LieForm,
    pub expansion: TElem,
}

#[derive(Clone, Debug)]
pub struct FreeLie {
    pub gen_degree: Vec<i32>,
    pub gen_weight: Vec<usize>,
    pub max_weight: usize,
    pub basis: Vec<LieBasisElem>,
    echelons: HashMap<usize, Echelon<Word>>,
    /// per weight: echelon row -> combination of basis indices
    rows_in_basis: HashMap<usize, Vec<BTreeMap<usize, Q>>>,
}

pub fn add_into(acc: &mut TElem, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&w);
    }
}

impl FreeLie {
    pub fn new(gen_degree: Vec<i32>, gen_weight: Vec<usize>, max_weight: usize) -> Result<Self> {
        if gen_degree.len() != gen_weight.len() || gen_weight.iter().any(|&w| w == 0) {
            return Err(Error::Validation("generator weights must be positive".into()));
        }
        let mut f = FreeLie {
            gen_degree,
            gen_weight,
            max_weight,
            basis: Vec::new(),
            echelons: HashMap::new(),
            rows_in_basis: HashMap::new(),
        };
        let ngen = f.gen_degree.len();
        for w in 1..=max_weight {
            for g in 0..ngen {
                if f.gen_weight[g] == w {
                    let e: TElem = std::iter::once((vec![g], Q::one())).collect();
                    f.try_insert(w, f.gen_degree[g], LieForm::Gen(g), e);
                }
            }
            for g in 0..ngen {
                let wg = f.gen_weight[g];
                if wg >= w {
                    continue;
                }
                let candidates: Vec<usize> = (0..f.basis.len()).filter(|&b| f.basis[b].weight == w - wg).collect();
                let gen: TElem = std::iter::once((vec![g], Q::one())).collect();
                for b in candidates {
                    let e = f.commutator(&gen, &f.basis[b].expansion);
                    if e.is_empty() {
                        continue;
                    }
                    let deg = f.gen_degree[g] + f.basis[b].degree;
                    f.try_insert(w, deg, LieForm::Bracket(g, b), e);
                }
            }
        }
        Ok(f)
    }

    fn try_insert(&mut self, w: usize, degree: i32, form: LieForm, e: TElem) {
        let ech = self.echelons.entry(w).or_default();
        if let Some((row, used)) = ech.insert_indexed(e.clone()) {
            let idx = self.basis.len();
            let rows = self.rows_in_basis.entry(w).or_default();
            let mut comb: BTreeMap<usize, Q> = BTreeMap::new();
            comb.insert(idx, Q::one());
            for (r, c) in used {
                for (b, x) in &rows[r] {
                    let e = comb.entry(*b).or_insert_with(Q::zero);
                    *e -= &c * x;
                }
            }
            comb.retain(|_, x| !x.is_zero());
            debug_assert_eq!(row, rows.len());
            rows.push(comb);
            self.basis.push(LieBasisElem {
                weight: w,
                degree,
                form,
                expansion: e,
            });
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn word_degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&g| self.gen_degree[g]).sum()
    }

    pub fn word_weight(&self, w: &[usize]) -> usize {
        w.iter().map(|&g| self.gen_weight[g]).sum()
    }

    /// Product in the tensor algebra, dropping words above the maximal weight.
    pub fn tensor_mul(&self, x: &TElem, y: &TElem) -> TElem {
        let mut out = TElem::new();
        for (u, a) in x {
            let wu = self.word_weight(u);
            for (v, b) in y {
                if wu + self.word_weight(v) > self.max_weight {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                add_into(&mut out, w, a * b);
            }
        }
        out
    }

    /// Graded commutator `xy - (-1)^{|x||y|} yx`, computed word by word.
    pub fn commutator(&self, x: &TElem, y: &TElem) -> TElem {
        let mut out = TElem::new();
        for (u, a) in x {
            let (du, wu) = (self.word_degree(u), self.word_weight(u));
            for (v, b) in y {
                if wu + self.word_weight(v) > self.max_weight {
                    continue;
                }
                let dv = self.word_degree(v);
                let c = a * b;
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                add_into(&mut out, uv, c.clone());
                let mut vu = v.clone();
                vu.extend_from_slice(u);
                add_into(&mut out, vu, -sign((du * dv) as i64) * c);
            }
        }
        out
    }

    /// Extends generator images `dg` (tensor elements of degree `|g| + 1`)
    /// to a derivation of the tensor algebra.
    pub fn derivation(&self, x: &TElem, dg: &[TElem]) -> TElem {
        let mut out = TElem::new();
        for (w, c) in x {
            for i in 0..w.len() {
                let s = sign(self.word_degree(&w[..i]) as i64);
                let pre: TElem = std::iter::once((w[..i].to_vec(), Q::one())).collect();
                let post: TElem = std::iter::once((w[i + 1..].to_vec(), Q::one())).collect();
                let t = self.tensor_mul(&self.tensor_mul(&pre, &dg[w[i]]), &post);
                for (w2, c2) in t {
                    add_into(&mut out, w2, &s * c * c2);
                }
            }
        }
        out
    }

    /// Coordinates of a Lie element (given in the tensor algebra) in the
    /// basis; words above the maximal weight are ignored.
    pub fn coords(&self, x: &TElem) -> Result<BTreeMap<usize, Q>> {
        let mut by_weight: BTreeMap<usize, BTreeMap<Word, Q>> = BTreeMap::new();
        for (w, c) in x {
            let wt = self.word_weight(w);
            if wt <= self.max_weight {
                by_weight.entry(wt).or_default().insert(w.clone(), c.clone());
            }
        }
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (wt, v) in by_weight {
            let ech = self
                .echelons
                .get(&wt)
                .ok_or_else(|| Error::Validation("element is not a Lie element".into()))?;
            let (res, used) = ech.reduce(v);
            if !res.is_empty() {
                return Err(Error::Validation("element is not a Lie element".into()));
            }
            for (r, c) in used {
                for (b, x) in &self.rows_in_basis[&wt][r] {
                    *out.entry(*b).or_insert_with(Q::zero) += &c * x;
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        Ok(out)
    }

    /// Evaluates a basis element under a Lie algebra map given on
    /// generators, using the recorded right-normed form.
    pub fn evaluate<T: Clone>(
        &self,
        gen_images: &[T],
        bracket: impl Fn(&T, &T) -> T,
    ) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let v = match b.form {
                LieForm::Gen(g) => gen_images[g].clone(),
                LieForm::Bracket(g, k) => bracket(&gen_images[g], &out[k]),
            };
            out.push(v);
        }
        out
    }

    pub fn label(&self, i: usize, gen_label: &dyn Fn(usize) -> String) -> String {
        match self.basis[i].form {
            LieForm::Gen(g) => gen_label(g),
            LieForm::Bracket(g, b) => format!("[{},{}]", gen_label(g), self.label(b, gen_label)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_match_witt_formula_for_even_generators() {
        // two even generators: free Lie dims 2, 1, 2, 3 in lengths 1..4
        let f = FreeLie::new(vec![0, 0], vec![1, 1], 4).unwrap();
        let mut dims = [0usize; 5];
        for b in &f.basis {
            dims[b.weight] += 1;
        }
        assert_eq!(&dims[1..], &[2, 1, 2, 3]);
    }

    #[test]
    fn odd_generator_has_nonzero_square() {
        let f = FreeLie::new(vec![1], vec![1], 3).unwrap();
        // x, [x,x]; [x,[x,x]] = 0 by Jacobi
        assert_eq!(f.dim(), 2);
        let g = FreeLie::new(vec![0], vec![1], 3).unwrap();
        assert_eq!(g.dim(), 1);
    }

    #[test]
    fn coords_roundtrip() {
        let f = FreeLie::new(vec![0, 1, 1], vec![1, 1, 1], 3).unwrap();
        for (i, b) in f.basis.iter().enumerate() {
            let c = f.coords(&b.expansion).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c[&i], Q::one());
        }
        for i in 0..f.dim() {
            for j in 0..f.dim() {
                let br = f.commutator(&f.basis[i].expansion, &f.basis[j].expansion);
                f.coords(&br).unwrap();
            }
        }
    }
}
