//! Truncated universal enveloping algebra of a nilpotent DGLA, realised on
//! graded PBW monomials (non-decreasing index words, odd letters at most
//! once) modulo monomials whose total weight reaches the nilpotency bound.
//!
//! Straightening rules, with `|x|` the degree:
//! * `y x = (-1)^{|x||y|} x y + [y, x]` for letters `y > x`;
//! * `a a = 1/2 [a, a]` for an odd letter `a`.
//! Each rewrite either lowers the length (bracket terms) or the inversion
//! count, and brackets never lower the weight, so straightening terminates.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::dgla::NilpotentDgla;
use crate::error::{invalid, Result};
use crate::qlinalg::{q, qf, sign, Q};

pub type Word = Vec<usize>;

/// Element of the truncated enveloping algebra: normal-ordered words with
/// coefficients; the empty word is the unit.
pub type UElem = BTreeMap<Word, Q>;

pub struct TruncatedUea<'a> {
    host: &'a NilpotentDgla,
    bound: usize,
    cache: RefCell<HashMap<(usize, Word), UElem>>,
}

fn add_into(acc: &mut UElem, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&w);
    }
}

pub fn scale(c: &Q, x: &UElem) -> UElem {
    if c.is_zero() {
        return UElem::new();
    }
    x.iter().map(|(w, v)| (w.clone(), c * v)).collect()
}

pub fn add(x: &UElem, y: &UElem) -> UElem {
    let mut out = x.clone();
    for (w, c) in y {
        add_into(&mut out, w.clone(), c.clone());
    }
    out
}

pub fn sub(x: &UElem, y: &UElem) -> UElem {
    add(x, &scale(&-Q::one(), y))
}

pub fn unit() -> UElem {
    std::iter::once((Vec::new(), Q::one())).collect()
}

impl<'a> TruncatedUea<'a> {
    pub fn new(host: &'a NilpotentDgla) -> Self {
        TruncatedUea {
            host,
            bound: host.nilpotency_bound(),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn host(&self) -> &NilpotentDgla {
        self.host
    }

    fn deg(&self, i: usize) -> i32 {
        self.host.dgla.degree(i)
    }

    fn word_weight(&self, w: &[usize]) -> usize {
        w.iter().map(|&i| self.host.weight(i)).sum()
    }

    fn word_degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&i| self.deg(i)).sum()
    }

    /// Lie element (coefficient vector) as a UEA element.
    pub fn from_lie(&self, v: &[Q]) -> UElem {
        let mut out = UElem::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.insert(vec![i], c.clone());
            }
        }
        out
    }

    /// Reads back a UEA element that must be a Lie element (words of length
    /// one only).
    pub fn to_lie(&self, x: &UElem) -> Result<Vec<Q>> {
        let mut v = crate::qlinalg::zero_vec(self.host.dim());
        for (w, c) in x {
            if w.len() != 1 {
                return invalid(format!("element has a component of length {}", w.len()));
            }
            v[w[0]] += c;
        }
        Ok(v)
    }

    /// `e_x * m` for a letter `x` and a normal-ordered word `m`.
    fn left_mul_letter(&self, x: usize, m: &[usize]) -> UElem {
        if self.word_weight(m) + self.host.weight(x) >= self.bound {
            return UElem::new();
        }
        let key = (x, m.to_vec());
        if let Some(r) = self.cache.borrow().get(&key) {
            return r.clone();
        }
        let mut out = UElem::new();
        match m.first() {
            None => {
                out.insert(vec![x], Q::one());
            }
            Some(&y) if x < y || (x == y && self.deg(x) % 2 == 0) => {
                let mut w = Vec::with_capacity(m.len() + 1);
                w.push(x);
                w.extend_from_slice(m);
                out.insert(w, Q::one());
            }
            Some(&y) if x == y => {
                // odd letter squared: x x = 1/2 [x, x]
                let rest = &m[1..];
                for (c, coef) in self.host.dgla.bracket_basis(x, x) {
                    let part = self.left_mul_letter(*c, rest);
                    let f = coef * qf(1, 2);
                    for (w, v) in part {
                        add_into(&mut out, w, &f * v);
                    }
                }
            }
            Some(&y) => {
                // x y = (-1)^{|x||y|} y x + [x, y], with y < x
                let rest = &m[1..];
                let s = sign((self.deg(x) * self.deg(y)) as i64);
                let inner = self.left_mul_letter(x, rest);
                for (w, v) in inner {
                    let part = self.left_mul_letter(y, &w);
                    for (w2, v2) in part {
                        add_into(&mut out, w2, &s * &v * v2);
                    }
                }
                for (c, coef) in self.host.dgla.bracket_basis(x, y) {
                    let part = self.left_mul_letter(*c, rest);
                    for (w, v) in part {
                        add_into(&mut out, w, coef * v);
                    }
                }
            }
        }
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    fn mul_words(&self, a: &[usize], b: &[usize]) -> UElem {
        let mut cur: UElem = std::iter::once((b.to_vec(), Q::one())).collect();
        for &x in a.iter().rev() {
            let mut next = UElem::new();
            for (w, c) in &cur {
                for (w2, c2) in self.left_mul_letter(x, w) {
                    add_into(&mut next, w2, c * c2);
                }
            }
            cur = next;
        }
        cur
    }

    pub fn mul(&self, x: &UElem, y: &UElem) -> UElem {
        let mut out = UElem::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if self.word_weight(a) + self.word_weight(b) >= self.bound {
                    continue;
                }
                for (w, c) in self.mul_words(a, b) {
                    add_into(&mut out, w, ca * cb * c);
                }
            }
        }
        out
    }

    /// `sum_{k < bound} x^k / k!` for `x` without constant term.
    pub fn exp(&self, x: &UElem) -> UElem {
        let mut out = unit();
        let mut power = unit();
        for k in 1..self.bound.max(1) {
            power = scale(&(Q::one() / q(k as i64)), &self.mul(&power, x));
            if power.is_empty() {
                break;
            }
            out = add(&out, &power);
        }
        out
    }

    /// `log(1 + u)` for `u` without constant term.
    pub fn log1p(&self, u: &UElem) -> UElem {
        let mut out = UElem::new();
        let mut power = unit();
        for k in 1..self.bound.max(1) {
            power = self.mul(&power, u);
            if power.is_empty() {
                break;
            }
            let c = sign(k as i64 + 1) / q(k as i64);
            out = add(&out, &scale(&c, &power));
        }
        out
    }

    pub fn log(&self, g: &UElem) -> UElem {
        let mut u = g.clone();
        add_into(&mut u, Vec::new(), -Q::one());
        self.log1p(&u)
    }

    /// The differential extended to the enveloping algebra as a derivation.
    pub fn d(&self, x: &UElem) -> UElem {
        let mut out = UElem::new();
        for (w, c) in x {
            for i in 0..w.len() {
                let s = sign(self.word_degree(&w[..i]) as i64);
                let dl = self.host.dgla.d_vec(&self.host.dgla.unit_vec(w[i]));
                for (j, dc) in dl.iter().enumerate() {
                    if dc.is_zero() {
                        continue;
                    }
                    // w[..i] * e_j * w[i+1..]
                    let left = self.mul_words(&w[..i], &[j]);
                    let full = self.mul(&left, &std::iter::once((w[i + 1..].to_vec(), Q::one())).collect());
                    for (w2, c2) in full {
                        add_into(&mut out, w2, &s * c * dc * c2);
                    }
                }
            }
        }
        out
    }
}

/// `z` with `exp(z) = exp(x) exp(y)`; both are degree-0 vectors of the host.
pub fn bch(host: &NilpotentDgla, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
    let u = TruncatedUea::new(host);
    let g = u.mul(&u.exp(&u.from_lie(x)), &u.exp(&u.from_lie(y)));
    u.to_lie(&u.log(&g))
}

/// `g omega g^{-1} - (dg) g^{-1}` with `g = exp(x)`, computed in the
/// truncated enveloping algebra.
pub fn gauge_act_uea(host: &NilpotentDgla, x: &[Q], omega: &[Q]) -> Result<Vec<Q>> {
    let u = TruncatedUea::new(host);
    let xl = u.from_lie(x);
    let g = u.exp(&xl);
    let ginv = u.exp(&scale(&-Q::one(), &xl));
    let conj = u.mul(&u.mul(&g, &u.from_lie(omega)), &ginv);
    let dg = u.d(&g);
    let res = sub(&conj, &u.mul(&dg, &ginv));
    u.to_lie(&res)
}

/// `e^{ad x} omega - sum_{n >= 0} ad_x^n (dx) / (n+1)!`.
pub fn gauge_act_series(host: &NilpotentDgla, x: &[Q], omega: &[Q]) -> Vec<Q> {
    let l = &host.dgla;
    let bound = host.nilpotency_bound();
    let mut out = omega.to_vec();
    let mut term = omega.to_vec();
    let mut fact = Q::one();
    for n in 1..bound.max(1) {
        term = l.bracket(x, &term);
        fact *= q(n as i64);
        crate::qlinalg::axpy(&mut out, &(Q::one() / &fact), &term);
    }
    let mut term = l.d_vec(x);
    let mut fact = Q::one();
    for n in 0..bound.max(1) {
        fact *= q(n as i64 + 1);
        crate::qlinalg::axpy(&mut out, &(-Q::one() / &fact), &term);
        term = l.bracket(x, &term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::truncated_polynomial;
    use crate::dgla::{coefficient_extension, labh, Dgla};
    use crate::qlinalg::zero_vec;

    fn heisenberg() -> Dgla {
        Dgla::new(
            "Heis",
            vec![("x".into(), 0), ("y".into(), 0), ("z".into(), 0)],
            &[],
            &[(0, 1, 2, q(1))],
        )
        .unwrap()
    }

    #[test]
    fn bch_examples() {
        let host = coefficient_extension(&heisenberg(), &truncated_polynomial(3).unwrap()).unwrap();
        let xt = host.element(&[(vec![q(1), q(0), q(0)], 0)]);
        let yt = host.element(&[(vec![q(0), q(1), q(0)], 0)]);
        let zero = zero_vec(host.dim());
        assert_eq!(bch(&host, &xt, &zero).unwrap(), xt);
        let z = bch(&host, &xt, &yt).unwrap();
        let mut expected = crate::qlinalg::add_vec(&xt, &yt);
        crate::qlinalg::axpy(&mut expected, &qf(1, 2), &host.dgla.bracket(&xt, &yt));
        assert_eq!(z, expected);
        assert!(!host.dgla.bracket(&xt, &yt).iter().all(|c| c.is_zero()));

        let ab = coefficient_extension(&labh(0), &truncated_polynomial(3).unwrap()).unwrap();
        let a = ab.element(&[(vec![q(2)], 0), (vec![q(1)], 1)]);
        let b = ab.element(&[(vec![q(-1)], 1)]);
        assert_eq!(bch(&ab, &a, &b).unwrap(), crate::qlinalg::add_vec(&a, &b));
    }

    #[test]
    fn gauge_routes_agree() {
        let host = coefficient_extension(&crate::dgla::lobs(), &truncated_polynomial(4).unwrap()).unwrap();
        // degree 0 of Lobs (x) m is empty; use End(V) instead
        assert_eq!(host.range_at(0).len(), 0);
        let v = crate::complexes::CochainComplex::from_chain(
            vec![(0, "a".into()), (1, "b".into())],
            &std::collections::BTreeMap::new(),
        )
        .unwrap();
        let e = crate::dgla::end_dgla(&v).unwrap();
        let host = coefficient_extension(&e, &truncated_polynomial(4).unwrap()).unwrap();
        let r0 = host.range_at(0);
        let r1 = host.range_at(1);
        let mut x = zero_vec(host.dim());
        for (k, i) in r0.enumerate() {
            x[i] = q(k as i64 % 3 - 1);
        }
        let mut w = zero_vec(host.dim());
        for (k, i) in r1.enumerate() {
            w[i] = q((k as i64 * 7) % 5 - 2);
        }
        assert_eq!(gauge_act_uea(&host, &x, &w).unwrap(), gauge_act_series(&host, &x, &w));
    }
}
