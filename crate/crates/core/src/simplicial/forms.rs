//! Polynomial de Rham forms on the standard simplex.
//!
//! A form on `Delta^n` is a polynomial in `t_1..t_n` and `dt_1..dt_n`;
//! `t_0 = 1 - sum t_i` and `dt_0 = -sum dt_i` are eliminated. A term is keyed
//! by its exponent vector and a bitmask of the `dt_i` present (bit `i - 1`),
//! the wedge factors taken in increasing index order.
//!
//! Simplicial operators are pullbacks along monotone maps `theta: [m] -> [n]`,
//! which send `t_j` to `sum_{theta(k) = j} u_k`. The face `d_i` pulls back
//! along the coface skipping `i` (so `t_i = 0`), and the degeneracy `s_i` along
//! the codegeneracy hitting `i` twice (so `t_i = u_i + u_{i+1}`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qlinalg::Q;

type Key = (Vec<u32>, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamForm {
    n: usize,
    terms: BTreeMap<Key, Q>,
}

fn wedge_sign(m1: u32, m2: u32) -> i64 {
    // pairs (a in m1, b in m2) with a > b
    let mut count = 0;
    for b in 0..32 {
        if m2 & (1 << b) != 0 {
            count += (m1 >> (b + 1)).count_ones();
        }
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DeRhamForm {
    pub fn zero(n: usize) -> Self {
        DeRhamForm { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut f = Self::zero(n);
        f.add_term(vec![0; n], 0, c);
        f
    }

    /// The monomial `c * t^exps * dt^mask`.
    pub fn monomial(n: usize, exps: Vec<u32>, mask: u32, c: Q) -> Result<Self> {
        if exps.len() != n || (n < 32 && mask >> n != 0) {
            return Err(Error::DimensionMismatch("form monomial does not fit the simplex".into()));
        }
        let mut f = Self::zero(n);
        f.add_term(exps, mask, c);
        Ok(f)
    }

    /// The coordinate `t_i`, `0 <= i <= n`.
    pub fn t(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        if i == 0 {
            let mut f = Self::constant(n, Q::one());
            for j in 1..=n {
                f = f.sub(&Self::t(n, j)?)?;
            }
            return Ok(f);
        }
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::monomial(n, e, 0, Q::one())
    }

    /// The one-form `dt_i`, `0 <= i <= n`.
    pub fn dt(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        if i == 0 {
            let mut f = Self::zero(n);
            for j in 1..=n {
                f = f.sub(&Self::dt(n, j)?)?;
            }
            return Ok(f);
        }
        Self::monomial(n, vec![0; n], 1 << (i - 1), Q::one())
    }

    fn add_term(&mut self, e: Vec<u32>, m: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (e, m);
        let x = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *x += c;
        if x.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32, &Q)> {
        self.terms.iter().map(|((e, m), c)| (e, *m, c))
    }

    /// Form degree if homogeneous (zero counts as degree 0).
    pub fn form_degree(&self) -> Option<u32> {
        let mut d = None;
        for (_, m) in self.terms.keys() {
            let k = m.count_ones();
            match d {
                None => d = Some(k),
                Some(x) if x != k => return None,
                _ => {}
            }
        }
        Some(d.unwrap_or(0))
    }

    pub fn poly_degree(&self) -> u32 {
        self.terms.keys().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    fn same_dim(&self, o: &Self) -> Result<()> {
        if self.n == o.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "forms on simplices of dimension {} and {}",
                self.n, o.n
            )))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_dim(o)?;
        let mut f = self.clone();
        for ((e, m), c) in &o.terms {
            f.add_term(e.clone(), *m, c.clone());
        }
        Ok(f)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut f = Self::zero(self.n);
        for ((e, m), x) in &self.terms {
            f.add_term(e.clone(), *m, x * c);
        }
        f
    }

    /// Wedge product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_dim(o)?;
        let mut f = Self::zero(self.n);
        for ((e1, m1), c1) in &self.terms {
            for ((e2, m2), c2) in &o.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                f.add_term(e, m1 | m2, Q::from_integer(wedge_sign(*m1, *m2).into()) * c1 * c2);
            }
        }
        Ok(f)
    }

    pub fn d(&self) -> Self {
        let mut f = Self::zero(self.n);
        for ((e, m), c) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 || m & (1 << i) != 0 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 1;
                let below = (m & ((1u32 << i) - 1)).count_ones();
                let s = if below % 2 == 0 { Q::one() } else { -Q::one() };
                f.add_term(e2, m | (1 << i), s * Q::from_integer(e[i].into()) * c);
            }
        }
        f
    }

    /// Pullback along a monotone map `theta: [m] -> [n]` given by its values.
    pub fn pullback(&self, theta: &[usize], m: usize) -> Result<Self> {
        if theta.len() != m + 1 || theta.iter().any(|&v| v > self.n) || theta.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Validation("not a monotone map into the simplex".into()));
        }
        let mut t_img = Vec::with_capacity(self.n + 1);
        let mut dt_img = Vec::with_capacity(self.n + 1);
        for j in 0..=self.n {
            let mut a = Self::zero(m);
            let mut b = Self::zero(m);
            for (k, &v) in theta.iter().enumerate() {
                if v == j {
                    a = a.add(&Self::t(m, k)?)?;
                    b = b.add(&Self::dt(m, k)?)?;
                }
            }
            t_img.push(a);
            dt_img.push(b);
        }
        let mut out = Self::zero(m);
        for ((e, mask), c) in &self.terms {
            let mut term = Self::constant(m, c.clone());
            for i in 0..self.n {
                for _ in 0..e[i] {
                    term = term.mul(&t_img[i + 1])?;
                }
            }
            for i in 0..self.n {
                if mask & (1 << i) != 0 {
                    term = term.mul(&dt_img[i + 1])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn face(&self, i: usize) -> Result<Self> {
        if self.n == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n });
        }
        let theta: Vec<usize> = (0..self.n).map(|k| if k < i { k } else { k + 1 }).collect();
        self.pullback(&theta, self.n - 1)
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        if i > self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n });
        }
        let theta: Vec<usize> = (0..=self.n + 1).map(|k| if k <= i { k } else { k - 1 }).collect();
        self.pullback(&theta, self.n + 1)
    }

    /// Value at a point of `Delta^0` (only for `n = 0`).
    pub fn value(&self) -> Result<Q> {
        if self.n != 0 {
            return Err(Error::DimensionMismatch("value of a form on a positive simplex".into()));
        }
        Ok(self.terms.get(&(vec![], 0)).cloned().unwrap_or_else(Q::zero))
    }

    /// Integral over `[1, t]` in the single variable of `Delta^1`, for 0-forms.
    pub(crate) fn integrate_from_one(&self) -> Result<Self> {
        if self.n != 1 || self.form_degree() != Some(0) {
            return Err(Error::Validation("integration needs a 0-form on Delta^1".into()));
        }
        let mut f = Self::zero(1);
        for ((e, _), c) in &self.terms {
            let k = Q::from_integer((e[0] + 1).into());
            f.add_term(vec![e[0] + 1], 0, c / &k);
            f.add_term(vec![0], 0, -(c / &k));
        }
        Ok(f)
    }
}

impl fmt::Display for DeRhamForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<(Q, String)> = self
            .terms
            .iter()
            .map(|((e, m), c)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("t{}", i + 1)),
                        _ => factors.push(format!("t{}^{}", i + 1, k)),
                    }
                }
                for i in 0..e.len() {
                    if m & (1 << i) != 0 {
                        factors.push(format!("dt{}", i + 1));
                    }
                }
                (c.clone(), factors.join("*"))
            })
            .collect();
        write!(f, "{}", crate::qlinalg::fmt_linear(&parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    #[test]
    fn basic_calculus() {
        let t1 = DeRhamForm::t(2, 1).unwrap();
        let t2 = DeRhamForm::t(2, 2).unwrap();
        assert_eq!(t1.d(), DeRhamForm::dt(2, 1).unwrap());
        assert!(DeRhamForm::dt(2, 1).unwrap().d().is_zero());
        let lhs = t1.mul(&t2).unwrap().d();
        let rhs = t2
            .mul(&DeRhamForm::dt(2, 1).unwrap())
            .unwrap()
            .add(&t1.mul(&DeRhamForm::dt(2, 2).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let dt = DeRhamForm::dt(1, 1).unwrap();
        let f = DeRhamForm::constant(1, q(2)).add(&DeRhamForm::t(1, 1).unwrap().scale(&q(3))).unwrap();
        assert!(f.mul(&dt).unwrap().mul(&dt).unwrap().is_zero());
        // t_0 + t_1 + t_2 = 1 and dt_0 + dt_1 + dt_2 = 0
        let t0 = DeRhamForm::t(2, 0).unwrap();
        assert_eq!(t0.add(&t1).unwrap().add(&t2).unwrap(), DeRhamForm::constant(2, q(1)));
        assert_eq!(t0.d(), DeRhamForm::dt(2, 0).unwrap());
    }

    #[test]
    fn faces_of_delta_one() {
        let t = DeRhamForm::t(1, 1).unwrap();
        assert_eq!(t.face(0).unwrap().value().unwrap(), q(1));
        assert_eq!(t.face(1).unwrap().value().unwrap(), q(0));
        assert!(DeRhamForm::dt(1, 1).unwrap().face(0).unwrap().is_zero());
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        assert!(DeRhamForm::t(1, 1).unwrap().add(&DeRhamForm::t(2, 1).unwrap()).is_err());
        assert!(DeRhamForm::t(1, 2).is_err());
    }
}
