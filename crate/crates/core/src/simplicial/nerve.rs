//! Cells of the MC nerve: degree-1 elements of `H (x) Omega(Delta^n)` where
//! `H = L (x) m(A)` is the coefficient extension. With `h` a basis element of
//! `H` and `f` a form,
//!
//! `d(h (x) f) = dh (x) f + (-1)^{|h|} h (x) df`,
//! `[h (x) f, h' (x) f'] = (-1)^{|f||h'|} [h, h'] (x) f f'`.

use std::sync::Arc;

use num_traits::Zero;

use crate::artin::ArtinCdga;
use crate::dgla::{coefficient_extension, Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::mcgauge::{gauge_act, GaugeElement, McElement};
use crate::qlinalg::{qf, sign, Q};

use super::forms::DeRhamForm;

#[derive(Clone, Debug)]
pub struct NerveCell {
    pub host: Arc<NilpotentDgla>,
    pub n: usize,
    /// one form per basis element of the host
    pub components: Vec<DeRhamForm>,
}

impl PartialEq for NerveCell {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.host == *other.host && self.components == other.components
    }
}

/// Result of checking the MC equation on a cell.
#[derive(Clone, Debug)]
pub struct McCheck {
    pub certified: bool,
    pub residual: NerveCell,
}

impl NerveCell {
    pub fn new(host: Arc<NilpotentDgla>, n: usize, components: Vec<DeRhamForm>) -> Result<Self> {
        if components.len() != host.dim() || components.iter().any(|f| f.dim() != n) {
            return Err(Error::DimensionMismatch("cell components".into()));
        }
        let c = NerveCell { host, n, components };
        c.check_total_degree(1)?;
        Ok(c)
    }

    fn zero_like(&self, n: usize) -> Self {
        NerveCell {
            host: self.host.clone(),
            n,
            components: vec![DeRhamForm::zero(n); self.host.dim()],
        }
    }

    /// The constant cell on `Delta^n` at an element of the host.
    pub fn constant(host: Arc<NilpotentDgla>, n: usize, omega: &[Q]) -> Result<Self> {
        if omega.len() != host.dim() {
            return Err(Error::DimensionMismatch("element length".into()));
        }
        let components = omega.iter().map(|c| DeRhamForm::constant(n, c.clone())).collect();
        NerveCell::new(host, n, components)
    }

    fn check_total_degree(&self, deg: i32) -> Result<()> {
        for (k, f) in self.components.iter().enumerate() {
            let hk = self.host.dgla.degree(k);
            for (_, m, _) in f.terms() {
                if hk + m.count_ones() as i32 != deg {
                    return Err(Error::Validation(format!(
                        "component on {} has the wrong form degree",
                        self.host.dgla.label(k)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn d(&self) -> Result<Self> {
        let l = &self.host.dgla;
        let mut out = self.zero_like(self.n);
        for (k, f) in self.components.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let dk = l.d_vec(&l.unit_vec(k));
            for (t, x) in dk.iter().enumerate() {
                if !x.is_zero() {
                    out.components[t] = out.components[t].add(&f.scale(x))?;
                }
            }
            let s = sign(l.degree(k) as i64);
            out.components[k] = out.components[k].add(&f.d().scale(&s))?;
        }
        Ok(out)
    }

    pub fn bracket(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch("cells on different simplices".into()));
        }
        let l = &self.host.dgla;
        let mut out = self.zero_like(self.n);
        for (k1, f1) in self.components.iter().enumerate() {
            if f1.is_zero() {
                continue;
            }
            for (k2, f2) in o.components.iter().enumerate() {
                if f2.is_zero() {
                    continue;
                }
                let br = l.bracket_basis(k1, k2);
                if br.is_empty() {
                    continue;
                }
                // split f1 by parity of form degree for the sign
                let h2 = l.degree(k2);
                let mut signed = DeRhamForm::zero(self.n);
                for (e, m, c) in f1.terms() {
                    let s = sign((m.count_ones() as i32 * h2) as i64);
                    signed = signed.add(&DeRhamForm::monomial(self.n, e.clone(), m, s * c)?)?;
                }
                let prod = signed.mul(f2)?;
                for (t, x) in br {
                    out.components[*t] = out.components[*t].add(&prod.scale(x))?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    pub fn face(&self, i: usize) -> Result<Self> {
        let components = self.components.iter().map(|f| f.face(i)).collect::<Result<Vec<_>>>()?;
        Ok(NerveCell {
            host: self.host.clone(),
            n: self.n - 1,
            components,
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        let components = self.components.iter().map(|f| f.degeneracy(i)).collect::<Result<Vec<_>>>()?;
        Ok(NerveCell {
            host: self.host.clone(),
            n: self.n + 1,
            components,
        })
    }

    /// The host element of a cell on `Delta^0`.
    pub fn point(&self) -> Result<Vec<Q>> {
        self.components.iter().map(|f| f.value()).collect()
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| (self.host.dgla.label(k).to_string(), f.to_string()))
            .collect()
    }
}

/// `dC + 1/2 [C, C]` with exact polynomial coefficients.
pub fn mc_check_on_simplex(c: &NerveCell) -> Result<McCheck> {
    let dc = c.d()?;
    let br = c.bracket(c)?;
    let mut residual = dc;
    for (k, f) in br.components.iter().enumerate() {
        residual.components[k] = residual.components[k].add(&f.scale(&qf(1, 2)))?;
    }
    Ok(McCheck {
        certified: residual.is_zero(),
        residual,
    })
}

/// The cell `omega(t) + x dt` on `Delta^1` with `omega(t) = exp((1 - t) x) * omega`,
/// obtained by Picard iteration of `omega'(t) = dx - [x, omega(t)]` from
/// `omega(1) = omega`. Its faces are `d_0 = omega` (at `t = 1`) and
/// `d_1 = exp(x) * omega` (at `t = 0`); both are checked.
pub fn gauge_one_simplex(omega: &McElement, x: &GaugeElement) -> Result<NerveCell> {
    omega.certify()?;
    let target = gauge_act(x, omega)?;
    let host = omega.host.clone();
    let l = &host.dgla;
    let n = host.dim();
    let dx = l.d_vec(&x.coeffs);
    let deg1: Vec<usize> = host.range_at(1).collect();
    let mut cur: Vec<DeRhamForm> = omega.coeffs.iter().map(|c| DeRhamForm::constant(1, c.clone())).collect();
    let max_iter = host.nilpotency_bound() + 2;
    let mut converged = false;
    for _ in 0..max_iter {
        // integrand: dx - [x, omega(s)], as polynomials per host index
        let mut integrand: Vec<DeRhamForm> = dx.iter().map(|c| DeRhamForm::constant(1, c.clone())).collect();
        for &k in &deg1 {
            if cur[k].is_zero() {
                continue;
            }
            for (xi, xc) in x.coeffs.iter().enumerate() {
                if xc.is_zero() {
                    continue;
                }
                for (t, b) in l.bracket_basis(xi, k) {
                    integrand[*t] = integrand[*t].sub(&cur[k].scale(&(xc * b)))?;
                }
            }
        }
        let mut next = Vec::with_capacity(n);
        for k in 0..n {
            let base = DeRhamForm::constant(1, omega.coeffs[k].clone());
            next.push(base.add(&integrand[k].integrate_from_one()?)?);
        }
        if next == cur {
            converged = true;
            break;
        }
        cur = next;
    }
    if !converged {
        return Err(Error::Other("flow iteration did not terminate".into()));
    }
    let dt = DeRhamForm::dt(1, 1)?;
    for (k, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            cur[k] = cur[k].add(&dt.scale(c))?;
        }
    }
    let cell = NerveCell::new(host, 1, cur)?;
    if !mc_check_on_simplex(&cell)?.certified {
        return Err(Error::Validation("one-simplex is not MC".into()));
    }
    if cell.face(0)?.point()? != omega.coeffs {
        return Err(Error::Validation("face 0 of the one-simplex is not omega".into()));
    }
    if cell.face(1)?.point()? != target.coeffs {
        return Err(Error::Validation("face 1 of the one-simplex is not the gauge image".into()));
    }
    Ok(cell)
}

/// `pi_i` of the nerve for square-zero coefficients, as `dim H^{1-i}(Tot(L (x) V))`.
pub fn nerve_pi_square_zero(l: &Dgla, a: &ArtinCdga, i: usize) -> Result<usize> {
    if !a.mult_table().is_empty() {
        return Err(Error::NotSquareZero);
    }
    let host = coefficient_extension(l, a)?;
    Ok(host.dgla.cohomology(1 - i as i32).dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{dual_numbers, truncated_polynomial};
    use crate::dgla::{labh, lobs};
    use crate::qlinalg::q;

    #[test]
    fn labh1_cells_on_delta_one() {
        let host = Arc::new(coefficient_extension(&labh(1), &dual_numbers(0)).unwrap());
        for (a, b) in [(1, 0), (2, 3), (0, -1)] {
            let f = DeRhamForm::constant(1, q(a)).add(&DeRhamForm::t(1, 1).unwrap().scale(&q(b))).unwrap();
            let cell = NerveCell::new(host.clone(), 1, vec![f]).unwrap();
            let chk = mc_check_on_simplex(&cell).unwrap();
            assert_eq!(chk.certified, b == 0);
            let expected = DeRhamForm::dt(1, 1).unwrap().scale(&q(-b));
            assert_eq!(chk.residual.components[0], expected);
        }
    }

    #[test]
    fn abelian_one_simplex() {
        let l = crate::dgla::Dgla::new("L", vec![("y".into(), 0), ("w".into(), 1)], &[(0, 1, q(1))], &[]).unwrap();
        let host = Arc::new(coefficient_extension(&l, &dual_numbers(0)).unwrap());
        let omega = McElement::zero(host.clone());
        let x = GaugeElement::new(host.clone(), vec![q(1), q(0)]).unwrap();
        let cell = gauge_one_simplex(&omega, &x).unwrap();
        // omega - (1 - t) dx + x dt
        let w = host.dgla.index_of("w*eps").unwrap();
        let y = host.dgla.index_of("y*eps").unwrap();
        let t = DeRhamForm::t(1, 1).unwrap();
        assert_eq!(cell.components[w], t.sub(&DeRhamForm::constant(1, q(1))).unwrap());
        assert_eq!(cell.components[y], DeRhamForm::dt(1, 1).unwrap());
    }

    #[test]
    fn lobs_one_simplex_matches_gauge_action() {
        let host = Arc::new(coefficient_extension(&lobs(), &truncated_polynomial(4).unwrap()).unwrap());
        let omega = McElement::zero(host.clone());
        assert!(host.range_at(0).is_empty());
        let x = GaugeElement::identity(host.clone());
        let cell = gauge_one_simplex(&omega, &x).unwrap();
        assert_eq!(cell, NerveCell::constant(host, 1, &omega.coeffs).unwrap());
    }

    #[test]
    fn end_dgla_one_simplex() {
        let v = crate::complexes::CochainComplex::from_chain(
            vec![(0, "a".into()), (1, "b".into()), (1, "c".into())],
            &std::iter::once((("b".to_string(), "a".to_string()), q(1))).collect(),
        )
        .unwrap();
        let e = crate::dgla::end_dgla(&v).unwrap();
        let host = Arc::new(coefficient_extension(&e, &truncated_polynomial(4).unwrap()).unwrap());
        let mut xv = vec![Q::zero(); host.dim()];
        for (k, i) in host.range_at(0).enumerate() {
            xv[i] = q((k as i64 % 5) - 2);
        }
        let x = GaugeElement::new(host.clone(), xv.clone()).unwrap();
        let omega = crate::mcgauge::gauge_act(&x, &McElement::zero(host.clone())).unwrap();
        let y = GaugeElement::new(host.clone(), xv.iter().rev().cloned().collect::<Vec<_>>()).ok();
        let y = y.unwrap_or_else(|| GaugeElement::new(host.clone(), xv).unwrap());
        let cell = gauge_one_simplex(&omega, &y).unwrap();
        assert!(cell.components.iter().any(|f| f.poly_degree() >= 2));
        let s = cell.degeneracy(0).unwrap();
        assert!(mc_check_on_simplex(&s).unwrap().certified);
        assert_eq!(s.face(0).unwrap(), cell);
        assert_eq!(s.face(1).unwrap(), cell);
    }

    #[test]
    fn nerve_pi_examples() {
        assert_eq!(nerve_pi_square_zero(&lobs(), &dual_numbers(0), 0).unwrap(), 1);
        assert_eq!(nerve_pi_square_zero(&lobs(), &dual_numbers(1), 1).unwrap(), 1);
        assert!(matches!(
            nerve_pi_square_zero(&lobs(), &truncated_polynomial(3).unwrap(), 0),
            Err(Error::NotSquareZero)
        ));
    }
}
