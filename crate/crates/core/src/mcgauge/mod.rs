//! Maurer-Cartan elements, the gauge group and its action, and lifting of
//! MC elements across small extensions with obstruction classes.

pub mod lift;
pub mod uea;
pub mod witness;

use std::sync::Arc;

use num_traits::Zero;

use crate::artin::ArtinCdga;
use crate::complexes::Cohomology;
use crate::dgla::{coefficient_extension, Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::qlinalg::{add_vec, is_zero_vec, qf, scale_vec, sub_vec, Q};

pub use lift::{
    acyclic_lift, lift_across_small_extension, obstruction_via_cone, ExtensionContext, LiftOutcome,
    ObstructionClass,
};
pub use uea::{bch, gauge_act_series, gauge_act_uea, TruncatedUea};
pub use witness::gauge_equivalence_witness;

/// `d omega + 1/2 [omega, omega]`.
pub fn mc_residual(host: &NilpotentDgla, omega: &[Q]) -> Vec<Q> {
    let l = &host.dgla;
    let mut r = l.d_vec(omega);
    crate::qlinalg::axpy(&mut r, &qf(1, 2), &l.bracket(omega, omega));
    r
}

pub fn is_mc(host: &NilpotentDgla, omega: &[Q]) -> bool {
    is_zero_vec(&mc_residual(host, omega))
}

fn check_degree(host: &NilpotentDgla, v: &[Q], n: i32, what: &str) -> Result<()> {
    if v.len() != host.dim() {
        return Err(Error::DimensionMismatch(format!("{what}: vector length")));
    }
    let r = host.range_at(n);
    if v.iter().enumerate().any(|(i, x)| !x.is_zero() && !r.contains(&i)) {
        return Err(Error::Validation(format!("{what}: not concentrated in degree {n}")));
    }
    Ok(())
}

/// A degree-1 element of a coefficient extension.
#[derive(Clone, Debug)]
pub struct McElement {
    pub host: Arc<NilpotentDgla>,
    pub coeffs: Vec<Q>,
}

impl McElement {
    pub fn new(host: Arc<NilpotentDgla>, coeffs: Vec<Q>) -> Result<Self> {
        check_degree(&host, &coeffs, 1, "MC element")?;
        Ok(McElement { host, coeffs })
    }

    pub fn zero(host: Arc<NilpotentDgla>) -> Self {
        let n = host.dim();
        McElement {
            host,
            coeffs: crate::qlinalg::zero_vec(n),
        }
    }

    pub fn residual(&self) -> Vec<Q> {
        mc_residual(&self.host, &self.coeffs)
    }

    pub fn is_mc(&self) -> bool {
        is_mc(&self.host, &self.coeffs)
    }

    /// Fails with `NotMaurerCartan` unless the element is MC.
    pub fn certify(&self) -> Result<()> {
        if self.is_mc() {
            Ok(())
        } else {
            Err(Error::NotMaurerCartan)
        }
    }
}

/// A degree-0 element `x` of a coefficient extension, standing for `exp(x)`.
#[derive(Clone, Debug)]
pub struct GaugeElement {
    pub host: Arc<NilpotentDgla>,
    pub coeffs: Vec<Q>,
}

fn same_host(a: &Arc<NilpotentDgla>, b: &Arc<NilpotentDgla>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::HostMismatch("elements live in different coefficient extensions".into()))
    }
}

impl GaugeElement {
    pub fn new(host: Arc<NilpotentDgla>, coeffs: Vec<Q>) -> Result<Self> {
        check_degree(&host, &coeffs, 0, "gauge element")?;
        Ok(GaugeElement { host, coeffs })
    }

    pub fn identity(host: Arc<NilpotentDgla>) -> Self {
        let n = host.dim();
        GaugeElement {
            host,
            coeffs: crate::qlinalg::zero_vec(n),
        }
    }

    pub fn inverse(&self) -> Self {
        GaugeElement {
            host: self.host.clone(),
            coeffs: scale_vec(&-Q::from_integer(1.into()), &self.coeffs),
        }
    }
}

/// BCH product: `exp(z) = exp(x) exp(y)`.
pub fn gauge_multiply(x: &GaugeElement, y: &GaugeElement) -> Result<GaugeElement> {
    same_host(&x.host, &y.host)?;
    Ok(GaugeElement {
        host: x.host.clone(),
        coeffs: bch(&x.host, &x.coeffs, &y.coeffs)?,
    })
}

/// `exp(x) * omega`; the enveloping-algebra route is cross-checked against
/// the adjoint series, and MC inputs are certified to give MC outputs.
pub fn gauge_act(x: &GaugeElement, omega: &McElement) -> Result<McElement> {
    same_host(&x.host, &omega.host)?;
    let r = gauge_act_uea(&x.host, &x.coeffs, &omega.coeffs)?;
    let s = gauge_act_series(&x.host, &x.coeffs, &omega.coeffs);
    if r != s {
        return Err(Error::Validation("gauge action routes disagree".into()));
    }
    let out = McElement {
        host: omega.host.clone(),
        coeffs: r,
    };
    if omega.is_mc() && !out.is_mc() {
        return Err(Error::Validation("gauge action did not preserve MC".into()));
    }
    Ok(out)
}

fn require_square_zero(a: &ArtinCdga) -> Result<()> {
    if a.mult_table().is_empty() {
        Ok(())
    } else {
        Err(Error::NotSquareZero)
    }
}

/// For square-zero coefficients the MC set is `Z^1(Tot(L (x) V))`; returns a
/// basis of that space (full-length host vectors) and the host.
pub fn mc_solutions_square_zero(l: &Dgla, a: &ArtinCdga) -> Result<(NilpotentDgla, Vec<Vec<Q>>)> {
    require_square_zero(a)?;
    let host = coefficient_extension(l, a)?;
    let z = host.dgla.complex().cocycles(1);
    Ok((host, z))
}

/// `H^1(Tot(L (x) V))` for square-zero coefficients.
pub fn def_classes_square_zero(l: &Dgla, a: &ArtinCdga) -> Result<(NilpotentDgla, Cohomology)> {
    require_square_zero(a)?;
    let host = coefficient_extension(l, a)?;
    let h = host.dgla.complex().cohomology(1);
    Ok((host, h))
}

/// Difference helper used by tests and the harness.
pub fn difference(a: &[Q], b: &[Q]) -> Vec<Q> {
    sub_vec(a, b)
}

pub fn sum(a: &[Q], b: &[Q]) -> Vec<Q> {
    add_vec(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{dual_numbers, truncated_polynomial};
    use crate::dgla::{end_dgla, labh, lobs};
    use crate::qlinalg::q;

    #[test]
    fn residual_examples() {
        let host = coefficient_extension(&lobs(), &truncated_polynomial(3).unwrap()).unwrap();
        let zero = crate::qlinalg::zero_vec(host.dim());
        assert!(is_zero_vec(&mc_residual(&host, &zero)));
        let ut = host.element(&[(vec![q(1), q(0)], 0)]);
        let vt2 = host.element(&[(vec![q(0), q(1)], 1)]);
        assert_eq!(mc_residual(&host, &ut), vt2);
        let ab = coefficient_extension(&labh(1), &truncated_polynomial(3).unwrap()).unwrap();
        let w = ab.element(&[(vec![q(3)], 0), (vec![q(-5)], 1)]);
        assert!(is_mc(&ab, &w));
    }

    #[test]
    fn square_zero_examples() {
        let (_, z) = mc_solutions_square_zero(&lobs(), &dual_numbers(1)).unwrap();
        assert_eq!(z.len(), 1);
        let (_, z) = mc_solutions_square_zero(&Dgla::zero(), &dual_numbers(0)).unwrap();
        assert!(z.is_empty());
        let (_, h) = def_classes_square_zero(&lobs(), &dual_numbers(0)).unwrap();
        assert_eq!(h.dim, 1);
        assert!(matches!(
            mc_solutions_square_zero(&lobs(), &truncated_polynomial(3).unwrap()),
            Err(Error::NotSquareZero)
        ));
    }

    #[test]
    fn gauge_examples() {
        let host = Arc::new(coefficient_extension(&labh(1), &truncated_polynomial(3).unwrap()).unwrap());
        let omega = McElement::new(host.clone(), host.element(&[(vec![q(1)], 0)])).unwrap();
        let x = GaugeElement::identity(host.clone());
        assert_eq!(gauge_act(&x, &omega).unwrap().coeffs, omega.coeffs);

        let v = crate::complexes::CochainComplex::from_chain(
            vec![(0, "a".into()), (1, "b".into())],
            &Default::default(),
        )
        .unwrap();
        let e = end_dgla(&v).unwrap();
        let host = Arc::new(coefficient_extension(&e, &truncated_polynomial(2).unwrap()).unwrap());
        let phi = host.dgla.range_at(1).start;
        let mut w = crate::qlinalg::zero_vec(host.dim());
        w[phi] = q(1);
        let omega = McElement::new(host.clone(), w).unwrap();
        assert!(omega.is_mc());
        let mut xv = crate::qlinalg::zero_vec(host.dim());
        for i in host.range_at(0) {
            xv[i] = q(2);
        }
        let x = GaugeElement::new(host.clone(), xv).unwrap();
        assert_eq!(gauge_act(&x, &omega).unwrap().coeffs, omega.coeffs);
    }
}
