//! Deformation functors evaluated through algorithms: tangent cohomology,
//! the groups `DD`, the test zoo and the condition batteries.

pub mod battery;
pub mod sample;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::artin::{dual_numbers, square_zero, ArtinCdga};
use crate::complexes::CochainComplex;
use crate::dgla::{der_dgla, end_dgla, labh, lobs, Dgla, Flavor, GradedAlgebra};
use crate::error::{Error, Result};
use crate::mcgauge::{def_classes_square_zero, mc_solutions_square_zero};
use crate::qlinalg::q;
use crate::simplicial::nerve_pi_square_zero;

pub use battery::{
    manetti_battery, schlessinger_homotopy_battery, standard_battery, AxiomCheck, Battery, BatteryReport,
    Verdict,
};
pub use sample::{Gluing, Lifter, McSampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FunctorKind {
    /// `MC(L, -)`
    Mc,
    /// `Def(L, -)`
    Def,
    /// `Def(L, -)` with the gauge quotient switched off on the first acyclic
    /// diagram of the battery
    DefBrokenGauge,
    /// the constant one-point functor
    Constant,
}

#[derive(Clone, Debug)]
pub struct FunctorUnderTest {
    pub kind: FunctorKind,
    pub l: Dgla,
}

impl FunctorUnderTest {
    pub fn mc(l: Dgla) -> Self {
        FunctorUnderTest { kind: FunctorKind::Mc, l }
    }

    pub fn def(l: Dgla) -> Self {
        FunctorUnderTest { kind: FunctorKind::Def, l }
    }

    pub fn def_broken_gauge(l: Dgla) -> Self {
        FunctorUnderTest {
            kind: FunctorKind::DefBrokenGauge,
            l,
        }
    }

    pub fn constant() -> Self {
        FunctorUnderTest {
            kind: FunctorKind::Constant,
            l: Dgla::zero(),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            FunctorKind::Mc => format!("MC({},-)", self.l.name()),
            FunctorKind::Def => format!("Def({},-)", self.l.name()),
            FunctorKind::DefBrokenGauge => format!("Def*({},-)", self.l.name()),
            FunctorKind::Constant => "const".into(),
        }
    }

    /// Dimension of `F(A)` as a linear space, for square-zero `A`.
    pub fn evaluate_square_zero(&self, a: &ArtinCdga) -> Result<usize> {
        match self.kind {
            FunctorKind::Mc => Ok(mc_solutions_square_zero(&self.l, a)?.1.len()),
            FunctorKind::Def | FunctorKind::DefBrokenGauge => Ok(def_classes_square_zero(&self.l, a)?.1.dim),
            FunctorKind::Constant => {
                if a.mult_table().is_empty() {
                    Ok(0)
                } else {
                    Err(Error::NotSquareZero)
                }
            }
        }
    }

    /// Number of points of `F(k)`.
    pub fn points_over_base(&self) -> Result<usize> {
        // a zero-dimensional space has exactly one point
        let _ = self.evaluate_square_zero(&ArtinCdga::base_field())?;
        Ok(1)
    }
}

/// `dim H^n(F) = dim F(k[eps_n])`.
pub fn tangent_of_functor(f: &FunctorUnderTest, n: i32) -> Result<usize> {
    f.evaluate_square_zero(&dual_numbers(n))
}

/// `dim DD^{n-i}(F, V) = dim pi_i F(k + V[n])`, computed on the MC nerve of
/// `L`; the splitting over `H_* V` is asserted.
pub fn dd_groups(f: &FunctorUnderTest, v: &CochainComplex, n: i32, i: usize) -> Result<usize> {
    if f.kind == FunctorKind::Constant {
        return Ok(0);
    }
    // V[n] in chain degrees is `shift(n)` in the cochain convention
    let a = square_zero(&v.shift(n));
    let direct = nerve_pi_square_zero(&f.l, &a, i)?;
    let mut split = 0usize;
    for (cdeg, h) in v.cohomology_dims() {
        let j = -cdeg;
        split += f.l.cohomology(n - i as i32 + j + 1).dim * h;
    }
    if direct != split {
        return Err(Error::Validation(format!(
            "splitting identity fails: {direct} != {split}"
        )));
    }
    Ok(direct)
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub functor: String,
    /// `n -> dim H^n(F)`
    pub tangent: BTreeMap<i32, usize>,
}

pub fn tangent_report(f: &FunctorUnderTest, range: std::ops::RangeInclusive<i32>) -> Result<TangentReport> {
    let mut tangent = BTreeMap::new();
    for n in range {
        tangent.insert(n, tangent_of_functor(f, n)?);
    }
    Ok(TangentReport {
        functor: f.name(),
        tangent,
    })
}

fn chain_complex(elems: &[(i32, &str)], d: &[(&str, &str)]) -> CochainComplex {
    let map = d
        .iter()
        .map(|(s, t)| ((s.to_string(), t.to_string()), q(1)))
        .collect();
    CochainComplex::from_chain(elems.iter().map(|(i, l)| (*i, l.to_string())).collect(), &map)
        .expect("zoo complex")
}

/// Exterior algebra on one generator `y` of chain degree 1.
pub fn exterior_algebra() -> GradedAlgebra {
    GradedAlgebra {
        flavor: Flavor::Commutative,
        basis: vec![("1".into(), 0), ("y".into(), 1)],
        mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
        d: vec![],
    }
}

/// The fixed test zoo: zero, `Labh_n` for `n = 0, 1, 2`, `Lobs`, `End(V)` for
/// complexes of total dimension 2, 3, 4, and the derivations of the exterior
/// algebra.
pub fn zoo() -> Vec<Dgla> {
    let v2 = chain_complex(&[(0, "a"), (1, "b")], &[]);
    let v3 = chain_complex(&[(0, "a"), (1, "b"), (1, "c")], &[("b", "a")]);
    let v4 = chain_complex(&[(0, "a"), (1, "b"), (2, "c"), (0, "e")], &[("c", "b")]);
    vec![
        Dgla::zero(),
        labh(0),
        labh(1),
        labh(2),
        lobs(),
        end_dgla(&v2).expect("End(V2)").with_name("End(V2)"),
        end_dgla(&v3).expect("End(V3)").with_name("End(V3)"),
        end_dgla(&v4).expect("End(V4)").with_name("End(V4)"),
        der_dgla(&exterior_algebra()).expect("Der").with_name("Der(k[y])"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_examples() {
        let f = FunctorUnderTest::def(lobs());
        assert_eq!(tangent_of_functor(&f, 0).unwrap(), 1);
        let m = FunctorUnderTest::mc(crate::dgla::Dgla::new(
            "L",
            vec![("x".into(), 0), ("y".into(), 1)],
            &[(0, 1, q(1))],
            &[],
        )
        .unwrap());
        // Z^1 = <y>, H^1 = 0
        assert_eq!(tangent_of_functor(&m, 0).unwrap(), 1);
        assert_eq!(tangent_of_functor(&FunctorUnderTest::def(m.l.clone()), 0).unwrap(), 0);
        assert_eq!(FunctorUnderTest::constant().points_over_base().unwrap(), 1);
    }

    #[test]
    fn dd_examples() {
        let f = FunctorUnderTest::def(lobs());
        let k0 = chain_complex(&[(0, "e")], &[]);
        for n in 0..3 {
            assert_eq!(dd_groups(&f, &k0, n, 0).unwrap(), tangent_of_functor(&f, n).unwrap());
        }
        let kk = chain_complex(&[(0, "e"), (0, "f")], &[]);
        assert_eq!(dd_groups(&f, &kk, 0, 0).unwrap(), 2);
        let acyc = chain_complex(&[(0, "e"), (1, "f")], &[("f", "e")]);
        for n in 0..3 {
            for i in 0..3 {
                assert_eq!(dd_groups(&f, &acyc, n, i).unwrap(), 0);
            }
        }
    }

    #[test]
    fn zoo_is_valid() {
        for l in zoo() {
            l.validate().unwrap();
        }
        assert_eq!(zoo().len(), 9);
    }
}
