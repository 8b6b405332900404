//! Lifting MC elements across small extensions `e: A -> B` with kernel `I`.
//!
//! The obstruction of `omega_B` is the class of
//! `kappa = d w + 1/2 [w, w]` in `H^2(Tot(L (x) I))`, for any linear lift
//! `w`; it is computed directly and, independently, through the cone
//! `B~ = A + sI`: lift along the acyclic extension `B~ -> B`, push to
//! `k + I[1]`, and identify `Tot(L (x) I[1])^1` with `Tot(L (x) I)^2` via
//! `l (x) s y -> -(-1)^{|l|} l (x) y`.

use num_traits::Zero;

use crate::artin::{classify_surjection, cone_extension, square_zero, CdgaMap, ExtensionKind};
use crate::complexes::CochainComplex;
use crate::dgla::{coefficient_extension, coefficient_map, Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::qlinalg::{
    axpy, class_coordinates, is_zero_vec, sign, solve, sub_vec, zero_vec, RatMatrix, Q,
};

use super::{is_mc, mc_residual};

/// Everything attached to a small extension and a DGLA `L`.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    pub e: CdgaMap,
    pub kind: ExtensionKind,
    pub kernel_basis: Vec<Vec<Q>>,
    /// `I` as a complex; basis element labelled `i{k}` is `kernel_basis[k]`
    pub kernel: CochainComplex,
    pub host_a: NilpotentDgla,
    pub host_b: NilpotentDgla,
    /// `Tot(L (x) I)`, built on the square-zero algebra `k + I`
    pub host_i: NilpotentDgla,
    /// `Tot(L (x) m(A)) -> Tot(L (x) m(B))`
    pub proj: RatMatrix,
    /// `Tot(L (x) I) -> Tot(L (x) m(A))`
    pub iota: RatMatrix,
}

impl ExtensionContext {
    pub fn new(l: &Dgla, e: &CdgaMap) -> Result<Self> {
        let class = classify_surjection(e)?;
        if !matches!(class.kind, ExtensionKind::Small | ExtensionKind::AcyclicSmall) {
            return Err(Error::NotSmall(format!("{:?}", class.kind)));
        }
        let host_a = coefficient_extension(l, &e.source)?;
        let host_b = coefficient_extension(l, &e.target)?;
        let ia = square_zero(&class.kernel).with_name("I");
        let host_i = coefficient_extension(l, &ia)?;
        let proj = coefficient_map(e, &host_a, &host_b)?;
        let mut iota = RatMatrix::zeros(host_a.dim(), host_i.dim());
        for (c, &(li, ki)) in host_i.pairs.iter().enumerate() {
            let k: usize = ia.label(ki)[1..].parse().expect("kernel label");
            for (aj, x) in class.kernel_basis[k].iter().enumerate() {
                if !x.is_zero() {
                    let r = host_a.index_of_pair(li, aj).expect("pair");
                    iota.set(r, c, x.clone());
                }
            }
        }
        Ok(ExtensionContext {
            e: e.clone(),
            kind: class.kind,
            kernel_basis: class.kernel_basis,
            kernel: class.kernel,
            host_a,
            host_b,
            host_i,
            proj,
            iota,
        })
    }

    /// Canonical linear lift of a degree-1 element of `Tot(L (x) m(B))`.
    pub fn linear_lift(&self, omega_b: &[Q]) -> Result<Vec<Q>> {
        solve(&self.proj, omega_b)?.ok_or_else(|| Error::Validation("extension is not surjective".into()))
    }

    /// Coordinates in `Tot(L (x) I)` of an element of `Tot(L (x) m(A))`
    /// known to lie in the image of `iota`.
    pub fn to_kernel(&self, v: &[Q]) -> Result<Vec<Q>> {
        solve(&self.iota, v)?.ok_or_else(|| Error::Validation("element does not lie in L (x) I".into()))
    }

    pub fn from_kernel(&self, v: &[Q]) -> Vec<Q> {
        self.iota.mul_vec(v).expect("kernel vector")
    }

    /// `kappa(w)` as an element of `Tot(L (x) I)^2`.
    pub fn kappa(&self, w: &[Q]) -> Result<Vec<Q>> {
        self.to_kernel(&mc_residual(&self.host_a, w))
    }
}

/// Class in `H^2(Tot(L (x) I))` with its Kunneth decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionClass {
    /// cocycle in `Tot(L (x) I)^2`
    pub representative: Vec<Q>,
    /// coordinates in the basis of `H^2(Tot(L (x) I))` given by products of
    /// representatives, ordered as in `components`
    pub coordinates: Vec<Q>,
    /// `(m, i, j, c)`: coefficient `c` of `[h_i] (x) [y_j]` with `h_i` the
    /// i-th representative of `H^{m+2}(L)` and `y_j` of `H_m(I)`
    pub components: Vec<(i32, usize, usize, Q)>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|c| c.is_zero())
    }

    /// Human-readable sum of `[h] (x) [y]` terms with labels of the leading
    /// basis element of each representative.
    pub fn describe(&self, ctx: &ExtensionContext) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let l = &ctx.host_i.l;
        let a = &ctx.e.source;
        let mut terms = Vec::new();
        for (m, i, j, c) in &self.components {
            if c.is_zero() {
                continue;
            }
            let h = &l.cohomology(m + 2).representatives[*i];
            let y = &ctx.kernel.cohomology(-m).representatives[*j];
            let hl = leading_label(h, |k| l.label(k).to_string());
            let yv = kernel_vector_in_a(ctx, y);
            let yl = leading_label(&yv, |k| a.label(k).to_string());
            terms.push((c.clone(), format!("[{}](x)[{}]", hl, yl)));
        }
        crate::qlinalg::fmt_linear(&terms)
    }
}

fn leading_label(v: &[Q], label: impl Fn(usize) -> String) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| {
            if x == &Q::from_integer(1.into()) {
                label(k)
            } else {
                format!("{}*{}", crate::qlinalg::fmt_q(x), label(k))
            }
        })
        .collect();
    parts.join("+")
}

fn kernel_vector_in_a(ctx: &ExtensionContext, y: &[Q]) -> Vec<Q> {
    let mut out = zero_vec(ctx.e.source.dim());
    for (i, c) in y.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k: usize = ctx.kernel.space().label(i)[1..].parse().expect("kernel label");
        axpy(&mut out, c, &ctx.kernel_basis[k]);
    }
    out
}

/// Decomposes a 2-cocycle of `Tot(L (x) I)` over
/// `sum_m H^{m+2}(L) (x) H_m(I)`.
pub fn classify_obstruction(ctx: &ExtensionContext, kappa: &[Q]) -> Result<ObstructionClass> {
    let tot = ctx.host_i.dgla.complex();
    if !is_zero_vec(&tot.apply_d(kappa)) {
        return Err(Error::Validation("obstruction cocycle is not closed".into()));
    }
    let l = &ctx.host_i.l;
    let mut products = Vec::new();
    let mut labels = Vec::new();
    let mut ms: Vec<i32> = ctx.kernel.space().degrees().into_iter().map(|d| -d).collect();
    ms.sort();
    for m in ms {
        let hl = l.cohomology(m + 2);
        let hi = ctx.kernel.cohomology(-m);
        for (i, h) in hl.representatives.iter().enumerate() {
            for (j, y) in hi.representatives.iter().enumerate() {
                let mut v = zero_vec(ctx.host_i.dim());
                for (li, x) in h.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (ki, z) in y.iter().enumerate() {
                        if !z.is_zero() {
                            v[ctx.host_i.index_of_pair(li, ki).expect("pair")] += x * z;
                        }
                    }
                }
                products.push(v);
                labels.push((m, i, j));
            }
        }
    }
    let expected = tot.cohomology(2).dim;
    if products.len() != expected {
        return Err(Error::Validation(format!(
            "Kunneth count mismatch: {} products for H^2 of dimension {}",
            products.len(),
            expected
        )));
    }
    let d_in = tot.d_block(1);
    let reps: Vec<Vec<Q>> = products.iter().map(|p| tot.space().restrict(2, p)).collect();
    let coords = class_coordinates(&d_in, &reps, &tot.space().restrict(2, kappa))?
        .ok_or_else(|| Error::Validation("cocycle outside the Kunneth span".into()))?;
    let components = labels
        .into_iter()
        .zip(coords.iter())
        .map(|((m, i, j), c)| (m, i, j, c.clone()))
        .collect();
    Ok(ObstructionClass {
        representative: kappa.to_vec(),
        coordinates: coords,
        components,
    })
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Obstructed(ObstructionClass),
    Lifted {
        lift: Vec<Q>,
        /// basis of `Z^1(Tot(L (x) I))`, mapped into `Tot(L (x) m(A))`
        torsor_basis: Vec<Vec<Q>>,
        class: ObstructionClass,
    },
}

/// Lifts a certified MC element over `B` to one over `A`, or returns the
/// nonzero obstruction class.
pub fn lift_across_small_extension(ctx: &ExtensionContext, omega_b: &[Q]) -> Result<LiftOutcome> {
    if !is_mc(&ctx.host_b, omega_b) {
        return Err(Error::NotMaurerCartan);
    }
    let w = ctx.linear_lift(omega_b)?;
    let kappa = ctx.kappa(&w)?;
    let class = classify_obstruction(ctx, &kappa)?;
    // kappa(w + x) = kappa(w) + dx for x in Tot(L (x) I)^1
    let r1 = ctx.host_i.range_at(1);
    for i in r1.clone().take(16) {
        let x = ctx.host_i.dgla.unit_vec(i);
        let shifted = crate::qlinalg::add_vec(&w, &ctx.from_kernel(&x));
        let lhs = ctx.kappa(&shifted)?;
        let rhs = crate::qlinalg::add_vec(&kappa, &ctx.host_i.dgla.d_vec(&x));
        if lhs != rhs {
            return Err(Error::Validation("kappa(w + x) != kappa(w) + dx".into()));
        }
    }
    if !class.is_zero() {
        return Ok(LiftOutcome::Obstructed(class));
    }
    let x = ctx
        .host_i
        .dgla
        .complex()
        .primitive(&kappa)
        .ok_or_else(|| Error::Validation("zero class without primitive".into()))?;
    let lift = sub_vec(&w, &ctx.from_kernel(&x));
    if !is_mc(&ctx.host_a, &lift) {
        return Err(Error::Validation("lift is not MC".into()));
    }
    if ctx.proj.mul_vec(&lift)? != omega_b {
        return Err(Error::Validation("lift does not map to the input".into()));
    }
    let torsor_basis = ctx
        .host_i
        .dgla
        .complex()
        .cocycles(1)
        .iter()
        .map(|z| ctx.from_kernel(z))
        .collect();
    Ok(LiftOutcome::Lifted {
        lift,
        torsor_basis,
        class,
    })
}

/// Lift along an acyclic small extension: `w - h(kappa(w))` with `h` a
/// contracting homotopy of `Tot(L (x) I)`.
pub fn acyclic_lift(ctx: &ExtensionContext, omega_b: &[Q]) -> Result<Vec<Q>> {
    if ctx.kind != ExtensionKind::AcyclicSmall {
        return Err(Error::NotAcyclic("kernel has nonzero homology".into()));
    }
    if !is_mc(&ctx.host_b, omega_b) {
        return Err(Error::NotMaurerCartan);
    }
    let w = ctx.linear_lift(omega_b)?;
    let kappa = ctx.kappa(&w)?;
    let h = ctx.host_i.dgla.complex().contracting_homotopy()?;
    let lift = sub_vec(&w, &ctx.from_kernel(&h.mul_vec(&kappa)?));
    if !is_mc(&ctx.host_a, &lift) {
        return Err(Error::Validation("acyclic lift is not MC".into()));
    }
    Ok(lift)
}

/// Obstruction class computed through the cone of `e`.
pub fn obstruction_via_cone(ctx: &ExtensionContext, omega_b: &[Q]) -> Result<ObstructionClass> {
    if !is_mc(&ctx.host_b, omega_b) {
        return Err(Error::NotMaurerCartan);
    }
    let l = &ctx.host_i.l;
    let cone = cone_extension(&ctx.e)?;
    let phi_ctx = ExtensionContext::new(l, &cone.phi)?;
    let lifted = acyclic_lift(&phi_ctx, omega_b)?;
    let host_s = coefficient_extension(l, &cone.rho.target)?;
    let pushed = coefficient_map(&cone.rho, &phi_ctx.host_a, &host_s)?.mul_vec(&lifted)?;
    if !is_zero_vec(&host_s.dgla.d_vec(&pushed)) {
        return Err(Error::Validation("pushed element is not a cocycle".into()));
    }
    // l (x) s(y_k) -> -(-1)^{|l|} l (x) y_k
    let mut back = zero_vec(ctx.host_i.dim());
    for (i, x) in pushed.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (li, si) = host_s.pairs[i];
        let slabel = cone.rho.target.label(si);
        let k = cone_index(&cone, slabel)?;
        let ki = ctx
            .kernel
            .space()
            .index_of(&format!("i{k}"))
            .ok_or_else(|| Error::Validation("kernel label".into()))?;
        let j = ctx.host_i.index_of_pair(li, ki).expect("pair");
        back[j] += -sign(l.degree(li) as i64) * x;
    }
    classify_obstruction(ctx, &back)
}

/// Position in the kernel basis of the `sI` generator with this label.
fn cone_index(cone: &crate::artin::ConeExtension, label: &str) -> Result<usize> {
    cone.generator_labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Validation(format!("unknown cone generator {label}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::truncated_polynomial;
    use crate::dgla::{labh, lobs};
    use crate::qlinalg::q;

    fn projection(r: usize, s: usize) -> CdgaMap {
        let a = truncated_polynomial(r).unwrap();
        let b = truncated_polynomial(s).unwrap();
        let mut m = RatMatrix::zeros(s - 1, r - 1);
        for i in 0..s - 1 {
            m.set(i, i, q(1));
        }
        CdgaMap::new(a, b, m).unwrap()
    }

    #[test]
    fn lobs_is_obstructed_by_both_routes() {
        let ctx = ExtensionContext::new(&lobs(), &projection(3, 2)).unwrap();
        let omega = ctx.host_b.element(&[(vec![q(1), q(0)], 0)]);
        let out = lift_across_small_extension(&ctx, &omega).unwrap();
        let class = match out {
            LiftOutcome::Obstructed(c) => c,
            _ => panic!("expected obstruction"),
        };
        assert_eq!(class.describe(&ctx), "[v](x)[t^2]");
        let cone = obstruction_via_cone(&ctx, &omega).unwrap();
        assert_eq!(cone.coordinates, class.coordinates);
    }

    #[test]
    fn labh_lifts() {
        let ctx = ExtensionContext::new(&labh(1), &projection(3, 2)).unwrap();
        let omega = ctx.host_b.element(&[(vec![q(1)], 0)]);
        match lift_across_small_extension(&ctx, &omega).unwrap() {
            LiftOutcome::Lifted { lift, torsor_basis, .. } => {
                assert_eq!(lift, ctx.host_a.element(&[(vec![q(1)], 0)]));
                assert_eq!(torsor_basis.len(), 1);
            }
            _ => panic!("expected lift"),
        }
        assert!(obstruction_via_cone(&ctx, &omega).unwrap().is_zero());
    }

    #[test]
    fn identity_extension_lifts_uniquely() {
        let a = truncated_polynomial(3).unwrap();
        let ctx = ExtensionContext::new(&lobs(), &CdgaMap::identity(&a)).unwrap();
        let omega = ctx.host_b.element(&[(vec![q(3), q(0)], 1)]);
        match lift_across_small_extension(&ctx, &omega).unwrap() {
            LiftOutcome::Lifted { lift, torsor_basis, .. } => {
                assert_eq!(lift, omega);
                assert!(torsor_basis.is_empty());
            }
            _ => panic!("expected lift"),
        }
    }

    #[test]
    fn cone_lift_exists_for_lobs() {
        let e = projection(3, 2);
        let cone = cone_extension(&e).unwrap();
        let ctx = ExtensionContext::new(&lobs(), &cone.phi).unwrap();
        let omega = ctx.host_b.element(&[(vec![q(1), q(0)], 0)]);
        let lift = acyclic_lift(&ctx, &omega).unwrap();
        assert!(is_mc(&ctx.host_a, &lift));
    }
}
