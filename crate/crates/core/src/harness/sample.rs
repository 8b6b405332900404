//! Seeded sampling of MC elements, lifting along surjections and gluing over
//! fiber products.

use std::sync::Arc;

use rand::Rng;

use crate::artin::{classify_surjection, fiber_product, CdgaMap, ExtensionKind, FiberProduct};
use crate::dgla::{coefficient_extension, coefficient_map, Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::mcgauge::{
    gauge_act, is_mc, lift_across_small_extension, ExtensionContext, GaugeElement, LiftOutcome, McElement,
};
use crate::qlinalg::{add_vec, axpy, solve, zero_vec, RatMatrix, Q};

/// Small random rational: numerator in `-3..=3`, denominator 1 or 2.
pub fn random_q<R: Rng>(rng: &mut R) -> Q {
    let n: i64 = rng.gen_range(-3..=3);
    let d: i64 = rng.gen_range(1..=2);
    Q::new(n.into(), d.into())
}

/// Random element of `host` concentrated in degree `deg`.
pub fn random_in_degree<R: Rng>(host: &NilpotentDgla, deg: i32, rng: &mut R) -> Vec<Q> {
    let mut v = zero_vec(host.dim());
    for i in host.range_at(deg) {
        v[i] = random_q(rng);
    }
    v
}

/// Lifts MC elements along a surjection `f: A -> B`, factored into small
/// extensions; each step adds a random element of the torsor of lifts.
#[derive(Clone, Debug)]
pub struct Lifter {
    pub map: CdgaMap,
    pub host_a: Arc<NilpotentDgla>,
    pub host_b: Arc<NilpotentDgla>,
    /// `Tot(L (x) m(A)) -> Tot(L (x) m(B))`
    pub proj: RatMatrix,
    /// small extensions from `A` down to `B`
    steps: Vec<ExtensionContext>,
}

impl Lifter {
    pub fn new(l: &Dgla, f: &CdgaMap) -> Result<Self> {
        let host_a = Arc::new(coefficient_extension(l, &f.source)?);
        let host_b = Arc::new(coefficient_extension(l, &f.target)?);
        let proj = coefficient_map(f, &host_a, &host_b)?;
        let steps = if f.source.dim() == 0 {
            Vec::new()
        } else {
            let class = classify_surjection(f)?;
            match class.kind {
                ExtensionKind::NotSurjective => {
                    return Err(Error::Validation("lifting needs a surjection".into()))
                }
                ExtensionKind::Small | ExtensionKind::AcyclicSmall => vec![ExtensionContext::new(l, f)?],
                ExtensionKind::SurjectiveComposite => class
                    .factorization
                    .expect("composite surjections carry a factorization")
                    .iter()
                    .map(|s| ExtensionContext::new(l, s))
                    .collect::<Result<_>>()?,
            }
        };
        Ok(Lifter {
            map: f.clone(),
            host_a,
            host_b,
            proj,
            steps,
        })
    }

    /// A random MC lift of `omega_b`, or `None` if every attempt met a
    /// nonzero obstruction.
    pub fn lift<R: Rng>(&self, omega_b: &[Q], rng: &mut R, attempts: usize) -> Result<Option<Vec<Q>>> {
        if !is_mc(&self.host_b, omega_b) {
            return Err(Error::NotMaurerCartan);
        }
        'attempt: for attempt in 0..attempts.max(1) {
            let mut omega = omega_b.to_vec();
            for ctx in self.steps.iter().rev() {
                match lift_across_small_extension(ctx, &omega)? {
                    LiftOutcome::Lifted { lift, torsor_basis, .. } => {
                        omega = lift;
                        if attempt > 0 || rng.gen_bool(0.5) {
                            for t in &torsor_basis {
                                axpy(&mut omega, &random_q(rng), t);
                            }
                        }
                    }
                    LiftOutcome::Obstructed(_) => continue 'attempt,
                }
            }
            debug_assert!(is_mc(&self.host_a, &omega));
            return Ok(Some(omega));
        }
        Ok(None)
    }

    /// Random gauge element of `A` mapping to the identity of `B`.
    pub fn random_kernel_gauge<R: Rng>(&self, rng: &mut R) -> Result<Vec<Q>> {
        let x = random_in_degree(&self.host_a, 0, rng);
        let image = self.proj.mul_vec(&x)?;
        let back = solve(&self.proj, &image)?.ok_or_else(|| Error::Validation("projection".into()))?;
        // x - s(p(x)) for a section s is in the kernel
        let s = crate::qlinalg::sub_vec(&x, &back);
        Ok(s)
    }

    /// A degree-0 preimage of a gauge element of `B`.
    pub fn lift_gauge(&self, x_b: &[Q]) -> Result<Vec<Q>> {
        solve(&self.proj, x_b)?.ok_or_else(|| Error::Validation("gauge element does not lift".into()))
    }
}

pub fn act(host: &Arc<NilpotentDgla>, x: &[Q], omega: &[Q]) -> Result<Vec<Q>> {
    let g = GaugeElement::new(host.clone(), x.to_vec())?;
    let w = McElement::new(host.clone(), omega.to_vec())?;
    Ok(gauge_act(&g, &w)?.coeffs)
}

/// Seeded sampler of `MC(L, A)`: lifts `0` along `A -> k` with random torsor
/// choices, then applies a random gauge element.
#[derive(Clone, Debug)]
pub struct McSampler {
    lifter: Lifter,
}

impl McSampler {
    pub fn new(l: &Dgla, a: &crate::artin::ArtinCdga) -> Result<Self> {
        let aug = CdgaMap::augmentation(a);
        Ok(McSampler {
            lifter: Lifter::new(l, &aug)?,
        })
    }

    pub fn host(&self) -> &Arc<NilpotentDgla> {
        &self.lifter.host_a
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<Vec<Q>> {
        let host = self.host();
        let base = self.lifter.lift(&[], rng, 8)?.unwrap_or_else(|| zero_vec(host.dim()));
        let x = random_in_degree(host, 0, rng);
        act(host, &x, &base)
    }
}

/// `Tot(L (x) m(A x_B C))` with its two projections.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub fiber: FiberProduct,
    pub host_p: Arc<NilpotentDgla>,
    pub host_a: Arc<NilpotentDgla>,
    pub host_c: Arc<NilpotentDgla>,
    to_a: RatMatrix,
    to_c: RatMatrix,
    stacked: RatMatrix,
}

impl Gluing {
    pub fn new(l: &Dgla, f: &CdgaMap, g: &CdgaMap) -> Result<Self> {
        let fiber = fiber_product(f, g)?;
        let host_p = Arc::new(coefficient_extension(l, &fiber.algebra)?);
        let host_a = Arc::new(coefficient_extension(l, &f.source)?);
        let host_c = Arc::new(coefficient_extension(l, &g.source)?);
        let to_a = coefficient_map(&fiber.to_left, &host_p, &host_a)?;
        let to_c = coefficient_map(&fiber.to_right, &host_p, &host_c)?;
        let stacked = to_a.vstack(&to_c)?;
        Ok(Gluing {
            fiber,
            host_p,
            host_a,
            host_c,
            to_a,
            to_c,
            stacked,
        })
    }

    pub fn split(&self, v: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
        Ok((self.to_a.mul_vec(v)?, self.to_c.mul_vec(v)?))
    }

    /// The unique element with the given projections, if the pair matches.
    pub fn glue(&self, a: &[Q], c: &[Q]) -> Result<Option<Vec<Q>>> {
        let mut rhs = a.to_vec();
        rhs.extend_from_slice(c);
        solve(&self.stacked, &rhs)
    }

    /// Whether the projections are jointly injective, i.e. gluing is unique.
    pub fn is_injective(&self) -> bool {
        self.stacked.rank() == self.host_p.dim()
    }
}

/// `omega + t` helper used by the batteries.
pub fn shifted(omega: &[Q], t: &[Q]) -> Vec<Q> {
    add_vec(omega, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::truncated_polynomial;
    use crate::dgla::lobs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_mc_and_deterministic() {
        let a = truncated_polynomial(4).unwrap();
        let s = McSampler::new(&lobs(), &a).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let w = s.sample(&mut r1).unwrap();
            assert!(is_mc(s.host(), &w));
            assert_eq!(w, s.sample(&mut r2).unwrap());
        }
    }
}
