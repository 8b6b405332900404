//! The shipped diagram battery, the Manetti axiom battery and the derived
//! Schlessinger battery on square-zero models.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use serde::Serialize;

use crate::artin::{cone_extension, dual_numbers, quotient, truncated_polynomial, ArtinCdga, CdgaMap};
use crate::complexes::{ChainMap, CochainComplex, GradedSpace};
use crate::dgla::{coefficient_extension, coefficient_map, Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::mcgauge::{
    acyclic_lift, gauge_equivalence_witness, is_mc, lift_across_small_extension, obstruction_via_cone,
    ExtensionContext, LiftOutcome,
};
use crate::qlinalg::{is_zero_vec, q, RatMatrix, Q};

use super::sample::{act, random_in_degree, random_q, Gluing, Lifter, McSampler};
use super::{FunctorKind, FunctorUnderTest};

#[derive(Clone, Debug)]
pub enum Diagram {
    /// `f: A -> B` surjective and `g: C -> B`
    Cospan { name: String, f: CdgaMap, g: CdgaMap },
    /// `A x_k B`
    Product { name: String, a: ArtinCdga, b: ArtinCdga },
    /// acyclic small extension
    Acyclic { name: String, e: CdgaMap },
    /// small extension, for the obstruction sequence
    Small { name: String, e: CdgaMap },
}

impl Diagram {
    pub fn name(&self) -> &str {
        match self {
            Diagram::Cospan { name, .. }
            | Diagram::Product { name, .. }
            | Diagram::Acyclic { name, .. }
            | Diagram::Small { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Battery {
    pub diagrams: Vec<Diagram>,
    pub seed: u64,
    /// sampled elements per check
    pub samples: usize,
}

impl Battery {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn cospans(&self) -> impl Iterator<Item = (&str, &CdgaMap, &CdgaMap)> {
        self.diagrams.iter().filter_map(|d| match d {
            Diagram::Cospan { name, f, g } => Some((name.as_str(), f, g)),
            _ => None,
        })
    }

    pub fn small_extensions(&self) -> impl Iterator<Item = (&str, &CdgaMap)> {
        self.diagrams.iter().filter_map(|d| match d {
            Diagram::Small { name, e } => Some((name.as_str(), e)),
            _ => None,
        })
    }

    fn rng(&self, item: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add((item as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }
}

fn map(source: &ArtinCdga, target: &ArtinCdga, rows: &[&[i64]]) -> Result<CdgaMap> {
    let m = if rows.is_empty() {
        RatMatrix::zeros(target.dim(), source.dim())
    } else {
        RatMatrix::from_i64(rows)
    };
    CdgaMap::new(source.clone(), target.clone(), m)
}

/// `{k, k[eps0], k[eps1], k[t]/t^3, k[t]/t^4}`, cone extensions of their
/// small extensions, and fiber products of dual numbers.
pub fn standard_battery() -> Result<Battery> {
    let eps0 = dual_numbers(0);
    let eps1 = dual_numbers(1);
    let t3 = truncated_polynomial(3)?;
    let t4 = truncated_polynomial(4)?;
    let e3 = quotient(&t3, &[vec![q(0), q(1)]], "k[t]/t^2")?;
    let e4 = quotient(&t4, &[vec![q(0), q(0), q(1)]], "k[t]/t^3")?;
    let t2 = e3.target.clone();
    let eps0_to_t2 = map(&eps0, &t2, &[&[1]])?;
    let aug0 = CdgaMap::augmentation(&eps0);
    let aug1 = CdgaMap::augmentation(&eps1);
    // k + <a (0), b (1)> -> k + <a>, and k[eps0] -> k + <a>
    let sq = ArtinCdga::new("k+<a,b>", vec![("a".into(), 0), ("b".into(), 1)], &[], &[])?;
    let b = sq.unit_vec(sq.index_of("b").expect("b"));
    let sq_to_a = quotient(&sq, &[b], "k+<a>")?;
    let eps0_to_a = map(&eps0, &sq_to_a.target, &[&[1]])?;
    let cone3 = cone_extension(&e3)?;
    let cone4 = cone_extension(&e4)?;
    let cone0 = cone_extension(&aug0)?;
    let cone1 = cone_extension(&aug1)?;
    let diagrams = vec![
        Diagram::Cospan {
            name: "k[t]/t^3 -> k[t]/t^2 <- k[eps0]".into(),
            f: e3.clone(),
            g: eps0_to_t2,
        },
        Diagram::Cospan {
            name: "k[t]/t^4 -> k[t]/t^3 <- k[t]/t^3".into(),
            f: e4.clone(),
            g: CdgaMap::identity(&e4.target),
        },
        Diagram::Cospan {
            name: "k[t]/t^3 -> k[t]/t^2 <- k[t]/t^3".into(),
            f: e3.clone(),
            g: e3.clone(),
        },
        Diagram::Cospan {
            name: "cone(k[t]/t^3 -> k[t]/t^2) -> k[t]/t^2 <- k[t]/t^3".into(),
            f: cone3.phi.clone(),
            g: e3.clone(),
        },
        Diagram::Cospan {
            name: "k[eps0] -> k <- k[eps1]".into(),
            f: aug0.clone(),
            g: aug1.clone(),
        },
        Diagram::Cospan {
            name: "k+<a,b> -> k+<a> <- k[eps0]".into(),
            f: sq_to_a.clone(),
            g: eps0_to_a,
        },
        Diagram::Product {
            name: "k[eps0] x k[eps1]".into(),
            a: eps0.clone(),
            b: eps1.clone(),
        },
        Diagram::Product {
            name: "k[eps0] x k[t]/t^3".into(),
            a: eps0.clone(),
            b: t3.clone(),
        },
        Diagram::Product {
            name: "k[t]/t^2 x k[eps1]".into(),
            a: t2,
            b: eps1,
        },
        Diagram::Acyclic {
            name: "cone(k[eps0] -> k) -> k".into(),
            e: cone0.phi,
        },
        Diagram::Acyclic {
            name: "cone(k[eps1] -> k) -> k".into(),
            e: cone1.phi,
        },
        Diagram::Acyclic {
            name: "cone(k[t]/t^3 -> k[t]/t^2) -> k[t]/t^2".into(),
            e: cone3.phi,
        },
        Diagram::Acyclic {
            name: "cone(k[t]/t^4 -> k[t]/t^3) -> k[t]/t^3".into(),
            e: cone4.phi,
        },
        Diagram::Small {
            name: "k[t]/t^3 -> k[t]/t^2".into(),
            e: e3,
        },
        Diagram::Small {
            name: "k[t]/t^4 -> k[t]/t^3".into(),
            e: e4,
        },
        Diagram::Small {
            name: "k[eps0] -> k".into(),
            e: aug0,
        },
        Diagram::Small {
            name: "k+<a,b> -> k+<a>".into(),
            e: sq_to_a,
        },
    ];
    Ok(Battery {
        diagrams,
        seed: 20_240_601,
        samples: 4,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub diagram: String,
    pub axiom: String,
    pub passed: bool,
    /// number of witnesses produced
    pub witnesses: usize,
    /// samples with no element to test (for example obstructed lifts)
    pub skipped: usize,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Deformation,
    PreDeformation,
    NotPreDeformation,
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub battery: String,
    pub functor: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<AxiomCheck>,
    pub verdict: Verdict,
}

impl BatteryReport {
    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for BatteryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "battery {} functor {} seed {} samples {}",
            self.battery, self.functor, self.seed, self.samples
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "[{}] axiom {} on {}: {} witnesses, {} skipped{}",
                if c.passed { "ok" } else { "FAIL" },
                c.axiom,
                c.diagram,
                c.witnesses,
                c.skipped,
                if c.detail.is_empty() { String::new() } else { format!("; {}", c.detail) }
            )?;
        }
        write!(f, "verdict: {:?}", self.verdict)
    }
}

struct Tally {
    check: AxiomCheck,
}

impl Tally {
    fn new(diagram: &str, axiom: &str) -> Self {
        Tally {
            check: AxiomCheck {
                diagram: diagram.into(),
                axiom: axiom.into(),
                passed: true,
                witnesses: 0,
                skipped: 0,
                detail: String::new(),
            },
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        if self.check.passed {
            self.check.detail = msg.into();
        }
        self.check.passed = false;
    }

    fn note(mut self, msg: impl Into<String>) -> Self {
        if self.check.passed {
            self.check.detail = msg.into();
        }
        self
    }
}

fn is_def_like(kind: FunctorKind) -> bool {
    matches!(kind, FunctorKind::Def | FunctorKind::DefBrokenGauge)
}

/// Checks Manetti's axioms (1)-(4) on the battery, with witnesses.
pub fn manetti_battery(f: &FunctorUnderTest, battery: &Battery) -> Result<BatteryReport> {
    let mut checks = Vec::new();
    let mut item = 0usize;
    let mut broken_used = false;
    {
        let mut t = Tally::new("k", "3");
        if f.points_over_base()? != 1 || coefficient_extension(&f.l, &ArtinCdga::base_field())?.dim() != 0 {
            t.fail("F(k) is not a point");
        }
        checks.push(t.check);
    }
    for d in &battery.diagrams {
        item += 1;
        let mut rng = battery.rng(item);
        match d {
            Diagram::Cospan { name, f: fm, g } => {
                checks.push(axiom_one(f, name, fm, g, battery.samples, &mut rng)?);
            }
            Diagram::Product { name, a, b } => {
                checks.push(axiom_two(f, name, a, b, battery.samples, &mut rng)?);
            }
            Diagram::Acyclic { name, e } => {
                let broken = f.kind == FunctorKind::DefBrokenGauge && !broken_used;
                broken_used |= broken;
                checks.extend(axiom_four(f, name, e, broken, battery.samples, &mut rng)?);
            }
            Diagram::Small { .. } => {}
        }
    }
    let verdict = if checks.iter().all(|c| c.passed) {
        Verdict::Deformation
    } else if checks.iter().all(|c| c.passed || c.axiom == "4-inj") {
        Verdict::PreDeformation
    } else {
        Verdict::NotPreDeformation
    };
    Ok(BatteryReport {
        battery: "manetti".into(),
        functor: f.name(),
        seed: battery.seed,
        samples: battery.samples,
        checks,
        verdict,
    })
}

/// Axiom (1): for matching pairs a preimage in `F(A x_B C)` is produced.
fn axiom_one(
    f: &FunctorUnderTest,
    name: &str,
    fm: &CdgaMap,
    g: &CdgaMap,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AxiomCheck> {
    let mut t = Tally::new(name, "1");
    if f.kind == FunctorKind::Constant {
        return Ok(t.note("one-point functor").check);
    }
    let l = &f.l;
    let lifter = Lifter::new(l, fm)?;
    let sampler_c = McSampler::new(l, &g.source)?;
    let gl = Gluing::new(l, fm, g)?;
    let g_map = coefficient_map(g, sampler_c.host(), &lifter.host_b)?;
    let host_b = &lifter.host_b;
    let host_a = &lifter.host_a;
    for _ in 0..samples {
        let omega_c = sampler_c.sample(rng)?;
        let omega_b = g_map.mul_vec(&omega_c)?;
        let Some(mut omega_a) = lifter.lift(&omega_b, rng, 8)? else {
            t.check.skipped += 1;
            continue;
        };
        omega_a = act(host_a, &lifter.random_kernel_gauge(rng)?, &omega_a)?;
        if is_def_like(f.kind) {
            // move the A-side within its class so that images only agree up to gauge
            let y_b = random_in_degree(host_b, 0, rng);
            omega_a = act(host_a, &lifter.lift_gauge(&y_b)?, &omega_a)?;
            let image = lifter.proj.mul_vec(&omega_a)?;
            let Some(w) = gauge_equivalence_witness(host_b, &image, &omega_b, host_b.nilpotency_bound())? else {
                t.fail("no gauge witness between the images in F(B)");
                continue;
            };
            omega_a = act(host_a, &lifter.lift_gauge(&w)?, &omega_a)?;
        }
        match gl.glue(&omega_a, &omega_c)? {
            Some(p) if is_mc(&gl.host_p, &p) && gl.split(&p)? == (omega_a.clone(), omega_c.clone()) => {
                t.check.witnesses += 1;
            }
            _ => t.fail("matching pair without a preimage"),
        }
    }
    Ok(t.check)
}

/// Axiom (2): `F(A x_k B) -> F(A) x F(B)` is bijective.
fn axiom_two(
    f: &FunctorUnderTest,
    name: &str,
    a: &ArtinCdga,
    b: &ArtinCdga,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AxiomCheck> {
    let mut t = Tally::new(name, "2");
    if f.kind == FunctorKind::Constant {
        return Ok(t.note("one-point functor").check);
    }
    let l = &f.l;
    let gl = Gluing::new(l, &CdgaMap::augmentation(a), &CdgaMap::augmentation(b))?;
    if !gl.is_injective() {
        t.fail("projections are not jointly injective");
    }
    let sa = McSampler::new(l, a)?;
    let sb = McSampler::new(l, b)?;
    let sp = McSampler::new(l, &gl.fiber.algebra)?;
    for _ in 0..samples {
        // surjective: every pair glues
        let (wa, wb) = (sa.sample(rng)?, sb.sample(rng)?);
        match gl.glue(&wa, &wb)? {
            Some(p) if is_mc(&gl.host_p, &p) => t.check.witnesses += 1,
            _ => t.fail("pair without a preimage"),
        }
        // injective on classes: gauges on the factors glue to a gauge on P
        if is_def_like(f.kind) {
            let wp = sp.sample(rng)?;
            let (pa, pb) = gl.split(&wp)?;
            let xa = random_in_degree(&gl.host_a, 0, rng);
            let xb = random_in_degree(&gl.host_c, 0, rng);
            let xp = gl
                .glue(&xa, &xb)?
                .ok_or_else(|| Error::Validation("gauge elements do not glue".into()))?;
            let moved = act(&gl.host_p, &xp, &wp)?;
            let expected = gl.glue(&act(&gl.host_a, &xa, &pa)?, &act(&gl.host_c, &xb, &pb)?)?;
            if expected.as_ref() == Some(&moved) {
                t.check.witnesses += 1;
            } else {
                t.fail("gauge on the factors does not come from P");
            }
        }
    }
    Ok(t.check)
}

/// Axiom (4): surjectivity via `acyclic_lift`; injectivity on classes for
/// `Def`, on elements for `MC` and for the broken functor.
fn axiom_four(
    f: &FunctorUnderTest,
    name: &str,
    e: &CdgaMap,
    broken: bool,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<AxiomCheck>> {
    let mut surj = Tally::new(name, "4-surj");
    let mut inj = Tally::new(name, "4-inj");
    if f.kind == FunctorKind::Constant {
        return Ok(vec![surj.note("one-point functor").check, inj.note("one-point functor").check]);
    }
    let l = &f.l;
    let ctx = ExtensionContext::new(l, e)?;
    let host_a = Arc::new(ctx.host_a.clone());
    let sampler_b = McSampler::new(l, &e.target)?;
    let torsor: Vec<Vec<Q>> = ctx
        .host_i
        .dgla
        .complex()
        .cocycles(1)
        .iter()
        .map(|z| ctx.from_kernel(z))
        .collect();
    let square_zero = e.source.mult_table().is_empty();
    let homotopy = ctx.host_i.dgla.complex().contracting_homotopy()?;
    let equality_rule = f.kind == FunctorKind::Mc || broken;
    if equality_rule {
        if torsor.is_empty() {
            inj.check.witnesses += 1;
        } else {
            inj.fail(format!(
                "distinct lifts of one element: Z^1(L (x) I) has dimension {}",
                torsor.len()
            ));
        }
    } else if square_zero {
        let ca = ctx.host_a.dgla.complex().clone();
        let cb = ctx.host_b.dgla.complex().clone();
        let h1 = ca.cohomology(1).dim;
        let cm = ChainMap::new(ca, cb, ctx.proj.clone())?;
        if cm.on_cohomology(1)?.rank() == h1 {
            inj.check.witnesses += 1;
        } else {
            inj.fail("H^1 map is not injective");
        }
    }
    for _ in 0..samples {
        let omega_b = sampler_b.sample(rng)?;
        let lift = acyclic_lift(&ctx, &omega_b)?;
        if is_mc(&ctx.host_a, &lift) && ctx.proj.mul_vec(&lift)? == omega_b {
            surj.check.witnesses += 1;
        } else {
            surj.fail("acyclic lift does not map to the input");
        }
        if !equality_rule && !square_zero {
            let mut other = lift.clone();
            for z in &torsor {
                crate::qlinalg::axpy(&mut other, &random_q(rng), z);
            }
            // other - lift = dy in Tot(L (x) I) with y = h(other - lift), and
            // exp(-y) acts as translation by dy since I m(A) = 0
            let z = ctx.to_kernel(&crate::qlinalg::sub_vec(&other, &lift))?;
            let y = homotopy.mul_vec(&z)?;
            let x = crate::qlinalg::scale_vec(&q(-1), &ctx.from_kernel(&y));
            if act(&host_a, &x, &lift)? == other {
                inj.check.witnesses += 1;
            } else {
                inj.fail("two lifts of one element are not gauge equivalent");
            }
        }
    }
    Ok(vec![surj.check, inj.check])
}

/// The complex `Tot(L (x) m(A))` of a square-zero algebra.
fn tot(l: &Dgla, a: &ArtinCdga) -> Result<(NilpotentDgla, CochainComplex)> {
    let h = coefficient_extension(l, a)?;
    let c = h.dgla.complex().clone();
    Ok((h, c))
}

/// Cocone of `phi: X -> Y`: `X^n + Y^{n-1}`, `d(x, y) = (dx, phi x - dy)`.
/// `X` is given as two complexes `X1 + X2` with `phi = (phi1, -phi2)`.
fn cocone(
    x1: &CochainComplex,
    x2: &CochainComplex,
    y: &CochainComplex,
    phi1: &RatMatrix,
    phi2: &RatMatrix,
) -> Result<CochainComplex> {
    let mut elems = Vec::new();
    for i in 0..x1.dim() {
        elems.push((x1.space().degree(i), format!("a{i}")));
    }
    for i in 0..x2.dim() {
        elems.push((x2.space().degree(i), format!("c{i}")));
    }
    for i in 0..y.dim() {
        elems.push((y.space().degree(i) + 1, format!("b{i}")));
    }
    let space = GradedSpace::new(elems)?;
    let n = space.dim();
    let idx = |s: String| space.index_of(&s).expect("cocone label");
    let mut d = RatMatrix::zeros(n, n);
    let blocks: [(&CochainComplex, char); 2] = [(x1, 'a'), (x2, 'c')];
    for (cx, p) in blocks {
        for c in 0..cx.dim() {
            for r in 0..cx.dim() {
                let v = cx.differential().get(r, c);
                if !v.is_zero() {
                    d.set(idx(format!("{p}{r}")), idx(format!("{p}{c}")), v.clone());
                }
            }
        }
    }
    for c in 0..x1.dim() {
        for r in 0..y.dim() {
            let v = phi1.get(r, c);
            if !v.is_zero() {
                d.set(idx(format!("b{r}")), idx(format!("a{c}")), v.clone());
            }
        }
    }
    for c in 0..x2.dim() {
        for r in 0..y.dim() {
            let v = phi2.get(r, c);
            if !v.is_zero() {
                d.set(idx(format!("b{r}")), idx(format!("c{c}")), -v.clone());
            }
        }
    }
    for c in 0..y.dim() {
        for r in 0..y.dim() {
            let v = y.differential().get(r, c);
            if !v.is_zero() {
                d.set(idx(format!("b{r}")), idx(format!("b{c}")), -v.clone());
            }
        }
    }
    CochainComplex::new(space, d)
}

/// Derived Schlessinger conditions on abelian models of the MC nerve, plus
/// exactness of the obstruction sequence with both obstruction routes.
pub fn schlessinger_homotopy_battery(f: &FunctorUnderTest, battery: &Battery) -> Result<BatteryReport> {
    let mut checks = Vec::new();
    let trivial = f.kind == FunctorKind::Constant;
    let l = &f.l;
    {
        let mut t = Tally::new("k", "contractible");
        if !trivial && coefficient_extension(l, &ArtinCdga::base_field())?.dim() != 0 {
            t.fail("F(k) is not contractible");
        }
        checks.push(t.check);
    }
    let mut item = 0usize;
    for d in &battery.diagrams {
        item += 1;
        let mut rng = battery.rng(item);
        match d {
            Diagram::Acyclic { name, e } if e.source.mult_table().is_empty() => {
                let mut t = Tally::new(name, "weq");
                if !trivial {
                    let (ha, ca) = tot(l, &e.source)?;
                    let (hb, cb) = tot(l, &e.target)?;
                    let m = coefficient_map(e, &ha, &hb)?;
                    if ChainMap::new(ca, cb, m)?.is_quasi_isomorphism() {
                        t.check.witnesses += 1;
                    } else {
                        t.fail("not a quasi-isomorphism");
                    }
                }
                checks.push(t.check);
            }
            Diagram::Cospan { name, f: fm, g }
                if [&fm.source, &fm.target, &g.source].iter().all(|a| a.mult_table().is_empty()) =>
            {
                let mut t = Tally::new(name, "hpullback");
                if !trivial {
                    let gl = Gluing::new(l, fm, g)?;
                    let (hb, cb) = tot(l, &fm.target)?;
                    let ca = gl.host_a.dgla.complex().clone();
                    let cc = gl.host_c.dgla.complex().clone();
                    let phi1 = coefficient_map(fm, &gl.host_a, &hb)?;
                    let phi2 = coefficient_map(g, &gl.host_c, &hb)?;
                    let co = cocone(&ca, &cc, &cb, &phi1, &phi2)?;
                    let cp = gl.host_p.dgla.complex().clone();
                    let mut m = RatMatrix::zeros(co.dim(), cp.dim());
                    for c in 0..cp.dim() {
                        let (va, vc) = gl.split(&unit(cp.dim(), c))?;
                        for (i, x) in va.iter().enumerate() {
                            m.set(co.space().index_of(&format!("a{i}")).expect("label"), c, x.clone());
                        }
                        for (i, x) in vc.iter().enumerate() {
                            m.set(co.space().index_of(&format!("c{i}")).expect("label"), c, x.clone());
                        }
                    }
                    let pi = |c: &CochainComplex| (c.cohomology(1).dim, c.cohomology(0).dim);
                    let (p0, p1) = pi(&cp);
                    if ChainMap::new(cp.clone(), co.clone(), m)?.is_quasi_isomorphism() {
                        t.check.witnesses += 1;
                        t = t.note(format!("pi_0 {p0}, pi_1 {p1}"));
                    } else {
                        t.fail(format!("not a homotopy pullback: pi_0 {p0} vs {}", pi(&co).0));
                    }
                }
                checks.push(t.check);
            }
            Diagram::Small { name, e } => {
                let mut t = Tally::new(name, "obstruction-seq");
                if !trivial {
                    obstruction_sequence(l, e, battery.samples, &mut rng, &mut t)?;
                }
                checks.push(t.check);
            }
            _ => {}
        }
    }
    let verdict = if checks.iter().all(|c| c.passed) { Verdict::Pass } else { Verdict::Fail };
    Ok(BatteryReport {
        battery: "schlessinger".into(),
        functor: f.name(),
        seed: battery.seed,
        samples: battery.samples,
        checks,
        verdict,
    })
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = crate::qlinalg::zero_vec(n);
    v[i] = q(1);
    v
}

/// `F(A) -> F(B) -> F(k + I[1])` is exact at `F(B)`: an element lifts iff
/// its cone-route obstruction vanishes, and the two routes agree.
fn obstruction_sequence(
    l: &Dgla,
    e: &CdgaMap,
    samples: usize,
    rng: &mut ChaCha8Rng,
    t: &mut Tally,
) -> Result<()> {
    let ctx = ExtensionContext::new(l, e)?;
    let sb = McSampler::new(l, &e.target)?;
    let sa = McSampler::new(l, &e.source)?;
    let (mut lifted, mut obstructed) = (0usize, 0usize);
    for _ in 0..samples {
        let wb = sb.sample(rng)?;
        let via_cone = obstruction_via_cone(&ctx, &wb)?;
        let direct = match lift_across_small_extension(&ctx, &wb)? {
            LiftOutcome::Lifted { class, .. } => {
                lifted += 1;
                class
            }
            LiftOutcome::Obstructed(class) => {
                obstructed += 1;
                class
            }
        };
        if direct.coordinates != via_cone.coordinates {
            t.fail("direct and cone obstruction classes differ");
        } else {
            t.check.witnesses += 1;
        }
        // images of F(A) have vanishing obstruction
        let wa = sa.sample(rng)?;
        let pushed = ctx.proj.mul_vec(&wa)?;
        if !obstruction_via_cone(&ctx, &pushed)?.is_zero() {
            t.fail("image of F(A) has a nonzero obstruction");
        }
        if !is_zero_vec(&crate::mcgauge::mc_residual(&ctx.host_b, &pushed)) {
            t.fail("image of F(A) is not MC");
        }
    }
    t.check.detail = format!("{lifted} lifted, {obstructed} obstructed");
    if !t.check.passed {
        t.check.detail.push_str("; failure");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{labh, lobs};

    #[test]
    fn battery_builds() {
        let b = standard_battery().unwrap();
        assert_eq!(b.cospans().count(), 6);
        assert_eq!(b.small_extensions().count(), 4);
    }

    #[test]
    fn verdicts_on_lobs() {
        let b = standard_battery().unwrap();
        let mc = manetti_battery(&FunctorUnderTest::mc(lobs()), &b).unwrap();
        assert_eq!(mc.verdict, Verdict::PreDeformation, "{mc}");
        let def = manetti_battery(&FunctorUnderTest::def(lobs()), &b).unwrap();
        assert_eq!(def.verdict, Verdict::Deformation, "{def}");
        let broken = manetti_battery(&FunctorUnderTest::def_broken_gauge(lobs()), &b).unwrap();
        assert_eq!(broken.verdict, Verdict::PreDeformation, "{broken}");
        assert!(broken.failures().all(|c| c.axiom == "4-inj"));
        let c = manetti_battery(&FunctorUnderTest::constant(), &b).unwrap();
        assert_eq!(c.verdict, Verdict::Deformation);
    }

    #[test]
    fn schlessinger_passes() {
        let b = standard_battery().unwrap();
        for l in [lobs(), labh(1), labh(0)] {
            let r = schlessinger_homotopy_battery(&FunctorUnderTest::mc(l), &b).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r}");
        }
        let r = schlessinger_homotopy_battery(&FunctorUnderTest::mc(lobs()), &b).unwrap();
        let seq = r.checks.iter().find(|c| c.diagram == "k[t]/t^3 -> k[t]/t^2").unwrap();
        assert!(seq.detail.contains("obstructed"));
    }

    #[test]
    fn reports_are_deterministic() {
        let b = standard_battery().unwrap();
        let f = FunctorUnderTest::def(lobs());
        let r1 = serde_json::to_string(&manetti_battery(&f, &b).unwrap()).unwrap();
        let r2 = serde_json::to_string(&manetti_battery(&f, &b).unwrap()).unwrap();
        assert_eq!(r1, r2);
    }
}
