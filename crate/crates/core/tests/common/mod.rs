//! Independent oracles and builders shared by the integration tests. The
//! linear algebra here is a plain Gaussian elimination written against
//! `BigRational` and the raw structure tables, not the library's solvers.
#![allow(dead_code)]

use std::collections::HashMap;

use dgdef::artin::{ArtinCdga, CdgaMap};
use dgdef::dgla::{Dgla, NilpotentDgla};
use dgdef::qlinalg::{q, sign, Q};
use dgdef::simplicial::BigradedArtin;
use num_traits::{One, Zero};
use rand::Rng;

/// Reduced row echelon form; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..cols {
                    let v = rows[r][k].clone() * f.clone();
                    rows[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let piv = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some `x` with `M x = b`, if one exists.
pub fn solve(rows: &[Vec<Q>], cols: usize, b: &[Q]) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .zip(b)
        .map(|(r, y)| {
            let mut r = r.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let piv = rref(&mut m, cols + 1);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    Some(x)
}

/// `dim H^n(L)` from the raw differential table.
pub fn cohomology_dim(l: &Dgla, n: i32) -> usize {
    let basis = l.basis_pairs();
    let d = l.d_entries();
    let in_deg = |k: i32| -> Vec<usize> { (0..basis.len()).filter(|&i| basis[i].1 == k).collect() };
    let rank_from = |k: i32| -> usize {
        let src = in_deg(k);
        let tgt = in_deg(k + 1);
        let mut rows = vec![vec![Q::zero(); src.len()]; tgt.len()];
        for (s, t, x) in &d {
            if let (Some(c), Some(r)) = (src.iter().position(|v| v == s), tgt.iter().position(|v| v == t)) {
                rows[r][c] += x.clone();
            }
        }
        rank(&rows, src.len())
    };
    in_deg(n).len() - rank_from(n) - rank_from(n - 1)
}

/// Cochain degrees of the basis of `L (x) m(A)` in host order.
pub fn host_degrees(h: &NilpotentDgla) -> Vec<i32> {
    let lb = h.l.basis_pairs();
    let ab = h.a.basis_pairs();
    h.pairs.iter().map(|&(i, j)| lb[i].1 - ab[j].1).collect()
}

fn pair_index(h: &NilpotentDgla) -> HashMap<(usize, usize), usize> {
    h.pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect()
}

/// `d omega + 1/2 [omega, omega]` with
/// `d(l a) = dl a + (-1)^|l| l da` and `[l a, l' a'] = (-1)^{|a||l'|} [l,l'] aa'`.
pub fn residual(h: &NilpotentDgla, omega: &[Q]) -> Vec<Q> {
    let idx = pair_index(h);
    let ldeg: Vec<i32> = h.l.basis_pairs().iter().map(|p| p.1).collect();
    let adeg: Vec<i32> = h.a.basis_pairs().iter().map(|p| -p.1).collect();
    let mut ld: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (s, t, x) in h.l.d_entries() {
        ld.entry(s).or_default().push((t, x));
    }
    let mut ad: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (s, t, x) in h.a.d_entries() {
        ad.entry(s).or_default().push((t, x));
    }
    let mut br: HashMap<(usize, usize), Vec<(usize, Q)>> = HashMap::new();
    for (a, b, c, x) in h.l.bracket_entries() {
        br.entry((a, b)).or_default().push((c, x));
    }
    let mut mu: HashMap<(usize, usize), Vec<(usize, Q)>> = HashMap::new();
    for (a, b, c, x) in h.a.mult_entries() {
        mu.entry((a, b)).or_default().push((c, x));
    }
    let mut out = vec![Q::zero(); h.pairs.len()];
    let mut add = |i: usize, j: usize, v: Q| {
        out[idx[&(i, j)]] += v;
    };
    let half = Q::new(1.into(), 2.into());
    let support: Vec<usize> = (0..omega.len()).filter(|&k| !omega[k].is_zero()).collect();
    for &k in &support {
        let (i, j) = h.pairs[k];
        let c = &omega[k];
        for (t, x) in ld.get(&i).into_iter().flatten() {
            add(*t, j, c * x);
        }
        for (t, x) in ad.get(&j).into_iter().flatten() {
            add(i, *t, c * x * sign(ldeg[i] as i64));
        }
        for &k2 in &support {
            let (i2, j2) = h.pairs[k2];
            let (Some(bs), Some(ms)) = (br.get(&(i, i2)), mu.get(&(j, j2))) else {
                continue;
            };
            let s = sign((adeg[j] * ldeg[i2]) as i64);
            for (cl, x) in bs {
                for (ca, y) in ms {
                    add(*cl, *ca, &half * c * &omega[k2] * x * y * &s);
                }
            }
        }
    }
    out
}

pub fn is_mc(h: &NilpotentDgla, omega: &[Q]) -> bool {
    residual(h, omega).iter().all(|x| x.is_zero())
}

/// `(1 (x) f)` from `L (x) m(A)` to `L (x) m(B)` as rows over the source basis.
pub fn push_rows(f: &CdgaMap, hs: &NilpotentDgla, ht: &NilpotentDgla) -> Vec<Vec<Q>> {
    let idx = pair_index(ht);
    let mut rows = vec![vec![Q::zero(); hs.pairs.len()]; ht.pairs.len()];
    for (k, &(i, j)) in hs.pairs.iter().enumerate() {
        for r in 0..f.target.dim() {
            let m = f.matrix.get(r, j);
            if !m.is_zero() {
                rows[idx[&(i, r)]][k] += m.clone();
            }
        }
    }
    rows
}

pub fn apply(rows: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    rows.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Outcome of the brute-force lift search.
#[derive(Debug, PartialEq, Eq)]
pub enum Ansatz {
    Lift(Vec<Q>),
    NoLift,
    /// the residual is not affine on the ansatz (not a small extension)
    Inconclusive,
}

/// Searches all degree-1 preimages of `omega_b` for an MC element: the
/// residual is a quadratic polynomial on the affine ansatz, recovered
/// exactly from its values, and its zero set is decided when it is affine.
pub fn brute_force_lift(f: &CdgaMap, ha: &NilpotentDgla, hb: &NilpotentDgla, omega_b: &[Q]) -> Ansatz {
    let deg = host_degrees(ha);
    let ones: Vec<usize> = (0..deg.len()).filter(|&k| deg[k] == 1).collect();
    let full = push_rows(f, ha, hb);
    let rows: Vec<Vec<Q>> = full.iter().map(|r| ones.iter().map(|&k| r[k].clone()).collect()).collect();
    let Some(x0) = solve(&rows, ones.len(), omega_b) else {
        return Ansatz::NoLift;
    };
    let dirs = nullspace(&rows, ones.len());
    let embed = |x: &[Q]| -> Vec<Q> {
        let mut v = vec![Q::zero(); deg.len()];
        for (t, &k) in ones.iter().enumerate() {
            v[k] = x[t].clone();
        }
        v
    };
    let at = |c: &[Q]| -> Vec<Q> {
        let mut x = x0.clone();
        for (ci, d) in c.iter().zip(&dirs) {
            for (a, b) in x.iter_mut().zip(d) {
                *a += ci * b;
            }
        }
        residual(ha, &embed(&x))
    };
    let m = dirs.len();
    let e = |k: usize, s: i64| -> Vec<Q> {
        let mut c = vec![Q::zero(); m];
        c[k] = q(s);
        c
    };
    let r0 = at(&vec![Q::zero(); m]);
    let mut lin = Vec::new();
    let mut quad_diag = Vec::new();
    for k in 0..m {
        let (p, n) = (at(&e(k, 1)), at(&e(k, -1)));
        let a: Vec<Q> = p.iter().zip(&n).map(|(x, y)| (x - y) / q(2)).collect();
        let qd: Vec<Q> = p.iter().zip(&n).zip(&r0).map(|((x, y), z)| (x + y) / q(2) - z).collect();
        if qd.iter().any(|x| !x.is_zero()) {
            return Ansatz::Inconclusive;
        }
        lin.push(a);
        quad_diag.push(qd);
    }
    for k in 0..m {
        for l in k + 1..m {
            let mut c = e(k, 1);
            c[l] = q(1);
            let v = at(&c);
            for t in 0..v.len() {
                if v[t] != &r0[t] + &lin[k][t] + &lin[l][t] {
                    return Ansatz::Inconclusive;
                }
            }
        }
    }
    // r0 + sum_k c_k lin_k = 0
    let sys: Vec<Vec<Q>> = (0..r0.len()).map(|t| (0..m).map(|k| lin[k][t].clone()).collect()).collect();
    let rhs: Vec<Q> = r0.iter().map(|x| -x.clone()).collect();
    match solve(&sys, m, &rhs) {
        None => Ansatz::NoLift,
        Some(c) => {
            let mut x = x0.clone();
            for (ci, d) in c.iter().zip(&dirs) {
                for (a, b) in x.iter_mut().zip(d) {
                    *a += ci * b;
                }
            }
            Ansatz::Lift(embed(&x))
        }
    }
}

pub fn random_q<R: Rng>(rng: &mut R) -> Q {
    Q::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into())
}

pub fn random_degree<R: Rng>(h: &NilpotentDgla, d: i32, rng: &mut R) -> Vec<Q> {
    host_degrees(h)
        .iter()
        .map(|&k| if k == d { random_q(rng) } else { Q::zero() })
        .collect()
}

/// Associativity and graded commutativity of an Artinian product, read off
/// the multiplication table.
pub fn check_product_table(a: &ArtinCdga) -> Result<(), String> {
    let n = a.dim();
    let deg: Vec<i32> = a.basis_pairs().iter().map(|p| p.1).collect();
    let mut m: HashMap<(usize, usize), HashMap<usize, Q>> = HashMap::new();
    for (x, y, z, c) in a.mult_entries() {
        *m.entry((x, y)).or_default().entry(z).or_insert_with(Q::zero) += c;
    }
    let prod = |x: usize, y: usize| m.get(&(x, y)).cloned().unwrap_or_default();
    let times = |v: &HashMap<usize, Q>, w: usize, left: bool| -> HashMap<usize, Q> {
        let mut out: HashMap<usize, Q> = HashMap::new();
        for (z, c) in v {
            let p = if left { prod(*z, w) } else { prod(w, *z) };
            for (t, d) in p {
                *out.entry(t).or_insert_with(Q::zero) += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    for (&(x, y), v) in &m {
        let s = sign((deg[x] * deg[y]) as i64);
        let mut flipped = prod(y, x);
        for c in flipped.values_mut() {
            *c *= &s;
        }
        let mut v2 = v.clone();
        v2.retain(|_, c| !c.is_zero());
        flipped.retain(|_, c| !c.is_zero());
        if v2 != flipped {
            return Err(format!("{}: {x}*{y} not graded commutative", a.name()));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = prod(x, y);
            for w in 0..n {
                let left = times(&xy, w, true);
                let yw = prod(y, w);
                let right = times(&yw, x, false);
                if left != right {
                    return Err(format!("{}: ({x}{y}){w} != {x}({y}{w})", a.name()));
                }
            }
        }
    }
    Ok(())
}

/// `d o d` from a raw differential table.
pub fn d_squared_is_zero(entries: &[(usize, usize, Q)], n: usize) -> bool {
    let mut d: Vec<Vec<(usize, Q)>> = vec![Vec::new(); n];
    for (s, t, x) in entries {
        d[*s].push((*t, x.clone()));
    }
    (0..n).all(|s| {
        let mut acc: HashMap<usize, Q> = HashMap::new();
        for (k, x) in &d[s] {
            for (t, y) in &d[*k] {
                *acc.entry(*t).or_insert_with(Q::zero) += x * y;
            }
        }
        acc.values().all(|c| c.is_zero())
    })
}

/// Unitalized bigraded structure: index 0 is the unit.
struct Unital {
    deg: Vec<(i32, i32)>,
    labels: Vec<String>,
    mul: Vec<Vec<Vec<(usize, Q)>>>,
    dh: Vec<Vec<(usize, Q)>>,
    dv: Vec<Vec<(usize, Q)>>,
}

fn unitalize(b: &BigradedArtin) -> Unital {
    let n = b.dim() + 1;
    let mut deg = vec![(0, 0)];
    let mut labels = vec!["1".to_string()];
    for a in 0..b.dim() {
        deg.push((b.cochain(a), b.chain(a)));
        labels.push(b.label(a).to_string());
    }
    let mut mul = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        mul[0][x] = vec![(x, Q::one())];
        mul[x][0] = vec![(x, Q::one())];
    }
    for a in 0..b.dim() {
        for c in 0..b.dim() {
            mul[a + 1][c + 1] = b.mul_basis(a, c).iter().map(|(t, x)| (t + 1, x.clone())).collect();
        }
    }
    let shift = |v: Vec<(usize, Q)>| v.into_iter().map(|(t, x)| (t + 1, x)).collect::<Vec<_>>();
    let mut dh = vec![Vec::new()];
    let mut dv = vec![Vec::new()];
    for a in 0..b.dim() {
        dh.push(shift(b.d_h_basis(a)));
        dv.push(shift(b.d_v_basis(a)));
    }
    Unital { deg, labels, mul, dh, dv }
}

/// Augmentation ideal of `(k + K) (x) (k + R)` with the Koszul sign by total
/// parity, `d_h = d_K (x) 1` and `d_v = 1 (x) d_R`.
pub fn tensor(k: &BigradedArtin, r: &BigradedArtin) -> BigradedArtin {
    let (uk, ur) = (unitalize(k), unitalize(r));
    let mut pairs = Vec::new();
    for a in 0..uk.deg.len() {
        for b in 0..ur.deg.len() {
            if a + b > 0 {
                pairs.push((a, b));
            }
        }
    }
    let idx = |a: usize, b: usize| pairs.iter().position(|p| *p == (a, b)).unwrap();
    let par = |d: (i32, i32)| (d.0 + d.1) as i64;
    let basis = pairs
        .iter()
        .map(|&(a, b)| {
            (
                format!("{}|{}", uk.labels[a], ur.labels[b]),
                uk.deg[a].0 + ur.deg[b].0,
                uk.deg[a].1 + ur.deg[b].1,
            )
        })
        .collect();
    let mut mult = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            let s = sign(par(ur.deg[b]) * par(uk.deg[a2]));
            for (ka, x) in &uk.mul[a][a2] {
                for (rb, y) in &ur.mul[b][b2] {
                    mult.push((i, j, idx(*ka, *rb), &s * x * y));
                }
            }
        }
    }
    let mut dh = Vec::new();
    let mut dv = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (t, x) in &uk.dh[a] {
            dh.push((i, idx(*t, b), x.clone()));
        }
        for (t, x) in &ur.dv[b] {
            dv.push((i, idx(a, *t), x.clone()));
        }
    }
    BigradedArtin::new(format!("{}x{}", k.name, r.name), basis, &dh, &dv, &mult).unwrap()
}

/// `k[u]/u^3` in bidegree (0,0) with `d_h u = v` in (1,0).
pub fn cochain_side() -> BigradedArtin {
    BigradedArtin::new(
        "K",
        vec![("u".into(), 0, 0), ("u2".into(), 0, 0), ("v".into(), 1, 0), ("uv".into(), 1, 0)],
        &[(0, 2, q(1)), (1, 3, q(2))],
        &[],
        &[(0, 0, 1, q(1)), (0, 2, 3, q(1)), (2, 0, 3, q(1))],
    )
    .unwrap()
}

/// Square-zero `e (0,1), f (0,0), g (0,1)` with `d_v e = f`.
pub fn chain_side() -> BigradedArtin {
    BigradedArtin::new(
        "R",
        vec![("e".into(), 0, 1), ("f".into(), 0, 0), ("g".into(), 0, 1)],
        &[],
        &[(0, 1, q(1))],
        &[],
    )
    .unwrap()
}

/// Random three-term complex `V0 -> V1 -> V2` with `d^2 = 0`, as entries
/// over a basis ordered by degree.
fn random_complex<R: Rng>(dims: [usize; 3], rng: &mut R) -> Vec<(usize, usize, Q)> {
    let [n0, n1, n2] = dims;
    let d0: Vec<Vec<Q>> = (0..n1).map(|_| (0..n0).map(|_| random_q(rng)).collect()).collect();
    // rows annihilating the image of d0
    let d0t: Vec<Vec<Q>> = (0..n0).map(|c| (0..n1).map(|r| d0[r][c].clone()).collect()).collect();
    let coker = nullspace(&d0t, n1);
    let d1: Vec<Vec<Q>> = (0..n2)
        .map(|_| {
            let mut row = vec![Q::zero(); n1];
            for k in &coker {
                let c = random_q(rng);
                for (x, y) in row.iter_mut().zip(k) {
                    *x += &c * y;
                }
            }
            row
        })
        .collect();
    let mut out = Vec::new();
    for r in 0..n1 {
        for c in 0..n0 {
            out.push((c, n0 + r, d0[r][c].clone()));
        }
    }
    for r in 0..n2 {
        for c in 0..n1 {
            out.push((n0 + c, n0 + n1 + r, d1[r][c].clone()));
        }
    }
    out.retain(|e| !e.2.is_zero());
    out
}

/// Random bounded bicomplex: the tensor product of a random horizontal
/// complex in cochain degrees 0..2 and a random vertical one in chain
/// degrees 2..0, both square-zero.
pub fn random_bicomplex<R: Rng>(rng: &mut R) -> BigradedArtin {
    let hd = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=2)];
    let vd = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=2)];
    let mut hb = Vec::new();
    for (i, &n) in hd.iter().enumerate() {
        for k in 0..n {
            hb.push((format!("h{i}_{k}"), i as i32, 0));
        }
    }
    // vertical basis ordered from chain degree 2 down to 0, so the
    // differential goes forward in the list
    let mut vb = Vec::new();
    for (i, &n) in vd.iter().enumerate() {
        for k in 0..n {
            vb.push((format!("w{}_{k}", 2 - i), 0, 2 - i as i32));
        }
    }
    let h = BigradedArtin::new("H", hb, &random_complex(hd, rng), &[], &[]).unwrap();
    let v = BigradedArtin::new("V", vb, &[], &random_complex(vd, rng), &[]).unwrap();
    tensor(&h, &v)
}
