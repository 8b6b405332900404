//! Semi-decision procedure for gauge equivalence of MC elements.
//!
//! Works stage by stage along the weight filtration. At stage `p` the two
//! elements agree in weights below `p`; with `delta = omega' - x * omega`,
//! the weight-`p` part is matched by a correction `y` of weight `p`
//! (changing weight `p` by `-d_0 y`, `d_0` the weight-preserving part of
//! `d`), together with a correction `z` of weight `p - 1` with `d_0 z = 0`,
//! which changes weight `p` by the weight-`p` part of `-dz + [z, eta_1]`
//! (`eta_1` the weight-one part of the current element). The result is
//! always verified; it is complete for square-zero coefficients and whenever
//! each stage's stabilizer acts through this linearization.

use num_traits::Zero;

use crate::dgla::NilpotentDgla;
use crate::error::{Error, Result};
use crate::qlinalg::{is_zero_vec, solve, sub_vec, zero_vec, RatMatrix, Q};

use super::{bch, gauge_act_uea, is_mc};

fn weight_restricted(host: &NilpotentDgla, deg: i32, w: usize) -> Vec<usize> {
    host.range_at(deg).filter(|&i| host.weight(i) == w).collect()
}

/// Returns `x` with `exp(x) * omega = omega_prime`, or `None` if the search
/// (bounded by `budget` stages) finds nothing.
pub fn gauge_equivalence_witness(
    host: &NilpotentDgla,
    omega: &[Q],
    omega_prime: &[Q],
    budget: usize,
) -> Result<Option<Vec<Q>>> {
    if !is_mc(host, omega) || !is_mc(host, omega_prime) {
        return Err(Error::NotMaurerCartan);
    }
    let l = &host.dgla;
    let n = host.dim();
    let mut x = zero_vec(n);
    let max_w = host.nilpotency_bound().saturating_sub(1);
    for p in 1..=max_w.min(budget) {
        let current = gauge_act_uea(host, &x, omega)?;
        let delta = sub_vec(omega_prime, &current);
        if is_zero_vec(&delta) {
            break;
        }
        if host.min_weight(&delta).unwrap_or(usize::MAX) < p {
            return Ok(None);
        }
        let rows = weight_restricted(host, 1, p);
        if rows.is_empty() {
            continue;
        }
        let ys = weight_restricted(host, 0, p);
        let eta1 = host.weight_part(&current, 1);
        // z candidates: weight p-1, degree 0, with d_0 z = 0
        let zs: Vec<Vec<Q>> = if p >= 2 {
            let cols = weight_restricted(host, 0, p - 1);
            let targets = weight_restricted(host, 1, p - 1);
            let mut m = RatMatrix::zeros(targets.len(), cols.len());
            for (c, &i) in cols.iter().enumerate() {
                let dz = l.d_vec(&l.unit_vec(i));
                for (r, &t) in targets.iter().enumerate() {
                    m.set(r, c, dz[t].clone());
                }
            }
            crate::qlinalg::kernel_basis(&m)
                .into_iter()
                .map(|k| {
                    let mut v = zero_vec(n);
                    for (c, &i) in cols.iter().enumerate() {
                        v[i] = k[c].clone();
                    }
                    v
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut columns: Vec<Vec<Q>> = Vec::new();
        for &i in &ys {
            let dy = l.d_vec(&l.unit_vec(i));
            columns.push(rows.iter().map(|&r| -dy[r].clone()).collect());
        }
        for z in &zs {
            let mut eff = l.bracket(z, &eta1);
            let dz = l.d_vec(z);
            for (k, v) in dz.into_iter().enumerate() {
                eff[k] -= v;
            }
            columns.push(rows.iter().map(|&r| eff[r].clone()).collect());
        }
        let target: Vec<Q> = rows.iter().map(|&r| delta[r].clone()).collect();
        if columns.is_empty() {
            if target.iter().all(|c| c.is_zero()) {
                continue;
            }
            return Ok(None);
        }
        let m = RatMatrix::from_columns(rows.len(), &columns);
        let Some(sol) = solve(&m, &target)? else {
            return Ok(None);
        };
        let mut y = zero_vec(n);
        for (k, &i) in ys.iter().enumerate() {
            y[i] = sol[k].clone();
        }
        let mut z = zero_vec(n);
        for (k, zv) in zs.iter().enumerate() {
            let c = &sol[ys.len() + k];
            if !c.is_zero() {
                crate::qlinalg::axpy(&mut z, c, zv);
            }
        }
        x = bch(host, &y, &bch(host, &z, &x)?)?;
    }
    if gauge_act_uea(host, &x, omega)? == omega_prime {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}
