//! Dense two-phase simplex for the covering linear programs behind the
//! domination certificates: minimize c·t subject to A t ≥ b, t ≥ 0.
//!
//! Sizes here are small-to-moderate (tens of constraints, up to ~5·10^4
//! variables), so a full-tableau method with Dantzig pricing and a Bland
//! anti-cycling fallback is adequate.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub(crate) struct LpSolution<F> {
    pub x: Vec<F>,
    pub objective: F,
}

const MAX_ITERS: usize = 50_000;
const BLAND_AFTER: usize = 2_000;

/// minimize c·x subject to A x ≥ b, x ≥ 0, with b ≥ 0.
pub(crate) fn minimize<F: Real>(c: &[F], a: &[Vec<F>], b: &[F]) -> Result<LpSolution<F>> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    if m == 0 {
        return Ok(LpSolution { x: vec![F::zero(); n], objective: F::zero() });
    }
    for row in a {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    if b.iter().any(|v| *v < F::zero()) {
        return Err(Error::LpFailure { detail: "negative right-hand side" });
    }

    // columns: x (n) | surplus (m) | artificial (m)
    let cols = n + 2 * m;
    let mut t: Vec<Vec<F>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![F::zero(); cols];
        row[..n].copy_from_slice(&a[i]);
        row[n + i] = -F::one();
        row[n + m + i] = F::one();
        t.push(row);
    }
    let mut rhs = b.to_vec();
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // phase 1: drive the artificials out
    let mut phase1_cost = vec![F::zero(); cols];
    for j in n + m..cols {
        phase1_cost[j] = F::one();
    }
    let obj1 = run(&mut t, &mut rhs, &mut basis, &phase1_cost, cols)?;
    if obj1 > F::of(1e-7) {
        return Err(Error::InfeasibleLp);
    }

    // pivot leftover artificials out of the basis (degenerate pivots);
    // rows with no usable real column are redundant and stay inert
    for i in 0..m {
        if basis[i] >= n + m {
            let best = (0..n + m)
                .max_by(|&a, &b| {
                    t[i][a].abs().partial_cmp(&t[i][b].abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
                .filter(|&j| t[i][j].abs() > F::of(1e-7));
            if let Some(j) = best {
                pivot(&mut t, &mut rhs, &mut basis, i, j);
            }
        }
    }

    // phase 2: original cost, artificial columns barred from entering
    let mut phase2_cost = vec![F::zero(); cols];
    phase2_cost[..n].copy_from_slice(c);
    let objective = run(&mut t, &mut rhs, &mut basis, &phase2_cost, n + m)?;

    let mut x = vec![F::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = rhs[i];
        }
    }
    Ok(LpSolution { x, objective })
}

/// Simplex iterations on the current tableau; columns ≥ `enterable` never
/// enter the basis. Returns the optimal objective for `cost`.
fn run<F: Real>(
    t: &mut [Vec<F>],
    rhs: &mut [F],
    basis: &mut [usize],
    cost: &[F],
    enterable: usize,
) -> Result<F> {
    let m = t.len();
    let cols = cost.len();
    // reduced costs and objective for the current basis
    let mut r = cost.to_vec();
    let mut obj = F::zero();
    for i in 0..m {
        let cb = cost[basis[i]];
        if cb != F::zero() {
            obj += cb * rhs[i];
            for j in 0..cols {
                r[j] -= cb * t[i][j];
            }
        }
    }

    let eps = F::of(1e-10);
    for iter in 0..MAX_ITERS {
        let bland = iter > BLAND_AFTER;
        // entering column
        let mut enter: Option<usize> = None;
        let mut best = -eps;
        for j in 0..enterable {
            if r[j] < -eps {
                if bland {
                    enter = Some(j);
                    break;
                }
                if r[j] < best {
                    best = r[j];
                    enter = Some(j);
                }
            }
        }
        let Some(enter) = enter else {
            return Ok(obj);
        };
        // ratio test
        let mut leave: Option<usize> = None;
        let mut best_ratio = F::infinity();
        for i in 0..m {
            let aij = t[i][enter];
            if aij > F::of(1e-11) {
                let ratio = rhs[i] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - F::of(1e-14)
                            || (ratio < best_ratio + F::of(1e-14) && basis[i] < basis[l])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // covering programs are never unbounded: a negative reduced cost
            // with no positive column entries is tableau roundoff, so bar the
            // column and move on
            r[enter] = F::zero();
            continue;
        };
        pivot(t, rhs, basis, leave, enter);
        // entering step θ = rhs[leave] changes the objective by r_j · θ
        let factor = r[enter];
        if factor != F::zero() {
            for j in 0..cols {
                let delta = factor * t[leave][j];
                r[j] -= delta;
            }
            obj += factor * rhs[leave];
        }
    }
    Err(Error::LpFailure { detail: "iteration limit exceeded" })
}

/// Gauss–Jordan pivot on (leave, enter), updating tableau, rhs and basis.
fn pivot<F: Real>(t: &mut [Vec<F>], rhs: &mut [F], basis: &mut [usize], leave: usize, enter: usize) {
    let m = t.len();
    let cols = t[0].len();
    let piv = t[leave][enter];
    for j in 0..cols {
        t[leave][j] /= piv;
    }
    rhs[leave] /= piv;
    if rhs[leave] < F::zero() {
        rhs[leave] = F::zero();
    }
    for i in 0..m {
        if i != leave {
            let factor = t[i][enter];
            if factor != F::zero() {
                for j in 0..cols {
                    let delta = factor * t[leave][j];
                    t[i][j] -= delta;
                }
                let delta = factor * rhs[leave];
                rhs[i] -= delta;
                if rhs[i] < F::zero() {
                    rhs[i] = F::zero();
                }
            }
        }
    }
    basis[leave] = enter;
}
