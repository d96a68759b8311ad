//! Dense one-sided Jacobi SVD for the small matrices behind the exact
//! Hilbert-space maximization routes and the singular-value diagnostics.

use crate::scalar::Real;

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Singular values (descending) of the matrix with the given rows, paired
/// with the matching right singular vectors. Returns min(m, n) values.
///
/// One-sided Jacobi: orthogonalize columns by plane rotations, accumulate
/// the rotations into V; converged column norms are the singular values.
pub(crate) fn svd_rows<F: Real>(rows: &[Vec<F>]) -> (Vec<F>, Vec<Vec<F>>) {
    let m = rows.len();
    let n = if m == 0 { 0 } else { rows[0].len() };
    if m == 0 || n == 0 {
        return (Vec::new(), Vec::new());
    }
    // column-major working copy
    let mut a: Vec<Vec<F>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut v: Vec<Vec<F>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { F::one() } else { F::zero() }).collect())
        .collect();

    let eps = F::epsilon() * F::of(8.0);
    for _sweep in 0..64 {
        let mut rotated = false;
        for j in 0..n {
            for k in (j + 1)..n {
                let ajj = dot(&a[j], &a[j]);
                let akk = dot(&a[k], &a[k]);
                let ajk = dot(&a[j], &a[k]);
                let scale = (ajj * akk).sqrt();
                if scale <= F::zero() || ajk.abs() <= eps * scale {
                    continue;
                }
                rotated = true;
                let tau = (akk - ajj) / (F::of(2.0) * ajk);
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    -F::one() / (-tau + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = a[j][i];
                    let y = a[k][i];
                    a[j][i] = c * x - s * y;
                    a[k][i] = s * x + c * y;
                }
                for i in 0..n {
                    let x = v[j][i];
                    let y = v[k][i];
                    v[j][i] = c * x - s * y;
                    v[k][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<F> = a.iter().map(|col| dot(col, col).sqrt()).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap_or(std::cmp::Ordering::Equal));
    let keep = m.min(n);
    let values = order.iter().take(keep).map(|&j| sigma[j]).collect();
    let vectors = order.iter().take(keep).map(|&j| v[j].clone()).collect();
    (values, vectors)
}
