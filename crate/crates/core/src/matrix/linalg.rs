//! Small dense solvers on flat complex vectors: nullspaces, Gram–Schmidt,
//! Hermitian positive solves.

use nalgebra::{DMatrix, DVector};

use super::{C64, ZERO};

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the span of `vectors` (modified Gram–Schmidt, two passes).
/// Vectors whose residual falls below `rel_tol` of their norm are dropped.
pub fn orthonormalize(vectors: &[Vec<C64>], rel_tol: f64) -> Vec<Vec<C64>> {
    gram_schmidt(vectors, rel_tol, None)
}

/// Like [`orthonormalize`], but residuals are compared with `tol · max_i ‖v_i‖`,
/// so inputs that are numerically zero relative to the others are dropped too.
pub fn orthonormalize_scaled(vectors: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    gram_schmidt(vectors, tol, Some(tol * scale))
}

fn gram_schmidt(vectors: &[Vec<C64>], rel_tol: f64, abs_tol: Option<f64>) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let n0 = norm(v);
        if n0 == 0.0 || abs_tol.is_some_and(|t| n0 <= t) {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let nw = norm(&w);
        if nw > rel_tol * n0 && abs_tol.is_none_or(|t| nw > t) {
            let inv = 1.0 / nw;
            basis.push(w.into_iter().map(|z| z * inv).collect());
        }
    }
    basis
}

/// Basis of `{x : A x = 0}` for a `rows × cols` matrix given row-major.
///
/// Gauss–Jordan elimination with complete pivoting; pivots below
/// `rel_tol · max|A|` terminate the elimination. The returned vectors are
/// orthonormal.
pub fn nullspace(a: &[C64], rows: usize, cols: usize, rel_tol: f64) -> Vec<Vec<C64>> {
    assert_eq!(a.len(), rows * cols);
    let mut m = a.to_vec();
    let scale = m.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    if scale > 0.0 {
        let thresh = rel_tol * scale;
        for k in 0..rows.min(cols) {
            let (mut pi, mut pj, mut best) = (k, k, 0.0f64);
            for i in k..rows {
                let row = &m[i * cols..(i + 1) * cols];
                for (j, z) in row.iter().enumerate().skip(k) {
                    let v = z.norm_sqr();
                    if v > best {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if best.sqrt() < thresh {
                break;
            }
            if pi != k {
                for j in 0..cols {
                    m.swap(k * cols + j, pi * cols + j);
                }
            }
            if pj != k {
                for i in 0..rows {
                    m.swap(i * cols + k, i * cols + pj);
                }
                perm.swap(k, pj);
            }
            let inv = C64::new(1.0, 0.0) / m[k * cols + k];
            for j in k..cols {
                m[k * cols + j] *= inv;
            }
            let pivot_row: Vec<C64> = m[k * cols + k..(k + 1) * cols].to_vec();
            for i in 0..rows {
                if i == k {
                    continue;
                }
                let f = m[i * cols + k];
                if f == ZERO {
                    continue;
                }
                let row = &mut m[i * cols + k..(i + 1) * cols];
                for (r, p) in row.iter_mut().zip(&pivot_row) {
                    *r -= f * p;
                }
            }
            rank += 1;
        }
    }
    let mut out = Vec::with_capacity(cols - rank);
    for free in rank..cols {
        let mut x = vec![ZERO; cols];
        x[perm[free]] = C64::new(1.0, 0.0);
        for i in 0..rank {
            x[perm[i]] = -m[i * cols + free];
        }
        out.push(x);
    }
    orthonormalize(&out, 1e-12)
}

/// Solves `M x = b` for Hermitian positive semidefinite `M`.
///
/// Falls back to Tikhonov regularization `M + δ·1` with `δ = reg · max(1, tr M / n)`
/// when the Cholesky factorization fails.
pub fn solve_psd(m: &DMatrix<C64>, b: &DVector<C64>, reg: f64) -> DVector<C64> {
    if let Some(ch) = m.clone().cholesky() {
        return ch.solve(b);
    }
    let n = m.nrows();
    let scale = (m.trace().re / n.max(1) as f64).max(1.0);
    let shifted = m + DMatrix::<C64>::identity(n, n) * C64::new(reg * scale, 0.0);
    match shifted.clone().cholesky() {
        Some(ch) => ch.solve(b),
        None => shifted.lu().solve(b).unwrap_or_else(|| DVector::zeros(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn nullspace_of_rank_one() {
        // [1 1 1] has a 2-dimensional kernel
        let a = vec![c(1.0), c(1.0), c(1.0)];
        let ns = nullspace(&a, 1, 3, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: C64 = v.iter().sum();
            assert!(s.norm() < 1e-14);
        }
        assert!(dot(&ns[0], &ns[1]).norm() < 1e-14);
    }

    #[test]
    fn nullspace_of_full_rank_is_empty() {
        let a = vec![c(2.0), c(1.0), c(1.0), c(3.0)];
        assert!(nullspace(&a, 2, 2, 1e-12).is_empty());
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        let ns = nullspace(&[ZERO; 6], 2, 3, 1e-12);
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn gram_schmidt_drops_dependent() {
        let v = vec![
            vec![c(1.0), c(0.0)],
            vec![c(2.0), c(0.0)],
            vec![c(1.0), c(1.0)],
        ];
        let b = orthonormalize(&v, 1e-12);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn psd_solve_regularizes_singular() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let b = DVector::from_column_slice(&[c(2.0), c(0.0)]);
        let x = solve_psd(&m, &b, 1e-12);
        assert!((x[0] - c(2.0)).norm() < 1e-9);
        assert!(x[1].norm() < 1e-9);
    }
}
