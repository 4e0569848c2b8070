//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each sweep visits every pair `(p, q)`, applies the unitary rotation
//! `J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]]` that annihilates `A[p][q]`, and
//! accumulates the rotations into the eigenvector matrix. Sweeps stop once the
//! off-diagonal Frobenius mass drops below `1e-13·‖H‖_F`.

use super::{ComplexMatrix, HermitianMatrix, C64, ONE, ZERO};

const OFFDIAG_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Spectral data `H = U diag(λ) U*` with `λ` ascending and `U` unitary.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// `U diag(f(λ)) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.reconstruct_from(&vals)
    }

    /// `U diag(vals) U*` for replacement eigenvalues in the same order.
    pub fn reconstruct_from(&self, vals: &[f64]) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        assert_eq!(vals.len(), n);
        let u = self.eigenvectors.as_nalgebra();
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                if vals[k] != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * vals[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvalues.len();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn herm_eig(h: &HermitianMatrix) -> EigenSystem {
    let n = h.dim();
    let mut a = h.to_row_major();
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFFDIAG_TOL * norm;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, col| v[i * n + order[col]]);
    EigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_pq = phase * s; // J[p][q]
    let s_qp = -phase.conj() * s; // J[q][p]

    // A ← A J, V ← V J (columns p, q)
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * s_qp;
        a[k * n + q] = akp * s_pq + akq * c;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * s_qp;
        v[k * n + q] = vkp * s_pq + vkq * c;
    }
    // A ← J* A (rows p, q)
    let js_pq = s_qp.conj(); // (J*)[p][q]
    let js_qp = s_pq.conj(); // (J*)[q][p]
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * js_pq;
        a[q * n + k] = apk * js_qp + aqk * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(app - t * r, 0.0);
    a[q * n + q] = C64::new(aqq + t * r, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> HermitianMatrix {
        let g = ComplexMatrix::from_fn(n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        HermitianMatrix::hermitize(&g + &g.adjoint())
    }

    fn residuals(h: &HermitianMatrix, es: &EigenSystem) -> (f64, f64) {
        let rec =
            (&es.reconstruct() - h.matrix()).frobenius_norm() / h.frobenius_norm().max(1e-300);
        let u = &es.eigenvectors;
        let n = h.dim();
        let orth = (&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm();
        (rec, orth)
    }

    #[test]
    fn diagonal_input() {
        let es = herm_eig(&HermitianMatrix::from_real_diag(&[1.0, 2.0]));
        assert_eq!(es.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(es.eigenvectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let es = herm_eig(&HermitianMatrix::new(x).unwrap());
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 4, 7, 16] {
            let h = random_hermitian(n, &mut rng);
            let es = herm_eig(&h);
            let (rec, orth) = residuals(&h, &es);
            assert!(rec < 1e-10, "n={n} reconstruction {rec}");
            assert!(orth < 1e-10, "n={n} orthogonality {orth}");
            assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(6, &mut rng);
        let ours = herm_eig(&h).eigenvalues;
        let mut theirs: Vec<f64> = h
            .as_nalgebra()
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_hermitian(4, &mut rng);
        let u = herm_eig(&g).eigenvectors;
        let d = ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.5, 2.0]);
        let h = HermitianMatrix::hermitize(&(&u * &d) * &u.adjoint());
        let es = herm_eig(&h);
        let (rec, orth) = residuals(&h, &es);
        assert!(rec < 1e-10 && orth < 1e-10);
        assert!((es.eigenvalues[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let es = herm_eig(&HermitianMatrix::zeros(3));
        assert_eq!(es.eigenvalues, vec![0.0; 3]);
    }
}
