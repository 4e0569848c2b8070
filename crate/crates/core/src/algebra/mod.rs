//! Concrete finite-dimensional von Neumann algebras `⊕_k M_{n_k} ⊗ 1_{m_k}`
//! acting on `ℂ^d`, their commutants and block structure, and trace weights.

mod expectation;
mod trace;
mod wedderburn;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{kron, linalg, partial_trace, ComplexMatrix, HermitianMatrix, Side, C64, ZERO};

pub use expectation::TraceExpectation;
pub use trace::{trace_of, TraceWeight};
pub use wedderburn::{commutant, generated_algebra, wedderburn_decompose};

/// Relative residual below which a matrix counts as an algebra member.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// One summand `M_n ⊗ 1_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub dim: usize,
    pub multiplicity: usize,
}

/// A unital *-subalgebra of `M_d` together with its block decomposition.
///
/// The basis is orthonormal for the Frobenius inner product. For block `k`,
/// `isometries[k]` is a `d × (n_k m_k)` isometry `W_k` with
/// `W_k* x W_k = X_k ⊗ 1_{m_k}` for every element `x`.
#[derive(Clone, Debug)]
pub struct MultiMatrixAlgebra {
    ambient_dim: usize,
    blocks: Vec<Block>,
    basis: Vec<ComplexMatrix>,
    isometries: Vec<DMatrix<C64>>,
    central_projections: Vec<HermitianMatrix>,
}

impl MultiMatrixAlgebra {
    /// Standard presentation of `⊕_k M_{n_k} ⊗ 1_{m_k}` on `ℂ^{Σ n_k m_k}`.
    pub fn from_blocks(blocks: &[(usize, usize)]) -> Self {
        assert!(!blocks.is_empty() && blocks.iter().all(|&(n, m)| n > 0 && m > 0));
        let d: usize = blocks.iter().map(|&(n, m)| n * m).sum();
        let mut basis = Vec::new();
        let mut isometries = Vec::new();
        let mut central_projections = Vec::new();
        let mut offset = 0;
        for &(n, m) in blocks {
            let r = n * m;
            let w = DMatrix::from_fn(d, r, |i, j| {
                if i == offset + j {
                    C64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            });
            let norm = 1.0 / (m as f64).sqrt();
            for i in 0..n {
                for j in 0..n {
                    let mut e = ComplexMatrix::zeros(d);
                    for l in 0..m {
                        e[(offset + i * m + l, offset + j * m + l)] = C64::new(norm, 0.0);
                    }
                    basis.push(e);
                }
            }
            let mut p = ComplexMatrix::zeros(d);
            for i in 0..r {
                p[(offset + i, offset + i)] = C64::new(1.0, 0.0);
            }
            central_projections.push(HermitianMatrix::hermitize(p));
            isometries.push(w);
            offset += r;
        }
        Self {
            ambient_dim: d,
            blocks: blocks
                .iter()
                .map(|&(dim, multiplicity)| Block { dim, multiplicity })
                .collect(),
            basis,
            isometries,
            central_projections,
        }
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Self {
        Self::from_blocks(&[(n, 1)])
    }

    /// Scalars `ℂ·1` inside `M_d`.
    pub fn scalars(d: usize) -> Self {
        Self::from_blocks(&[(1, d)])
    }

    /// Diagonal matrices in `M_d`.
    pub fn diagonal(d: usize) -> Self {
        Self::from_blocks(&vec![(1, 1); d])
    }

    /// `M_p ⊗ 1_q` inside `M_{pq}`.
    pub fn tensor_left(p: usize, q: usize) -> Self {
        Self::from_blocks(&[(p, q)])
    }

    /// `1_p ⊗ M_q` inside `M_{pq}`.
    pub fn tensor_right(p: usize, q: usize) -> Self {
        let span: Vec<ComplexMatrix> = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .map(|(i, j)| kron(&ComplexMatrix::identity(p), &ComplexMatrix::unit(q, i, j)))
            .collect();
        wedderburn_decompose(&span, 0).expect("1 ⊗ M_q is a unital *-algebra")
    }

    /// `A₁ ⊗ A₂` on `ℂ^{d₁} ⊗ ℂ^{d₂}`, blocks ordered `(k₁, k₂)` lexicographically.
    pub fn tensor(a: &MultiMatrixAlgebra, b: &MultiMatrixAlgebra) -> Self {
        let d = a.ambient_dim * b.ambient_dim;
        let basis = a
            .basis
            .iter()
            .flat_map(|x| b.basis.iter().map(move |y| kron(x, y)))
            .collect();
        let mut blocks = Vec::new();
        let mut isometries = Vec::new();
        let mut central_projections = Vec::new();
        for (ba, (wa, pa)) in a
            .blocks
            .iter()
            .zip(a.isometries.iter().zip(&a.central_projections))
        {
            for (bb, (wb, pb)) in b
                .blocks
                .iter()
                .zip(b.isometries.iter().zip(&b.central_projections))
            {
                let (n1, m1, n2, m2) = (ba.dim, ba.multiplicity, bb.dim, bb.multiplicity);
                let raw = wa.kronecker(wb);
                // column (i1 m1 + l1)(n2 m2) + i2 m2 + l2  →  (i1 n2 + i2)(m1 m2) + l1 m2 + l2
                let mut w = DMatrix::<C64>::zeros(d, n1 * n2 * m1 * m2);
                for i1 in 0..n1 {
                    for l1 in 0..m1 {
                        for i2 in 0..n2 {
                            for l2 in 0..m2 {
                                let src = (i1 * m1 + l1) * (n2 * m2) + i2 * m2 + l2;
                                let dst = (i1 * n2 + i2) * (m1 * m2) + l1 * m2 + l2;
                                w.set_column(dst, &raw.column(src));
                            }
                        }
                    }
                }
                blocks.push(Block {
                    dim: n1 * n2,
                    multiplicity: m1 * m2,
                });
                isometries.push(w);
                central_projections.push(HermitianMatrix::hermitize(kron(pa, pb)));
            }
        }
        Self {
            ambient_dim: d,
            blocks,
            basis,
            isometries,
            central_projections,
        }
    }

    pub(crate) fn from_parts(
        ambient_dim: usize,
        blocks: Vec<Block>,
        basis: Vec<ComplexMatrix>,
        isometries: Vec<DMatrix<C64>>,
        central_projections: Vec<HermitianMatrix>,
    ) -> Self {
        Self {
            ambient_dim,
            blocks,
            basis,
            isometries,
            central_projections,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Linear (complex) dimension `Σ n_k²`.
    pub fn linear_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn isometries(&self) -> &[DMatrix<C64>] {
        &self.isometries
    }

    pub fn central_projections(&self) -> &[HermitianMatrix] {
        &self.central_projections
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Sorted block multiset, the isomorphism-with-multiplicity invariant.
    pub fn block_signature(&self) -> Vec<Block> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.ambient_dim)
    }

    /// Frobenius coordinates of `x` in the orthonormal basis.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<C64> {
        self.basis.iter().map(|b| b.inner(x)).collect()
    }

    pub fn from_coordinates(&self, c: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.ambient_dim);
        for (b, &ci) in self.basis.iter().zip(c) {
            if ci != ZERO {
                out += &b.scale_c(ci);
            }
        }
        out
    }

    /// Frobenius-orthogonal projection of an ambient matrix onto the algebra.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.from_coordinates(&self.coordinates(x))
    }

    /// `‖x − P(x)‖_F / ‖x‖_F` (0 for `x = 0`).
    pub fn membership_residual(&self, x: &ComplexMatrix) -> f64 {
        let n = x.frobenius_norm();
        if n == 0.0 {
            return 0.0;
        }
        (x - &self.project(x)).frobenius_norm() / n
    }

    pub fn contains(&self, x: &ComplexMatrix) -> bool {
        x.dim() == self.ambient_dim && self.membership_residual(x) < MEMBERSHIP_TOL
    }

    pub fn check_member(&self, x: &ComplexMatrix) -> Result<()> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        let residual = self.membership_residual(x);
        if residual >= MEMBERSHIP_TOL {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(())
    }

    /// Worst membership residual of `other`'s basis inside `self`.
    pub fn subalgebra_residual(&self, other: &MultiMatrixAlgebra) -> f64 {
        if other.ambient_dim != self.ambient_dim {
            return f64::INFINITY;
        }
        other
            .basis
            .iter()
            .map(|b| self.membership_residual(b))
            .fold(0.0, f64::max)
    }

    pub fn contains_algebra(&self, other: &MultiMatrixAlgebra) -> bool {
        self.subalgebra_residual(other) < MEMBERSHIP_TOL
    }

    /// Block components `X_k ∈ M_{n_k}` of an element `x = ⊕ X_k ⊗ 1_{m_k}`.
    pub fn compress(&self, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let xm = x.as_nalgebra();
        self.isometries
            .iter()
            .zip(&self.blocks)
            .map(|(w, b)| {
                let y = ComplexMatrix::from_nalgebra(w.adjoint() * xm * w);
                partial_trace(&y, (b.dim, b.multiplicity), Side::Right)
                    .expect("isometry width is n·m")
                    .scale(1.0 / b.multiplicity as f64)
            })
            .collect()
    }

    /// Inverse of [`compress`](Self::compress): `Σ_k W_k (X_k ⊗ 1) W_k*`.
    pub fn embed(&self, parts: &[ComplexMatrix]) -> ComplexMatrix {
        assert_eq!(parts.len(), self.blocks.len());
        let mut out = DMatrix::<C64>::zeros(self.ambient_dim, self.ambient_dim);
        for ((w, b), x) in self.isometries.iter().zip(&self.blocks).zip(parts) {
            let big = kron(x, &ComplexMatrix::identity(b.multiplicity));
            out += w * big.as_nalgebra() * w.adjoint();
        }
        ComplexMatrix::from_nalgebra(out)
    }

    /// Embeds a single block component, zero elsewhere.
    pub fn embed_block(&self, k: usize, x: &ComplexMatrix) -> ComplexMatrix {
        let parts: Vec<ComplexMatrix> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == k {
                    x.clone()
                } else {
                    ComplexMatrix::zeros(b.dim)
                }
            })
            .collect();
        self.embed(&parts)
    }

    /// Random Hermitian element with Gaussian block components.
    pub fn random_hermitian(&self, rng: &mut impl Rng) -> HermitianMatrix {
        let parts: Vec<ComplexMatrix> = self
            .blocks
            .iter()
            .map(|b| {
                let g = ginibre(b.dim, rng);
                (&g + &g.adjoint()).scale(0.5)
            })
            .collect();
        HermitianMatrix::hermitize(self.embed(&parts))
    }

    /// Random (non-normal) element with Gaussian block components.
    pub fn random_element(&self, rng: &mut impl Rng) -> ComplexMatrix {
        let parts: Vec<ComplexMatrix> = self.blocks.iter().map(|b| ginibre(b.dim, rng)).collect();
        self.embed(&parts)
    }

    /// Haar-random unitary of the algebra (independent in every block).
    pub fn random_unitary(&self, rng: &mut impl Rng) -> ComplexMatrix {
        let parts: Vec<ComplexMatrix> = self
            .blocks
            .iter()
            .map(|b| haar_unitary(b.dim, rng))
            .collect();
        self.embed(&parts)
    }

    /// Center `A ∩ A′`, spanned by the minimal central projections.
    pub fn center_basis(&self) -> Vec<ComplexMatrix> {
        self.central_projections
            .iter()
            .map(|p| p.matrix().clone())
            .collect()
    }

    /// Worst relative residual of `A·A ⊂ A` over basis pairs.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.basis {
            for b in &self.basis {
                let p = a * b;
                worst = worst.max(
                    (&p - &self.project(&p)).frobenius_norm()
                        / (a.frobenius_norm() * b.frobenius_norm()),
                );
            }
        }
        worst
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, rng).into_nalgebra();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    ComplexMatrix::from_nalgebra(q)
}

/// Haar-random unit vector.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v: Vec<C64> = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect();
    let nrm = linalg::norm(&v);
    v.into_iter().map(|z| z / nrm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn from_blocks_dimensions() {
        let a = MultiMatrixAlgebra::from_blocks(&[(2, 1), (1, 3)]);
        assert_eq!(a.ambient_dim(), 5);
        assert_eq!(a.linear_dim(), 5);
        assert!(a.contains(&a.identity()));
        assert!(a.closure_residual() < 1e-12);
    }

    #[test]
    fn compress_embed_round_trip() {
        let a = MultiMatrixAlgebra::from_blocks(&[(2, 2), (1, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = a.random_element(&mut rng);
        assert!(a.contains(&x));
        let back = a.embed(&a.compress(&x));
        assert!((&back - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn membership_rejects_outsider() {
        let a = MultiMatrixAlgebra::diagonal(2);
        let x = ComplexMatrix::unit(2, 0, 1);
        assert!(matches!(
            a.check_member(&x),
            Err(Error::NotInAlgebra { .. })
        ));
        assert!(a
            .check_member(&ComplexMatrix::from_real_diag(&[1.0, 5.0]))
            .is_ok());
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(5, &mut rng);
        assert!((&(&u * &u.adjoint()) - &ComplexMatrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tensor_product_structure() {
        let a = MultiMatrixAlgebra::from_blocks(&[(2, 1), (1, 1)]);
        let b = MultiMatrixAlgebra::tensor_left(2, 2);
        let t = MultiMatrixAlgebra::tensor(&a, &b);
        assert_eq!(t.ambient_dim(), 12);
        assert_eq!(t.linear_dim(), 20);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = t.random_element(&mut rng);
        assert!((&t.embed(&t.compress(&x)) - &x).frobenius_norm() < 1e-12);
        let y = kron(&a.random_element(&mut rng), &b.random_element(&mut rng));
        assert!(t.contains(&y));
        assert!((&t.embed(&t.compress(&y)) - &y).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tensor_right_structure() {
        let a = MultiMatrixAlgebra::tensor_right(2, 3);
        assert_eq!(
            a.blocks(),
            &[Block {
                dim: 3,
                multiplicity: 2
            }]
        );
    }
}
