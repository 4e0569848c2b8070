use super::{MultiMatrixAlgebra, TraceWeight};
use crate::matrix::{linalg, matrix_function, ComplexMatrix, HermitianMatrix, C64};

/// The `τ`-orthogonal projection of `A` onto a unital *-subalgebra `B`.
///
/// Because the trace density `T` is central in `A`, `⟨x, y⟩_τ = τ(x*y)` equals
/// `⟨T^{1/2}x, T^{1/2}y⟩_F` on `A`. The basis of `B` is orthonormalized in
/// that inner product, so `ε(x) = Σ_j b_j ⟨b_j, x⟩_τ`.
#[derive(Clone, Debug)]
pub struct TraceExpectation {
    /// `τ`-orthonormal basis of `B`.
    basis: Vec<ComplexMatrix>,
    /// `T^{1/2} b_j`, used to evaluate inner products in Frobenius form.
    weighted: Vec<ComplexMatrix>,
    sqrt_density: ComplexMatrix,
}

impl TraceExpectation {
    pub fn new(sub: &MultiMatrixAlgebra, tau: &TraceWeight) -> Self {
        let d = sub.ambient_dim();
        let t_half =
            matrix_function(tau.density(), f64::sqrt, true).expect("trace density is positive");
        let t_half_inv = t_half.pinv();
        let mapped: Vec<Vec<C64>> = sub
            .basis()
            .iter()
            .map(|b| (t_half.matrix() * b).to_row_major())
            .collect();
        let ortho = linalg::orthonormalize(&mapped, 1e-12);
        let weighted: Vec<ComplexMatrix> = ortho
            .iter()
            .map(|v| ComplexMatrix::from_row_major(d, v))
            .collect();
        let basis = weighted.iter().map(|u| t_half_inv.matrix() * u).collect();
        Self {
            basis,
            weighted,
            sqrt_density: t_half.into_matrix(),
        }
    }

    /// `ε(x)` for `x` in the ambient algebra `A`.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let tx = &self.sqrt_density * x;
        let mut out = ComplexMatrix::zeros(x.dim());
        for (b, u) in self.basis.iter().zip(&self.weighted) {
            out += &b.scale_c(u.inner(&tx));
        }
        out
    }

    pub fn apply_hermitian(&self, x: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::hermitize(self.apply(x.matrix()))
    }

    /// `τ`-orthonormal basis of the range.
    pub fn range_basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }
}
