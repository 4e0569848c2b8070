//! Kosaki's variational formula evaluated on step functions.
//!
//! For `x(t)` constant on `[t_j, t_{j+1})` and `x = 1` on `[T, ∞)`,
//!
//! ```text
//! φ(1) log n − Σ_j min_{x∈V} [a_j φ((1−x)*(1−x)) + b_j ψ(x x*)] − ψ(1)/T
//! ```
//!
//! with `a_j = log(t_{j+1}/t_j)` and `b_j = 1/t_j − 1/t_{j+1}` is a lower bound for
//! `S_V(φ‖ψ)`. Each slice is a convex quadratic in the coordinates of `x`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::algebra::MultiMatrixAlgebra;
use crate::error::{Error, Result};
use crate::matrix::{linalg, ComplexMatrix, C64};
use crate::states::State;

use super::align;

/// A linear subspace `V ⊂ A` containing the identity.
#[derive(Clone, Debug)]
pub struct OperatorSubspace {
    basis: Vec<ComplexMatrix>,
}

impl OperatorSubspace {
    /// Span of `elements` inside `alg`.
    pub fn new(alg: &MultiMatrixAlgebra, elements: &[ComplexMatrix]) -> Result<Self> {
        for e in elements {
            alg.check_member(e)?;
        }
        let d = alg.ambient_dim();
        let flats: Vec<Vec<C64>> = elements.iter().map(|m| m.to_row_major()).collect();
        let basis: Vec<ComplexMatrix> = linalg::orthonormalize(&flats, 1e-10)
            .iter()
            .map(|v| ComplexMatrix::from_row_major(d, v))
            .collect();
        let one = ComplexMatrix::identity(d);
        let mut r = one.clone();
        for b in &basis {
            r = &r - &b.scale_c(b.inner(&one));
        }
        let residual = r.frobenius_norm() / one.frobenius_norm();
        if residual > 1e-9 {
            return Err(Error::IdentityNotInSubspace { residual });
        }
        Ok(Self { basis })
    }

    /// A subalgebra seen as a subspace.
    pub fn from_algebra(sub: &MultiMatrixAlgebra) -> Self {
        Self {
            basis: sub.basis().to_vec(),
        }
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Breakpoints `1/n = t_0 < t_1 < … < t_S = T` of the step functions.
#[derive(Clone, Debug, PartialEq)]
pub struct KosakiGrid {
    pub breakpoints: Vec<f64>,
}

impl KosakiGrid {
    /// `slices` log-uniform slices on `[1/n, upper]`.
    pub fn log_uniform(n: f64, upper: f64, slices: usize) -> Self {
        assert!(n >= 1.0 && upper > 1.0 / n && slices >= 1);
        let lo = (1.0 / n).ln();
        let hi = upper.ln();
        let breakpoints = (0..=slices)
            .map(|j| (lo + (hi - lo) * j as f64 / slices as f64).exp())
            .collect();
        Self { breakpoints }
    }

    /// Grid whose discarded tail `ψ(1)/T` stays below `tail_tol`.
    pub fn with_tail(n: f64, psi_mass: f64, tail_tol: f64, slices: usize) -> Self {
        Self::log_uniform(n, (psi_mass / tail_tol).max(2.0 / n), slices)
    }

    pub fn n(&self) -> f64 {
        1.0 / self.breakpoints[0]
    }

    pub fn upper(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn slices(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Nested refinement: geometric midpoints in every slice, and `n → 2n`.
    ///
    /// Every step function on the old grid is a step function on the new one,
    /// and the extra slice `[1/(2n), 1/n]` with `x = 0` costs exactly `φ(1) log 2`,
    /// so the evaluated bound can only increase.
    pub fn refine(&self) -> Self {
        let mut b = Vec::with_capacity(2 * self.breakpoints.len());
        b.push(self.breakpoints[0] / 2.0);
        for w in self.breakpoints.windows(2) {
            b.push(w[0]);
            b.push((w[0] * w[1]).sqrt());
        }
        b.push(self.upper());
        Self { breakpoints: b }
    }
}

impl Default for KosakiGrid {
    /// `n = 2^20`, 800 slices up to `T = 10^6`.
    fn default() -> Self {
        Self::log_uniform((1u64 << 20) as f64, 1e6, 800)
    }
}

/// Lower bound for `S_V(φ‖ψ)` from step functions on `grid`.
pub fn kosaki_eval(
    phi: &State,
    psi: &State,
    v: &OperatorSubspace,
    grid: &KosakiGrid,
) -> Result<f64> {
    let psi = align(phi, psi)?;
    let k = v.dim();
    let basis = v.basis();
    let mut f = DMatrix::<C64>::zeros(k, k);
    let mut kk = DMatrix::<C64>::zeros(k, k);
    let mut g = DVector::<C64>::zeros(k);
    for i in 0..k {
        g[i] = phi.value(&basis[i]);
        for j in 0..k {
            f[(i, j)] = phi.value(&(&basis[i].adjoint() * &basis[j]));
            kk[(i, j)] = psi.value(&(&basis[j] * &basis[i].adjoint()));
        }
    }
    // Hermitize the Gram matrices against round-off.
    let f = (&f + f.adjoint()) * C64::new(0.5, 0.0);
    let kk = (&kk + kk.adjoint()) * C64::new(0.5, 0.0);
    let phi1 = phi.mass();
    let psi1 = psi.mass();
    let gbar = g.map(|z| z.conj());

    let slice_cost = |w: &[f64]| -> f64 {
        let (t0, t1) = (w[0], w[1]);
        let a = (t1 / t0).ln();
        let b = 1.0 / t0 - 1.0 / t1;
        let m = &f * C64::new(a, 0.0) + &kk * C64::new(b, 0.0);
        let rhs = &gbar * C64::new(a, 0.0);
        let c = linalg::solve_psd(&m, &rhs, 1e-12);
        // a(φ(1) − 2 Re gᵀc + c*Fc) + b c*Kc
        let gc: C64 = g.iter().zip(c.iter()).map(|(x, y)| x * y).sum();
        let quad = (c.adjoint() * &m * &c)[(0, 0)].re;
        (a * (phi1 - 2.0 * gc.re) + quad).max(0.0)
    };
    let costs: Vec<f64> = grid.breakpoints.par_windows(2).map(slice_cost).collect();
    let total: f64 = costs.iter().sum();
    Ok(phi1 * grid.n().ln() - total - psi1 / grid.upper())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TraceWeight;
    use crate::matrix::HermitianMatrix;
    use crate::relent::rel_entropy_closed;
    use std::sync::Arc;

    fn diag(a: &Arc<MultiMatrixAlgebra>, p: &[f64]) -> State {
        let tau = TraceWeight::unnormalized(a);
        State::new(a.clone(), tau, HermitianMatrix::from_real_diag(p)).unwrap()
    }

    #[test]
    fn identity_required() {
        let a = MultiMatrixAlgebra::full(2);
        let e = ComplexMatrix::unit(2, 0, 0);
        assert!(matches!(
            OperatorSubspace::new(&a, &[e]),
            Err(Error::IdentityNotInSubspace { .. })
        ));
    }

    #[test]
    fn scalars_give_zero_for_states() {
        let a = Arc::new(MultiMatrixAlgebra::full(2));
        let phi = diag(&a, &[0.7, 0.3]);
        let psi = diag(&a, &[0.2, 0.8]);
        let v = OperatorSubspace::new(&a, &[a.identity()]).unwrap();
        let val = kosaki_eval(&phi, &psi, &v, &KosakiGrid::default()).unwrap();
        assert!(val <= 1e-9 && val > -1e-3, "{val}");
    }

    #[test]
    fn approaches_closed_form() {
        let a = Arc::new(MultiMatrixAlgebra::full(2));
        let phi = diag(&a, &[0.7, 0.3]);
        let psi = diag(&a, &[0.2, 0.8]);
        let exact = rel_entropy_closed(&phi, &psi).unwrap();
        let v = OperatorSubspace::from_algebra(&a);
        let g = KosakiGrid::default();
        let v0 = kosaki_eval(&phi, &psi, &v, &g).unwrap();
        let v1 = kosaki_eval(&phi, &psi, &v, &g.refine()).unwrap();
        assert!(v0 <= exact + 1e-9 && v1 <= exact + 1e-9);
        assert!(v1 >= v0 - 1e-12);
        assert!(exact - v0 < 1e-3, "{exact} vs {v0}");
    }

    #[test]
    fn refinement_is_nested() {
        let g = KosakiGrid::log_uniform(4.0, 100.0, 3);
        let r = g.refine();
        assert_eq!(r.slices(), 7);
        assert!((r.n() - 8.0).abs() < 1e-12);
        for b in &g.breakpoints {
            assert!(r.breakpoints.iter().any(|x| (x - b).abs() < 1e-12 * b));
        }
    }
}
