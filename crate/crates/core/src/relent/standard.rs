use std::sync::Arc;

use crate::algebra::{MultiMatrixAlgebra, TraceWeight};
use crate::error::{Error, Result};
use crate::matrix::{
    herm_eig, kron, ComplexMatrix, EigenSystem, HermitianMatrix, C64, SUPPORT_CUTOFF, ZERO,
};
use crate::states::State;

use super::align;

/// Trace-GNS space of `A = ⊕_k M_{n_k}`: `H = ⊕_k M_{n_k}` with
/// `⟨x, y⟩ = τ(x*y)`, realized in coordinates `√w_k · (X_k)_{ij}` (row-major).
///
/// `A` acts by left multiplication, `A′` by right multiplication.
#[derive(Clone, Debug)]
pub struct StandardForm {
    algebra: Arc<MultiMatrixAlgebra>,
    tau: TraceWeight,
    offsets: Vec<usize>,
    dim: usize,
}

impl StandardForm {
    pub fn new(algebra: Arc<MultiMatrixAlgebra>, tau: TraceWeight) -> Self {
        let mut offsets = Vec::new();
        let mut dim = 0;
        for b in algebra.blocks() {
            offsets.push(dim);
            dim += b.dim * b.dim;
        }
        Self {
            algebra,
            tau,
            offsets,
            dim,
        }
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn tau(&self) -> &TraceWeight {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `x ↦ vect(x)` for `x ∈ A`.
    pub fn vect(&self, x: &ComplexMatrix) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        for (k, (xk, &w)) in self
            .algebra
            .compress(x)
            .iter()
            .zip(self.tau.weights())
            .enumerate()
        {
            let s = w.sqrt();
            for (i, z) in xk.to_row_major().into_iter().enumerate() {
                v[self.offsets[k] + i] = z * s;
            }
        }
        v
    }

    /// Inverse of [`vect`](Self::vect).
    pub fn unvect(&self, v: &[C64]) -> ComplexMatrix {
        let parts: Vec<ComplexMatrix> = self
            .algebra
            .blocks()
            .iter()
            .zip(self.tau.weights())
            .enumerate()
            .map(|(k, (b, &w))| {
                let n = b.dim;
                let s = 1.0 / w.sqrt();
                let e: Vec<C64> = v[self.offsets[k]..self.offsets[k] + n * n]
                    .iter()
                    .map(|z| z * s)
                    .collect();
                ComplexMatrix::from_row_major(n, &e)
            })
            .collect();
        self.algebra.embed(&parts)
    }

    fn block_operator(
        &self,
        x: &ComplexMatrix,
        f: impl Fn(&ComplexMatrix, usize) -> ComplexMatrix,
    ) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (k, (xk, b)) in self
            .algebra
            .compress(x)
            .iter()
            .zip(self.algebra.blocks())
            .enumerate()
        {
            let m = f(xk, b.dim);
            let o = self.offsets[k];
            let s = b.dim * b.dim;
            for i in 0..s {
                for j in 0..s {
                    out[(o + i, o + j)] = m[(i, j)];
                }
            }
        }
        out
    }

    /// `π(x)`: left multiplication, `a_k ⊗ 1` per block.
    pub fn left(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.block_operator(x, |a, n| kron(a, &ComplexMatrix::identity(n)))
    }

    /// Right multiplication `v ↦ v·x`, `1 ⊗ x_kᵀ` per block; an element of `π(A)′`.
    pub fn right(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.block_operator(x, |a, n| kron(&ComplexMatrix::identity(n), &a.transpose()))
    }

    /// Images `π(x)` of an algebra basis, for instance to build commutants on `H`.
    pub fn represent(&self, alg: &MultiMatrixAlgebra) -> Vec<ComplexMatrix> {
        alg.basis().iter().map(|b| self.left(b)).collect()
    }

    /// `vect(1)`.
    pub fn unit_vector(&self) -> Vec<C64> {
        self.vect(&self.algebra.identity())
    }

    /// `ξ_φ = vect(ρ^{1/2})`, so that `⟨ξ_φ, π(x) ξ_φ⟩ = φ(x)`.
    pub fn vector_of(&self, phi: &State) -> Result<Vec<C64>> {
        let phi = self.express(phi)?;
        let r = phi.rho().sqrt()?;
        Ok(self.vect(r.matrix()))
    }

    /// `phi` relative to this form's trace.
    pub fn express(&self, phi: &State) -> Result<State> {
        let base = State::trace_functional(self.algebra.clone(), self.tau.clone());
        align(&base, phi)
    }

    /// Worst `‖[π(a), r(b)]‖_F` over basis pairs.
    pub fn commutation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in self.algebra.basis() {
            let la = self.left(a);
            for b in self.algebra.basis() {
                worst = worst.max(la.commutator(&self.right(b)).frobenius_norm());
            }
        }
        worst
    }

    /// Numerical rank of `{π(b_i) vect(1)}`; equals `dim A` since `vect(1)` is cyclic.
    pub fn cyclic_rank(&self) -> usize {
        let one = self.unit_vector();
        let vs: Vec<Vec<C64>> = self
            .algebra
            .basis()
            .iter()
            .map(|b| self.left(b).apply(&one))
            .collect();
        crate::matrix::linalg::orthonormalize(&vs, 1e-10).len()
    }
}

/// `Δ_{ψ,φ} = π(ρ_ψ) r(ρ_φ^{-1})`, acting as `vect(x) ↦ vect(ρ_ψ x ρ_φ^{-1})`.
#[derive(Clone, Debug)]
pub struct RelativeModularOperator {
    pub matrix: HermitianMatrix,
    pub spectrum: EigenSystem,
}

impl RelativeModularOperator {
    pub fn new(form: &StandardForm, phi: &State, psi: &State) -> Result<Self> {
        let phi = form.express(phi)?;
        let psi = form.express(psi)?;
        let l = form.left(psi.rho().matrix());
        let r = form.right(phi.rho().pinv().matrix());
        let matrix = HermitianMatrix::hermitize(&l * &r);
        let spectrum = herm_eig(&matrix);
        Ok(Self { matrix, spectrum })
    }

    /// `∫ f(s) d⟨ξ, e_s ξ⟩` paired with `log`: `−⟨ξ, log Δ ξ⟩`, `+∞` if `ξ`
    /// charges the kernel.
    pub fn neg_log_expectation(&self, xi: &[C64]) -> f64 {
        let es = &self.spectrum;
        let cutoff = SUPPORT_CUTOFF * es.max_abs_eigenvalue();
        let xi_norm: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
        let mut total = 0.0;
        for (k, &s) in es.eigenvalues.iter().enumerate() {
            let u = es.vector(k);
            let c: C64 = u.iter().zip(xi).map(|(a, b)| a.conj() * b).sum();
            let weight = c.norm_sqr();
            if s <= cutoff {
                if weight > 1e-12 * xi_norm {
                    return f64::INFINITY;
                }
                continue;
            }
            total -= s.ln() * weight;
        }
        total
    }
}

/// Araki's `S(φ‖ψ) = −⟨ξ_φ, log Δ_{ψ,φ} ξ_φ⟩` computed on the standard form.
pub fn rel_entropy_modular(phi: &State, psi: &State) -> Result<f64> {
    if phi.algebra().ambient_dim() != psi.algebra().ambient_dim() {
        return Err(Error::AlgebraMismatch);
    }
    let form = StandardForm::new(phi.algebra_arc().clone(), phi.tau().clone());
    let delta = RelativeModularOperator::new(&form, phi, psi)?;
    let xi = form.vector_of(phi)?;
    Ok(delta.neg_log_expectation(&xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relent::rel_entropy_closed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(
        alg: &Arc<MultiMatrixAlgebra>,
        tau: &TraceWeight,
        rng: &mut ChaCha8Rng,
    ) -> State {
        let x = alg.random_element(rng);
        let sigma = &x * &x.adjoint();
        State::from_ambient_density(alg.clone(), tau.clone(), &sigma)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn actions_commute_and_unit_is_cyclic() {
        let a = Arc::new(MultiMatrixAlgebra::from_blocks(&[(2, 1), (1, 2)]));
        let f = StandardForm::new(a.clone(), TraceWeight::normalized(&a));
        assert_eq!(f.dim(), 5);
        assert!(f.commutation_residual() < 1e-12);
        assert_eq!(f.cyclic_rank(), 5);
    }

    #[test]
    fn vector_state_reproduces_functional() {
        let a = Arc::new(MultiMatrixAlgebra::full(3));
        let tau = TraceWeight::normalized(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = random_state(&a, &tau, &mut rng);
        let f = StandardForm::new(a.clone(), tau);
        let xi = f.vector_of(&phi).unwrap();
        let x = a.random_element(&mut rng);
        let lhs: C64 = xi
            .iter()
            .zip(f.left(&x).apply(&xi))
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((lhs - phi.value(&x)).norm() < 1e-12);
        let back = f.unvect(&f.vect(&x));
        assert!((&back - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn delta_action() {
        let a = Arc::new(MultiMatrixAlgebra::full(2));
        let tau = TraceWeight::normalized(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = random_state(&a, &tau, &mut rng);
        let psi = random_state(&a, &tau, &mut rng);
        let f = StandardForm::new(a.clone(), tau);
        let d = RelativeModularOperator::new(&f, &phi, &psi).unwrap();
        let x = a.random_element(&mut rng);
        let expect = &(psi.rho().matrix() * &x) * phi.rho().pinv().matrix();
        let got = f.unvect(&d.matrix.apply(&f.vect(&x)));
        assert!((&got - &expect).frobenius_norm() < 1e-9);
    }

    #[test]
    fn routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for blocks in [vec![(2, 1)], vec![(3, 1)], vec![(2, 1), (1, 2)]] {
            let a = Arc::new(MultiMatrixAlgebra::from_blocks(&blocks));
            let tau = TraceWeight::unnormalized(&a);
            let phi = random_state(&a, &tau, &mut rng);
            let psi = random_state(&a, &tau, &mut rng);
            let c = rel_entropy_closed(&phi, &psi).unwrap();
            let m = rel_entropy_modular(&phi, &psi).unwrap();
            assert!((c - m).abs() < 1e-10, "{c} vs {m}");
        }
    }

    #[test]
    fn trace_reference_gives_rho_inverse() {
        let a = Arc::new(MultiMatrixAlgebra::full(2));
        let tau = TraceWeight::normalized(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = random_state(&a, &tau, &mut rng);
        let t = State::trace_functional(a.clone(), tau.clone());
        let v = rel_entropy_modular(&phi, &t).unwrap();
        let expected = crate::states::segal(&phi);
        assert!((v + expected).abs() < 1e-10);
    }
}
