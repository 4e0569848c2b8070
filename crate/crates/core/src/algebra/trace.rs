use super::MultiMatrixAlgebra;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64};

/// Faithful trace `τ = Σ_k w_k Tr_{M_{n_k}}` on a multi-matrix algebra.
///
/// Internally the trace is also stored as its ambient central density
/// `T = Σ_k (w_k / m_k) P_k`, so that `τ(x) = Tr(T x)` for `x ∈ A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWeight {
    weights: Vec<f64>,
    density: HermitianMatrix,
}

impl TraceWeight {
    pub fn from_weights(alg: &MultiMatrixAlgebra, weights: &[f64]) -> Result<Self> {
        if weights.len() != alg.blocks().len() {
            return Err(Error::DimensionMismatch {
                expected: alg.blocks().len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::NonFaithfulTrace);
        }
        let mut t = ComplexMatrix::zeros(alg.ambient_dim());
        for ((p, b), &w) in alg
            .central_projections()
            .iter()
            .zip(alg.blocks())
            .zip(weights)
        {
            t += &p.matrix().scale(w / b.multiplicity as f64);
        }
        Ok(Self {
            weights: weights.to_vec(),
            density: HermitianMatrix::hermitize(t),
        })
    }

    /// Minimal projections have trace 1.
    pub fn unnormalized(alg: &MultiMatrixAlgebra) -> Self {
        Self::from_weights(alg, &vec![1.0; alg.blocks().len()]).expect("unit weights")
    }

    /// `τ(1) = 1`, each block weighted proportionally to its size.
    pub fn normalized(alg: &MultiMatrixAlgebra) -> Self {
        let total: usize = alg.blocks().iter().map(|b| b.dim).sum();
        Self::from_weights(alg, &vec![1.0 / total as f64; alg.blocks().len()])
            .expect("positive weights")
    }

    /// Restriction of an ambient trace `Tr(T ·)` to `alg`; `T` is projected onto `alg`.
    pub fn from_ambient_density(alg: &MultiMatrixAlgebra, t: &ComplexMatrix) -> Result<Self> {
        let c = alg.project(t);
        let weights: Vec<f64> = alg
            .central_projections()
            .iter()
            .zip(alg.blocks())
            .map(|(p, b)| {
                let rank = (b.dim * b.multiplicity) as f64;
                p.trace_product(&c).re / rank * b.multiplicity as f64
            })
            .collect();
        Self::from_weights(alg, &weights)
    }

    /// The restriction `τ|_B` to a subalgebra.
    pub fn restrict_to(&self, sub: &MultiMatrixAlgebra) -> Result<Self> {
        Self::from_ambient_density(sub, self.density.matrix())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Ambient central density `T`.
    pub fn density(&self) -> &HermitianMatrix {
        &self.density
    }

    /// `τ(x) = Tr(T x)`; no membership check.
    pub fn eval(&self, x: &ComplexMatrix) -> C64 {
        self.density.trace_product(x)
    }

    /// `τ(1)`.
    pub fn total(&self) -> f64 {
        self.density.trace_re()
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositive(lambda));
        }
        let w: Vec<f64> = self.weights.iter().map(|w| w * lambda).collect();
        Ok(Self {
            weights: w,
            density: self.density.scale(lambda),
        })
    }

    pub fn is_normalized(&self) -> bool {
        (self.total() - 1.0).abs() < 1e-12
    }
}

/// `τ(x)` after checking that `x` lies in the algebra.
pub fn trace_of(tau: &TraceWeight, alg: &MultiMatrixAlgebra, x: &ComplexMatrix) -> Result<C64> {
    alg.check_member(x)?;
    if tau.weights.len() != alg.blocks().len() {
        return Err(Error::AlgebraMismatch);
    }
    let parts = alg.compress(x);
    Ok(parts
        .iter()
        .zip(&tau.weights)
        .map(|(p, w)| p.trace() * *w)
        .sum())
}
