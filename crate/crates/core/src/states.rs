//! Normal positive functionals as densities relative to a trace, and their
//! von Neumann and Segal entropies.

use std::sync::Arc;

use crate::algebra::{MultiMatrixAlgebra, TraceExpectation, TraceWeight};
use crate::error::{Error, Result};
use crate::matrix::{herm_eig, kron, ComplexMatrix, HermitianMatrix, C64, SUPPORT_CUTOFF};

/// Mass tolerance for states.
pub const MASS_TOL: f64 = 1e-10;
/// Densities may dip this far below zero (relative to their norm).
pub const PSD_TOL: f64 = 1e-10;

/// `φ(x) = τ(ρx)` for a density `ρ ∈ A` relative to the trace `τ`.
///
/// The same type carries unnormalized positive functionals (`ψ` with any
/// mass `τ(ρ) > 0`); [`State::is_state`] tells them apart.
#[derive(Clone, Debug)]
pub struct State {
    algebra: Arc<MultiMatrixAlgebra>,
    tau: TraceWeight,
    rho: HermitianMatrix,
    mass: f64,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
}

impl State {
    /// A positive functional of any positive mass.
    pub fn functional(
        algebra: Arc<MultiMatrixAlgebra>,
        tau: TraceWeight,
        rho: HermitianMatrix,
    ) -> Result<Self> {
        if rho.dim() != algebra.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.ambient_dim(),
                got: rho.dim(),
            });
        }
        if !rho.is_finite() {
            return Err(Error::NonFinite);
        }
        if tau.weights().len() != algebra.blocks().len() {
            return Err(Error::AlgebraMismatch);
        }
        algebra.check_member(rho.matrix())?;
        let (lo, hi) = block_spectrum_range(&algebra, &rho);
        if lo < -PSD_TOL * hi.abs().max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue: lo });
        }
        let mass = tau.eval(rho.matrix()).re;
        if !(mass > 0.0) {
            return Err(Error::NonPositive(mass));
        }
        Ok(Self {
            algebra,
            tau,
            rho,
            mass,
            min_eigenvalue: lo,
            max_eigenvalue: hi,
        })
    }

    /// A state: the density must satisfy `τ(ρ) = 1`.
    pub fn new(
        algebra: Arc<MultiMatrixAlgebra>,
        tau: TraceWeight,
        rho: HermitianMatrix,
    ) -> Result<Self> {
        let s = Self::functional(algebra, tau, rho)?;
        if (s.mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Mass {
                expected: 1.0,
                got: s.mass,
            });
        }
        Ok(s)
    }

    /// The functional `x ↦ Tr(σx)` on `A` for an ambient density `σ` on `ℂ^d`.
    pub fn from_ambient_density(
        algebra: Arc<MultiMatrixAlgebra>,
        tau: TraceWeight,
        sigma: &ComplexMatrix,
    ) -> Result<Self> {
        let p = algebra.project(sigma);
        let rho = tau.density().pinv().matrix() * &p;
        Self::functional(algebra, tau, HermitianMatrix::hermitize(rho))
    }

    /// The tracial state `τ(·)/τ(1)`.
    pub fn tracial(algebra: Arc<MultiMatrixAlgebra>, tau: TraceWeight) -> Self {
        let d = algebra.ambient_dim();
        let rho = HermitianMatrix::identity(d).scale(1.0 / tau.total());
        Self::functional(algebra, tau, rho).expect("identity is a valid density")
    }

    /// The trace itself as a positive functional (density 1).
    pub fn trace_functional(algebra: Arc<MultiMatrixAlgebra>, tau: TraceWeight) -> Self {
        let d = algebra.ambient_dim();
        Self::functional(algebra, tau, HermitianMatrix::identity(d))
            .expect("identity is a valid density")
    }

    /// Vector state `x ↦ ⟨v, x v⟩ / ‖v‖²`.
    pub fn vector(algebra: Arc<MultiMatrixAlgebra>, tau: TraceWeight, v: &[C64]) -> Result<Self> {
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if !(n2 > 0.0) {
            return Err(Error::NonPositive(n2));
        }
        let sigma = ComplexMatrix::outer(v, v).scale(1.0 / n2);
        let s = Self::from_ambient_density(algebra, tau, &sigma)?;
        s.normalized()
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn tau(&self) -> &TraceWeight {
        &self.tau
    }

    pub fn rho(&self) -> &HermitianMatrix {
        &self.rho
    }

    /// `φ(1) = τ(ρ)`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn is_state(&self) -> bool {
        (self.mass - 1.0).abs() <= MASS_TOL
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Faithful iff the density has no eigenvalue below the support cutoff.
    pub fn is_faithful(&self) -> bool {
        self.min_eigenvalue > SUPPORT_CUTOFF * self.max_eigenvalue
    }

    /// `φ(x) = τ(ρx)`.
    pub fn value(&self, x: &ComplexMatrix) -> C64 {
        self.tau.eval(&(self.rho.matrix() * x))
    }

    /// Density with respect to the ambient trace `Tr` on `ℂ^d`: `σ = Tρ`.
    pub fn ambient_density(&self) -> HermitianMatrix {
        HermitianMatrix::hermitize(self.tau.density().matrix() * self.rho.matrix())
    }

    /// Block components of the density.
    pub fn blocks(&self) -> Vec<HermitianMatrix> {
        self.algebra
            .compress(self.rho.matrix())
            .into_iter()
            .map(HermitianMatrix::hermitize)
            .collect()
    }

    /// Same functional, density re-expressed relative to `tau`.
    pub fn with_trace(&self, tau: &TraceWeight) -> Result<Self> {
        if tau.weights().len() != self.algebra.blocks().len() {
            return Err(Error::AlgebraMismatch);
        }
        let ratio = tau.density().pinv().matrix() * self.tau.density().matrix();
        let rho = HermitianMatrix::hermitize(&ratio * self.rho.matrix());
        Self::functional(self.algebra.clone(), tau.clone(), rho)
    }

    /// `λψ`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositive(lambda));
        }
        Self::functional(
            self.algebra.clone(),
            self.tau.clone(),
            self.rho.scale(lambda),
        )
    }

    /// `ψ / ψ(1)`.
    pub fn normalized(&self) -> Result<Self> {
        self.scaled(1.0 / self.mass)
    }

    /// `φ ∘ Ad u`, i.e. `x ↦ φ(u x u*)`, with density `u* ρ u`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let rho = &(&u.adjoint() * self.rho.matrix()) * u;
        Self::functional(
            self.algebra.clone(),
            self.tau.clone(),
            HermitianMatrix::hermitize(rho),
        )
    }

    /// Convex combination `(1−t)·self + t·other` on the same algebra and trace.
    pub fn mix(&self, other: &State, t: f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.algebra.blocks() != other.algebra.blocks()
        {
            return Err(Error::AlgebraMismatch);
        }
        let other = other.with_trace(&self.tau)?;
        let rho = &self.rho.matrix().scale(1.0 - t) + &other.rho.matrix().scale(t);
        Self::functional(
            self.algebra.clone(),
            self.tau.clone(),
            HermitianMatrix::hermitize(rho),
        )
    }
}

fn block_spectrum_range(alg: &MultiMatrixAlgebra, rho: &HermitianMatrix) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for b in alg.compress(rho.matrix()) {
        let ev = herm_eig(&HermitianMatrix::hermitize(b)).eigenvalues;
        lo = lo.min(ev[0]);
        hi = hi.max(*ev.last().unwrap());
    }
    (lo, hi)
}

/// `η(s) = s log s` with `η(s) = 0` below the support cutoff.
pub(crate) fn eta(s: f64, cutoff: f64) -> f64 {
    if s <= cutoff {
        0.0
    } else {
        s * s.ln()
    }
}

/// Per-block eigenvalues with the block weight, `[(w_k, spectrum of ρ_k)]`.
pub(crate) fn weighted_spectra(phi: &State) -> Vec<(f64, Vec<f64>)> {
    phi.blocks()
        .iter()
        .zip(phi.tau.weights())
        .map(|(b, &w)| (w, herm_eig(b).eigenvalues))
        .collect()
}

/// Von Neumann entropy `−Tr(σ log σ)` of a state on a factor, `σ` taken relative
/// to the unnormalized trace of the factor.
pub fn s_vn(phi: &State) -> Result<f64> {
    if !phi.algebra.is_factor() {
        return Err(Error::NotFactor {
            blocks: phi.algebra.blocks().len(),
        });
    }
    if !phi.is_state() {
        return Err(Error::Mass {
            expected: 1.0,
            got: phi.mass,
        });
    }
    let (w, ev) = &weighted_spectra(phi)[0];
    let sigma: Vec<f64> = ev.iter().map(|l| l * w).collect();
    let cutoff = SUPPORT_CUTOFF * sigma.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    Ok(-sigma.iter().map(|&s| eta(s, cutoff)).sum::<f64>())
}

/// Segal entropy `S_τ(φ) = −τ(ρ log ρ)` with `ρ` the density relative to `tau`.
pub fn s_tau(phi: &State, tau: &TraceWeight) -> Result<f64> {
    let phi = if tau == phi.tau() {
        phi.clone()
    } else {
        phi.with_trace(tau)?
    };
    Ok(segal(&phi))
}

/// Like [`s_tau`] but returns `−∞` for a non-faithful functional.
pub fn s_tau_strict(phi: &State, tau: &TraceWeight) -> Result<f64> {
    if !phi.is_faithful() {
        return Ok(f64::NEG_INFINITY);
    }
    s_tau(phi, tau)
}

pub(crate) fn segal(phi: &State) -> f64 {
    let spectra = weighted_spectra(phi);
    let cutoff = SUPPORT_CUTOFF
        * spectra
            .iter()
            .flat_map(|(_, e)| e.iter())
            .fold(0.0f64, |m, s| m.max(s.abs()));
    -spectra
        .iter()
        .map(|(w, ev)| w * ev.iter().map(|&s| eta(s, cutoff)).sum::<f64>())
        .sum::<f64>()
}

/// The same functional relative to `λτ`: the density becomes `ρ/λ`.
pub fn rescale_trace(phi: &State, lambda: f64) -> Result<State> {
    let tau = phi.tau().scaled(lambda)?;
    State::functional(phi.algebra.clone(), tau, phi.rho().scale(1.0 / lambda))
}

/// `φ₁ ⊗ φ₂` on `A₁ ⊗ A₂` relative to `τ₁ ⊗ τ₂`.
pub fn tensor_state(phi1: &State, phi2: &State) -> Result<State> {
    let alg = Arc::new(MultiMatrixAlgebra::tensor(&phi1.algebra, &phi2.algebra));
    let weights: Vec<f64> = phi1
        .tau
        .weights()
        .iter()
        .flat_map(|a| phi2.tau.weights().iter().map(move |b| a * b))
        .collect();
    let tau = TraceWeight::from_weights(&alg, &weights)?;
    let rho = HermitianMatrix::hermitize(kron(phi1.rho.matrix(), phi2.rho.matrix()));
    State::functional(alg, tau, rho)
}

/// `φ|_B` with density `ε(ρ)` relative to `τ|_B`.
pub fn restrict(phi: &State, sub: &Arc<MultiMatrixAlgebra>) -> Result<State> {
    if !phi.algebra.contains_algebra(sub) {
        return Err(Error::NotInAlgebra {
            residual: phi.algebra.subalgebra_residual(sub),
        });
    }
    let eps = TraceExpectation::new(sub, &phi.tau);
    restrict_with(phi, sub, &eps)
}

/// Restriction using a precomputed expectation onto `sub`.
pub fn restrict_with(
    phi: &State,
    sub: &Arc<MultiMatrixAlgebra>,
    eps: &TraceExpectation,
) -> Result<State> {
    let tau_b = phi.tau.restrict_to(sub)?;
    let rho = eps.apply_hermitian(&phi.rho);
    State::functional(sub.clone(), tau_b, rho)
}

/// `ψ ∘ ε` as a functional on `A`, for `ψ` given on the subalgebra `B = range ε`.
///
/// With `ρ_ψ` the density relative to `τ|_B`, `τ(ρ_ψ ε(x)) = τ(ρ_ψ x)`, so the
/// extension has the same density relative to `τ`.
pub fn extend_through(
    psi_b: &State,
    ambient: &Arc<MultiMatrixAlgebra>,
    tau: &TraceWeight,
) -> Result<State> {
    let psi_b = psi_b.with_trace(&tau.restrict_to(psi_b.algebra())?)?;
    State::functional(ambient.clone(), tau.clone(), psi_b.rho().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    fn m(n: usize) -> Arc<MultiMatrixAlgebra> {
        Arc::new(MultiMatrixAlgebra::full(n))
    }

    fn state(n: usize, diag: &[f64]) -> State {
        let a = m(n);
        let tau = TraceWeight::normalized(&a);
        let w = tau.weights()[0];
        let rho = HermitianMatrix::from_real_diag(&diag.iter().map(|x| x / w).collect::<Vec<_>>());
        State::new(a, tau, rho).unwrap()
    }

    #[test]
    fn von_neumann_values() {
        let a = m(2);
        let tr = TraceWeight::unnormalized(&a);
        let mixed = State::tracial(a.clone(), tr.clone());
        assert!((s_vn(&mixed).unwrap() - std::f64::consts::LN_2).abs() < 1e-14);
        let s = State::new(a, tr, HermitianMatrix::from_real_diag(&[0.75, 0.25])).unwrap();
        assert!((s_vn(&s).unwrap() - 0.5623351446188083).abs() < 1e-12);
    }

    #[test]
    fn segal_values() {
        let s = state(2, &[0.75, 0.25]);
        assert!((s.rho()[(0, 0)].re - 1.5).abs() < 1e-14);
        let v = s_tau(&s, s.tau()).unwrap();
        assert!((v - (0.5623351446188083 - std::f64::consts::LN_2)).abs() < 1e-12);
        let pure = state(2, &[1.0, 0.0]);
        assert!((s_tau(&pure, pure.tau()).unwrap() + std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(s_tau_strict(&pure, pure.tau()).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn trace_change_shifts_entropy() {
        let s = state(2, &[0.75, 0.25]);
        let tr = TraceWeight::unnormalized(s.algebra());
        let a = s_tau(&s, s.tau()).unwrap();
        let b = s_tau(&s, &tr).unwrap();
        assert!((b - a - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((b - s_vn(&s.with_trace(&tr).unwrap()).unwrap()).abs() < 1e-12);
        let r = rescale_trace(&s, 5.0).unwrap();
        assert!((s_tau(&r, r.tau()).unwrap() - a - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_densities() {
        let a = m(2);
        let tau = TraceWeight::normalized(&a);
        assert!(matches!(
            State::new(
                a.clone(),
                tau.clone(),
                HermitianMatrix::from_real_diag(&[1.0, 1.0]).scale(0.5)
            ),
            Err(Error::Mass { .. })
        ));
        assert!(matches!(
            State::new(a, tau, HermitianMatrix::from_real_diag(&[2.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn bell_state_restriction() {
        let a = m(4);
        let tau = TraceWeight::normalized(&a);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = vec![ONE * s, C64::new(0.0, 0.0), C64::new(0.0, 0.0), ONE * s];
        let bell = State::vector(a, tau, &v).unwrap();
        let b = Arc::new(MultiMatrixAlgebra::tensor_left(2, 2));
        let r = restrict(&bell, &b).unwrap();
        assert!(r.is_state());
        assert!(s_tau(&r, r.tau()).unwrap().abs() < 1e-12);
        assert!((s_tau(&bell, bell.tau()).unwrap() + 4f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn tensor_additivity() {
        let p = state(2, &[1.0, 0.0]);
        let t = tensor_state(&p, &p).unwrap();
        assert!((s_tau(&t, t.tau()).unwrap() + 4f64.ln()).abs() < 1e-12);
    }
}
