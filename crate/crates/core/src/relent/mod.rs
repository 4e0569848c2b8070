//! Relative entropy: closed form, relative modular operator, Kosaki's
//! variational formula, and the chain-rule utilities built on them.

mod kosaki;
mod standard;

use std::sync::Arc;

use crate::algebra::{MultiMatrixAlgebra, TraceExpectation, TraceWeight};
use crate::error::{Error, Result};
use crate::matrix::{herm_eig, matrix_function, HermitianMatrix, SUPPORT_CUTOFF};
use crate::states::{eta, extend_through, restrict_with, State};

pub use kosaki::{kosaki_eval, KosakiGrid, OperatorSubspace};
pub use standard::{rel_entropy_modular, RelativeModularOperator, StandardForm};

/// Re-expresses `psi` on `phi`'s algebra and trace, so both densities can be
/// compared block by block.
pub fn align(phi: &State, psi: &State) -> Result<State> {
    if phi.algebra().ambient_dim() != psi.algebra().ambient_dim() {
        return Err(Error::AlgebraMismatch);
    }
    if !Arc::ptr_eq(phi.algebra_arc(), psi.algebra_arc()) {
        let a = phi.algebra();
        let b = psi.algebra();
        if a.linear_dim() != b.linear_dim() || a.subalgebra_residual(b) > 1e-9 {
            return Err(Error::AlgebraMismatch);
        }
    }
    let ratio = phi.tau().density().pinv().matrix() * psi.tau().density().matrix();
    let rho = HermitianMatrix::hermitize(&ratio * psi.rho().matrix());
    State::functional(phi.algebra_arc().clone(), phi.tau().clone(), rho)
}

/// `S(φ‖ψ) = τ(ρ_φ (log ρ_φ − log ρ_ψ))`, `+∞` unless `supp ρ_φ ⊆ supp ρ_ψ`.
pub fn rel_entropy_closed(phi: &State, psi: &State) -> Result<f64> {
    let psi = align(phi, psi)?;
    let rb = phi.blocks();
    let sb = psi.blocks();
    let scale_r = rb.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let scale_s = sb.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let mut total = 0.0;
    for ((r, s), &w) in rb.iter().zip(&sb).zip(phi.tau().weights()) {
        let er = herm_eig(r);
        let cut_r = SUPPORT_CUTOFF * scale_r;
        let self_term: f64 = er.eigenvalues.iter().map(|&l| eta(l, cut_r)).sum();
        let es = herm_eig(s);
        let cut_s = SUPPORT_CUTOFF * scale_s;
        let mut cross = 0.0;
        for (j, &sj) in es.eigenvalues.iter().enumerate() {
            let u = es.vector(j);
            let ru = r.apply(&u);
            let weight: f64 = u.iter().zip(&ru).map(|(a, b)| (a.conj() * b).re).sum();
            if sj <= cut_s {
                if weight > SUPPORT_CUTOFF * scale_r.max(1e-300) * 10.0 {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            cross += weight * sj.ln();
        }
        total += w * (self_term - cross);
    }
    Ok(total)
}

/// Chain-rule decomposition `S(φ‖ψ∘ε) = S(φ|_B‖ψ|_B) + S(φ‖φ∘ε)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PetzReport {
    pub lhs: f64,
    pub restriction: f64,
    pub expectation: f64,
    pub residual: f64,
}

/// Evaluates all three terms of the chain rule for the trace-preserving
/// expectation `eps` onto `sub`, each by the closed form.
pub fn petz_decompose(
    phi: &State,
    psi: &State,
    sub: &Arc<MultiMatrixAlgebra>,
    eps: &TraceExpectation,
) -> Result<PetzReport> {
    let psi = align(phi, psi)?;
    let phi_b = restrict_with(phi, sub, eps)?;
    let psi_b = restrict_with(&psi, sub, eps)?;
    let psi_eps = extend_through(&psi_b, phi.algebra_arc(), phi.tau())?;
    let phi_eps = extend_through(&phi_b, phi.algebra_arc(), phi.tau())?;
    let lhs = rel_entropy_closed(phi, &psi_eps)?;
    let restriction = rel_entropy_closed(&phi_b, &psi_b)?;
    let expectation = rel_entropy_closed(phi, &phi_eps)?;
    let residual = if lhs.is_finite() {
        (lhs - restriction - expectation).abs()
    } else {
        0.0
    };
    Ok(PetzReport {
        lhs,
        restriction,
        expectation,
        residual,
    })
}

/// `S(τ‖φ) = −τ(log ρ)` for the tracial state `τ`; `+∞` for non-faithful `φ`.
pub fn reverse_entropy(tau: &TraceWeight, phi: &State) -> Result<f64> {
    if !phi.is_faithful() {
        return Ok(f64::INFINITY);
    }
    let tr = State::tracial(phi.algebra_arc().clone(), tau.clone());
    rel_entropy_closed(&tr, phi)
}

/// The cutoff functional `ψ_k = τ(g_k(ρ) ·)` with `g_k(s) = min(1, k·s)`.
///
/// `ψ_k ≤ τ` increases to `τ` as `k → ∞` and equals `τ` once `k·min spec ρ ≥ 1`,
/// so `S(φ‖ψ_k)` decreases to `S(φ‖τ)`.
pub fn bounded_entropy_approximation(phi: &State, tau: &TraceWeight, k: usize) -> Result<State> {
    if k == 0 {
        return Err(Error::NonPositive(0.0));
    }
    let phi = phi.with_trace(tau)?;
    let kf = k as f64;
    let g = matrix_function(phi.rho(), |s| (kf * s).clamp(0.0, 1.0), false)?;
    State::functional(phi.algebra_arc().clone(), tau.clone(), g)
}
