//! The dual inclusion `A′ ⊂ B′` on the standard form of `A`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Inclusion;
use crate::algebra::{commutant, MultiMatrixAlgebra, TraceWeight};
use crate::error::{Error, Result};
use crate::matrix::{linalg, ComplexMatrix, C64};
use crate::relent::{rel_entropy_closed, StandardForm};
use crate::states::{extend_through, restrict_with, State};

const COMMUTANT_SEED: u64 = 0xd0a1;

/// `ε′: B′ → A′`, the trace-preserving expectation for `Tr_H` on `B′`, with the
/// scalar `c` of `ε⁻¹ = c·ε′`.
#[derive(Clone, Debug)]
pub struct DualExpectation {
    pub form: StandardForm,
    pub a_prime: Arc<MultiMatrixAlgebra>,
    pub b_prime: Arc<MultiMatrixAlgebra>,
    /// `A′ ⊂ B′` with its expectation.
    pub inclusion: Inclusion,
    /// Jones projection onto `vect(B)`.
    pub jones_projection: ComplexMatrix,
    pub scalar: f64,
    /// Worst relative residual of `a′b′ = c·ε′(a′ e_B b′)`.
    pub residual: f64,
}

impl DualExpectation {
    pub fn tau(&self) -> &TraceWeight {
        self.inclusion.tau()
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.inclusion.apply(x)
    }
}

/// Builds `ε′` and checks `ε⁻¹(a′ e_B b′) = a′b′` on `A′`, which pins the scalar.
pub fn dual_expectation(inc: &Inclusion) -> Result<DualExpectation> {
    let form = StandardForm::new(inc.ambient().clone(), inc.tau().clone());
    let d = form.dim();
    let a_prime = Arc::new(commutant(
        &form.represent(inc.ambient()),
        d,
        COMMUTANT_SEED,
    )?);
    let b_prime = Arc::new(commutant(&form.represent(inc.sub()), d, COMMUTANT_SEED)?);
    let r = b_prime.subalgebra_residual(&a_prime);
    if r > 1e-9 {
        return Err(Error::DualValidation(format!(
            "A′ not contained in B′ (residual {r:.3e})"
        )));
    }
    let tau_b = TraceWeight::from_ambient_density(&b_prime, &ComplexMatrix::identity(d))?;
    let inclusion = Inclusion::new(b_prime.clone(), a_prime.clone(), tau_b)?;

    let vs: Vec<Vec<C64>> = inc.sub().basis().iter().map(|b| form.vect(b)).collect();
    let mut e_b = ComplexMatrix::zeros(d);
    for v in linalg::orthonormalize(&vs, 1e-10) {
        e_b += &ComplexMatrix::outer(&v, &v);
    }

    let elements: Vec<ComplexMatrix> = if a_prime.linear_dim() <= 16 {
        a_prime.basis().to_vec()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(COMMUTANT_SEED);
        (0..6).map(|_| a_prime.random_element(&mut rng)).collect()
    };
    let mut pairs = Vec::with_capacity(elements.len() * elements.len());
    for a in &elements {
        for b in &elements {
            pairs.push((a * b, inclusion.apply(&(&(a * &e_b) * b))));
        }
    }
    let (num, den) = pairs.iter().fold((0.0, 0.0), |(n, m), (z, e)| {
        (n + e.inner(z).re, m + e.frobenius_norm().powi(2))
    });
    let scalar = num / den;
    let residual = pairs
        .iter()
        .map(|(z, e)| (z - &e.scale(scalar)).frobenius_norm() / z.frobenius_norm().max(1e-300))
        .fold(0.0, f64::max);
    if !(residual <= 1e-6) {
        return Err(Error::DualValidation(format!(
            "ε⁻¹ = c·ε′ fails (residual {residual:.3e})"
        )));
    }
    Ok(DualExpectation {
        form,
        a_prime,
        b_prime,
        inclusion,
        jones_projection: e_b,
        scalar,
        residual,
    })
}

/// `S_A(φ‖φ∘ε) + S_{B′}(φ′‖φ′∘ε′)` against `log c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XuReport {
    pub term_a: f64,
    pub term_b_prime: f64,
    pub log_index: f64,
    pub residual: f64,
    /// `false` when `φ` is not faithful, so `ξ_φ` is not cyclic.
    pub cyclic: bool,
}

pub fn xu_identity(inc: &Inclusion, phi: &State, dual: &DualExpectation) -> Result<XuReport> {
    let phi = inc.express(phi)?;
    let term_a = rel_entropy_closed(&phi, &inc.compose(&phi)?)?;
    let xi = dual.form.vector_of(&phi)?;
    let tau_b = dual.tau();
    let phi_p = State::from_ambient_density(
        dual.b_prime.clone(),
        tau_b.clone(),
        &ComplexMatrix::outer(&xi, &xi),
    )?;
    let on_a = restrict_with(&phi_p, &dual.a_prime, dual.inclusion.expectation())?;
    let composed = extend_through(&on_a, &dual.b_prime, tau_b)?;
    let term_b_prime = rel_entropy_closed(&phi_p, &composed)?;
    let log_index = dual.scalar.ln();
    let total = term_a + term_b_prime;
    let residual = if total.is_finite() {
        (total - log_index).abs()
    } else {
        f64::INFINITY
    };
    Ok(XuReport {
        term_a,
        term_b_prime,
        log_index,
        residual,
        cyclic: phi.is_faithful(),
    })
}
