//! Inclusions `B ⊂ A`, their trace-preserving conditional expectations and
//! the index and entropy-gap quantities attached to them.

mod dual;
mod index;
mod tower;

use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{MultiMatrixAlgebra, TraceExpectation, TraceWeight};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::relent::rel_entropy_closed;
use crate::states::{extend_through, restrict_with, s_tau, State};

pub use dual::{dual_expectation, xu_identity, DualExpectation, XuReport};
pub use index::{pp_index_cp, pp_index_positive, ChoiCertificate, IndexReport, PositiveSearch};
pub use tower::{tower_gap_formula, LevelReport, Tower};

/// Residuals measured when an expectation is validated.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExpectationCheck {
    pub unital: f64,
    pub idempotent: f64,
    pub bimodule: f64,
    pub trace: f64,
    /// Most negative eigenvalue of `ε(aa*)` seen, relative to its norm.
    pub positivity: f64,
}

impl ExpectationCheck {
    pub fn passes(&self) -> bool {
        self.unital < 1e-10
            && self.idempotent < 1e-10
            && self.bimodule < 1e-9
            && self.trace < 1e-10
            && self.positivity > -1e-10
    }
}

/// `B ⊂ A` with the `τ`-preserving conditional expectation `ε: A → B`.
#[derive(Debug)]
pub struct Inclusion {
    ambient: Arc<MultiMatrixAlgebra>,
    sub: Arc<MultiMatrixAlgebra>,
    tau: TraceWeight,
    eps: TraceExpectation,
    check: ExpectationCheck,
    index: OnceLock<IndexReport>,
}

impl Clone for Inclusion {
    fn clone(&self) -> Self {
        let index = OnceLock::new();
        if let Some(r) = self.index.get() {
            let _ = index.set(r.clone());
        }
        Self {
            ambient: self.ambient.clone(),
            sub: self.sub.clone(),
            tau: self.tau.clone(),
            eps: self.eps.clone(),
            check: self.check,
            index,
        }
    }
}

/// Builds the trace-preserving expectation of `ambient` onto `sub` and checks
/// every expectation invariant on random elements.
pub fn trace_expectation(
    ambient: Arc<MultiMatrixAlgebra>,
    sub: Arc<MultiMatrixAlgebra>,
    tau: TraceWeight,
) -> Result<Inclusion> {
    Inclusion::new(ambient, sub, tau)
}

impl Inclusion {
    pub fn new(
        ambient: Arc<MultiMatrixAlgebra>,
        sub: Arc<MultiMatrixAlgebra>,
        tau: TraceWeight,
    ) -> Result<Self> {
        if sub.ambient_dim() != ambient.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.ambient_dim(),
                got: sub.ambient_dim(),
            });
        }
        if tau.weights().len() != ambient.blocks().len() {
            return Err(Error::AlgebraMismatch);
        }
        let residual = ambient.subalgebra_residual(&sub);
        if residual >= 1e-9 {
            return Err(Error::NotInAlgebra { residual });
        }
        let eps = TraceExpectation::new(&sub, &tau);
        let mut inc = Self {
            ambient,
            sub,
            tau,
            eps,
            check: ExpectationCheck::default(),
            index: OnceLock::new(),
        };
        inc.check = inc.validate(0x5eed);
        if !inc.check.passes() {
            return Err(Error::InvalidExpectation(format!("{:?}", inc.check)));
        }
        Ok(inc)
    }

    pub fn ambient(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.ambient
    }

    pub fn sub(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.sub
    }

    pub fn tau(&self) -> &TraceWeight {
        &self.tau
    }

    /// The same inclusion with `A`'s trace replaced by `tau`.
    pub fn with_trace(&self, tau: TraceWeight) -> Result<Self> {
        Self::new(self.ambient.clone(), self.sub.clone(), tau)
    }

    pub fn expectation(&self) -> &TraceExpectation {
        &self.eps
    }

    pub fn check(&self) -> &ExpectationCheck {
        &self.check
    }

    /// `ε(x)`.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.eps.apply(x)
    }

    /// Measures every invariant on random elements drawn from `seed`.
    pub fn validate(&self, seed: u64) -> ExpectationCheck {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = self.ambient.identity();
        let unital = (&self.apply(&one) - &one).frobenius_norm() / one.frobenius_norm();
        let mut out = ExpectationCheck {
            unital,
            positivity: f64::INFINITY,
            ..Default::default()
        };
        for _ in 0..3 {
            let x = self.ambient.random_element(&mut rng);
            let nx = x.frobenius_norm();
            let ex = self.apply(&x);
            out.idempotent = out
                .idempotent
                .max((&self.apply(&ex) - &ex).frobenius_norm() / nx);
            out.trace = out
                .trace
                .max((self.tau.eval(&ex) - self.tau.eval(&x)).norm() / nx);
            // ε(bxc) = b ε(x) c is bilinear in (b, c): generic pairs decide it.
            let pairs: Vec<(ComplexMatrix, ComplexMatrix)> = if self.sub.linear_dim() <= 16 {
                let b = self.sub.basis();
                b.iter()
                    .flat_map(|p| b.iter().map(move |q| (p.clone(), q.clone())))
                    .collect()
            } else {
                (0..3)
                    .map(|_| {
                        (
                            self.sub.random_element(&mut rng),
                            self.sub.random_element(&mut rng),
                        )
                    })
                    .collect()
            };
            for (b, c) in pairs {
                let lhs = self.apply(&(&(&b * &x) * &c));
                let rhs = &(&b * &ex) * &c;
                let scale = b.frobenius_norm() * c.frobenius_norm() * nx;
                out.bimodule = out.bimodule.max((&lhs - &rhs).frobenius_norm() / scale);
            }
            let a = self.ambient.random_element(&mut rng);
            let pos = HermitianMatrix::hermitize(self.apply(&(&a * &a.adjoint())));
            let lo = pos.eigenvalues()[0] / pos.norm().max(1e-300);
            out.positivity = out.positivity.min(lo);
        }
        out
    }

    /// Cached index report with the default search.
    pub fn index_report(&self) -> &IndexReport {
        self.index
            .get_or_init(|| index::index_report(self, &PositiveSearch::default()))
    }

    /// `S_τ(φ|_B) − S_τ(φ)` against `log` of the positive index.
    pub fn entropy_gap_bound(&self, phi: &State) -> Result<GapReport> {
        entropy_gap_bound(self, phi)
    }

    /// `φ|_B` relative to `τ|_B`.
    pub fn restrict(&self, phi: &State) -> Result<State> {
        let phi = self.express(phi)?;
        restrict_with(&phi, &self.sub, &self.eps)
    }

    /// `φ ∘ ε` as a functional on `A`.
    pub fn compose(&self, phi: &State) -> Result<State> {
        let phi_b = self.restrict(phi)?;
        extend_through(&phi_b, &self.ambient, &self.tau)
    }

    /// `phi` relative to the inclusion's trace.
    pub fn express(&self, phi: &State) -> Result<State> {
        let base = State::trace_functional(self.ambient.clone(), self.tau.clone());
        crate::relent::align(&base, phi)
    }
}

/// Entropy increase under restriction and the index bound it obeys.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    /// `S_τ(φ|_B) − S_τ(φ)`.
    pub gap: f64,
    /// `log` of the positive Pimsner–Popa index.
    pub bound: f64,
    /// `bound − gap`.
    pub slack: f64,
    /// `S(φ‖φ∘ε)`.
    pub relative_entropy: f64,
    /// `|gap − S(φ‖φ∘ε)|`.
    pub route_residual: f64,
}

pub fn entropy_gap_bound(inc: &Inclusion, phi: &State) -> Result<GapReport> {
    let phi = inc.express(phi)?;
    let phi_b = inc.restrict(&phi)?;
    let gap = s_tau(&phi_b, phi_b.tau())? - s_tau(&phi, inc.tau())?;
    let bound = inc.index_report().pp_positive.ln();
    let relative_entropy = rel_entropy_closed(&phi, &inc.compose(&phi)?)?;
    let route_residual = if gap.is_finite() {
        (gap - relative_entropy).abs()
    } else {
        0.0
    };
    Ok(GapReport {
        gap,
        bound,
        slack: bound - gap,
        relative_entropy,
        route_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{kron, partial_trace, Side, C64};

    pub(crate) fn m2_in_m4(tau_normalized: bool) -> Inclusion {
        let a = Arc::new(MultiMatrixAlgebra::full(4));
        let b = Arc::new(MultiMatrixAlgebra::tensor_left(2, 2));
        let tau = if tau_normalized {
            TraceWeight::normalized(&a)
        } else {
            TraceWeight::unnormalized(&a)
        };
        Inclusion::new(a, b, tau).unwrap()
    }

    #[test]
    fn identity_when_equal() {
        let a = Arc::new(MultiMatrixAlgebra::full(3));
        let inc = Inclusion::new(a.clone(), a.clone(), TraceWeight::normalized(&a)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = a.random_element(&mut rng);
        assert!((&inc.apply(&x) - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn scalars_give_the_trace() {
        let a = Arc::new(MultiMatrixAlgebra::full(3));
        let tau = TraceWeight::normalized(&a);
        let inc = Inclusion::new(
            a.clone(),
            Arc::new(MultiMatrixAlgebra::scalars(3)),
            tau.clone(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = a.random_element(&mut rng);
        let expected = ComplexMatrix::identity(3).scale_c(tau.eval(&x));
        assert!((&inc.apply(&x) - &expected).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tensor_factor_expectation() {
        let inc = m2_in_m4(true);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = inc.ambient().random_element(&mut rng);
        let expected = kron(
            &partial_trace(&x, (2, 2), Side::Right).unwrap().scale(0.5),
            &ComplexMatrix::identity(2),
        );
        assert!((&inc.apply(&x) - &expected).frobenius_norm() < 1e-12);
        assert!(inc.check().passes());
    }

    #[test]
    fn rejects_non_subalgebra() {
        let a = Arc::new(MultiMatrixAlgebra::diagonal(2));
        let b = Arc::new(MultiMatrixAlgebra::full(2));
        assert!(matches!(
            Inclusion::new(a.clone(), b, TraceWeight::normalized(&a)),
            Err(Error::NotInAlgebra { .. })
        ));
    }

    #[test]
    fn bell_gap_attains_log4() {
        let inc = m2_in_m4(true);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let v = vec![C64::new(s, 0.0), z, z, C64::new(s, 0.0)];
        let bell = State::vector(inc.ambient().clone(), inc.tau().clone(), &v).unwrap();
        let r = inc.entropy_gap_bound(&bell).unwrap();
        assert!((r.gap - 4f64.ln()).abs() < 1e-10);
        assert!(r.slack.abs() < 1e-8);
        assert!(r.route_residual < 1e-9);
    }
}
