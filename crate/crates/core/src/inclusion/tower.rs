//! Towers `B_1 ⊂ B_2 ⊂ …`, `A_1 ⊂ A_2 ⊂ …` with `B_i ⊂ A_i`, all inside the
//! top algebra and its trace.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Inclusion;
use crate::algebra::{MultiMatrixAlgebra, TraceExpectation, TraceWeight};
use crate::error::{Error, Result};
use crate::states::{s_tau, s_vn, State};

const COMPATIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<Inclusion>,
    tau: TraceWeight,
}

impl Tower {
    /// `levels[i] = (A_i, B_i)`; `tau` is a trace on the last `A`.
    pub fn new(
        levels: Vec<(Arc<MultiMatrixAlgebra>, Arc<MultiMatrixAlgebra>)>,
        tau: TraceWeight,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config("empty tower".into()));
        }
        let mut incs = Vec::with_capacity(levels.len());
        for (a, b) in &levels {
            incs.push(Inclusion::new(a.clone(), b.clone(), tau.restrict_to(a)?)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x70e5);
        for (i, w) in incs.windows(2).enumerate() {
            let (lo, hi) = (&w[0], &w[1]);
            for (x, y) in [(lo.ambient(), hi.ambient()), (lo.sub(), hi.sub())] {
                let r = y.subalgebra_residual(x);
                if r > 1e-9 {
                    return Err(Error::NotInAlgebra { residual: r });
                }
            }
            // ε_{B_{i+1}} ∘ ε_{A_i} = ε_{B_i} on A_{i+1}
            let onto_a = TraceExpectation::new(lo.ambient(), hi.tau());
            let onto_b = TraceExpectation::new(lo.sub(), hi.tau());
            let mut residual = 0.0f64;
            for _ in 0..4 {
                let x = hi.ambient().random_element(&mut rng);
                let lhs = hi.apply(&onto_a.apply(&x));
                let rhs = onto_b.apply(&x);
                residual = residual.max((&lhs - &rhs).frobenius_norm() / x.frobenius_norm());
            }
            if residual > COMPATIBILITY_TOL {
                return Err(Error::IncompatibleTower { level: i, residual });
            }
        }
        Ok(Self { levels: incs, tau })
    }

    /// `levels` copies of the same inclusion.
    pub fn constant(inc: &Inclusion, levels: usize) -> Result<Self> {
        Self::new(
            vec![(inc.ambient().clone(), inc.sub().clone()); levels],
            inc.tau().clone(),
        )
    }

    /// `M_2⊗M_2⊗1 ⊃ M_2⊗1⊗1` inside `M_8 ⊃ M_2⊗1⊗M_2`, normalized trace.
    pub fn tensor_chain() -> Result<Self> {
        let a1 = MultiMatrixAlgebra::tensor_left(4, 2);
        let b1 = MultiMatrixAlgebra::tensor_left(2, 4);
        let a2 = MultiMatrixAlgebra::full(8);
        let b2 = MultiMatrixAlgebra::tensor(
            &MultiMatrixAlgebra::tensor_left(2, 2),
            &MultiMatrixAlgebra::full(2),
        );
        let tau = TraceWeight::normalized(&a2);
        Self::new(
            vec![(Arc::new(a1), Arc::new(b1)), (Arc::new(a2), Arc::new(b2))],
            tau,
        )
    }

    pub fn levels(&self) -> &[Inclusion] {
        &self.levels
    }

    pub fn tau(&self) -> &TraceWeight {
        &self.tau
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelReport {
    pub level: usize,
    /// `n_i² = dim A_i`.
    pub n: f64,
    /// `m_i² = dim B_i`.
    pub m: f64,
    /// `S_vN(φ_i|_{B_i}) − S_vN(φ_i) + log(n_i/m_i)`.
    pub formula: f64,
    /// `S_τ(φ_i|_{B_i}) − S_τ(φ_i)`.
    pub tau_gap: f64,
    pub residual: f64,
    /// `n_i²/m_i²`.
    pub index_ratio: f64,
    pub pp_cp: f64,
}

/// Per-level gap formula for `phi` on the top algebra.
pub fn tower_gap_formula(tower: &Tower, phi: &State) -> Result<Vec<LevelReport>> {
    let phi = phi.with_trace(&tower.tau)?;
    let top = tower.levels.last().expect("non-empty").ambient().clone();
    let base = State::trace_functional(top, tower.tau.clone());
    let phi = crate::relent::align(&base, &phi)?;
    let mut out = Vec::with_capacity(tower.levels.len());
    for (level, inc) in tower.levels.iter().enumerate() {
        let phi_a = crate::states::restrict(&phi, inc.ambient())?;
        let phi_b = inc.restrict(&phi_a)?;
        let n = (inc.ambient().linear_dim() as f64).sqrt();
        let m = (inc.sub().linear_dim() as f64).sqrt();
        let formula = s_vn(&phi_b)? - s_vn(&phi_a)? + (n / m).ln();
        let tau_gap = s_tau(&phi_b, phi_b.tau())? - s_tau(&phi_a, phi_a.tau())?;
        out.push(LevelReport {
            level,
            n,
            m,
            formula,
            tau_gap,
            residual: (formula - tau_gap).abs(),
            index_ratio: (n / m).powi(2),
            pp_cp: inc.index_report().pp_cp,
        });
    }
    Ok(out)
}
