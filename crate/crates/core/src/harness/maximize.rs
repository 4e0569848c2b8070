//! Derivative-free search for the state maximizing `S_τ(φ|_B) − S_τ(φ)`.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State as _, TerminationReason};
use argmin::solver::neldermead::NelderMead;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::trial_seed;
use crate::error::Result;
use crate::inclusion::Inclusion;
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64};
use crate::states::{s_tau, State};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapBudget {
    pub restarts: usize,
    /// Nelder–Mead iterations per restart.
    pub iterations: u64,
    pub seed: u64,
    /// Start the first run at the index witness.
    pub use_witness: bool,
}

impl Default for GapBudget {
    fn default() -> Self {
        Self {
            restarts: 200,
            iterations: 600,
            seed: 0,
            use_witness: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GapMaximum {
    pub best_state: State,
    pub best_gap: f64,
    /// `log` of the positive index.
    pub bound: f64,
    pub restarts_used: usize,
    /// `false` when the budget ran out before reaching the bound.
    pub converged: bool,
}

/// `ρ_k ∝ G_k G_k*` blockwise, `G_k` an arbitrary complex `n_k × n_k` matrix.
struct GapCost<'a> {
    inc: &'a Inclusion,
}

impl GapCost<'_> {
    fn state(&self, p: &[f64]) -> Result<State> {
        let a = self.inc.ambient();
        let mut off = 0;
        let parts: Vec<ComplexMatrix> = a
            .blocks()
            .iter()
            .map(|b| {
                let n = b.dim;
                let g = ComplexMatrix::from_fn(n, |i, j| {
                    let k = off + 2 * (i * n + j);
                    C64::new(p[k], p[k + 1])
                });
                off += 2 * n * n;
                &g * &g.adjoint()
            })
            .collect();
        let rho = HermitianMatrix::hermitize(a.embed(&parts));
        State::functional(a.clone(), self.inc.tau().clone(), rho)?.normalized()
    }

    fn gap(&self, p: &[f64]) -> Result<f64> {
        let phi = self.state(p)?;
        let phi_b = self.inc.restrict(&phi)?;
        Ok(s_tau(&phi_b, phi_b.tau())? - s_tau(&phi, self.inc.tau())?)
    }
}

impl CostFunction for GapCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        Ok(self.gap(p).map(|g| -g).unwrap_or(f64::INFINITY))
    }
}

/// Parameters reproducing `phi` (any factorization `G G* = ρ_k` works).
fn params_of(inc: &Inclusion, phi: &State) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for blk in phi.blocks() {
        let g = blk.sqrt()?;
        for z in g.to_row_major() {
            out.push(z.re);
            out.push(z.im);
        }
    }
    debug_assert_eq!(
        out.len(),
        inc.ambient()
            .blocks()
            .iter()
            .map(|b| 2 * b.dim * b.dim)
            .sum::<usize>()
    );
    Ok(out)
}

fn run_once(cost: &GapCost, x0: Vec<f64>, iterations: u64, target: f64) -> (f64, Vec<f64>, bool) {
    let scale = x0.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-3);
    let mut simplex = vec![x0.clone()];
    for i in 0..x0.len() {
        let mut v = x0.clone();
        v[i] += 0.25 * scale;
        simplex.push(v);
    }
    let fallback = (-cost.cost(&x0).unwrap_or(f64::INFINITY), x0.clone(), false);
    let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(1e-13) else {
        return fallback;
    };
    let res = Executor::new(GapCost { inc: cost.inc }, solver)
        .configure(|s| s.max_iters(iterations).target_cost(-target))
        .run();
    match res {
        Ok(r) => {
            let st = r.state();
            let done = matches!(
                st.get_termination_reason(),
                Some(TerminationReason::TargetCostReached)
                    | Some(TerminationReason::SolverConverged)
            );
            match st.get_best_param() {
                Some(p) => (-st.get_best_cost(), p.clone(), done),
                None => fallback,
            }
        }
        Err(_) => fallback,
    }
}

/// Maximizes the entropy gap over faithful and pure states of `A`.
///
/// Restarts run in batches; the search stops after the first batch that
/// reaches `log` of the positive index.
pub fn maximize_gap(inc: &Inclusion, budget: &GapBudget) -> Result<GapMaximum> {
    let bound = inc.index_report().pp_positive.ln();
    let target = bound - 1e-10;
    let cost = GapCost { inc };
    let dim: usize = inc
        .ambient()
        .blocks()
        .iter()
        .map(|b| 2 * b.dim * b.dim)
        .sum();

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(budget.restarts);
    if budget.use_witness {
        let w = &inc.index_report().witness_vector;
        let phi = State::vector(inc.ambient().clone(), inc.tau().clone(), w)?;
        starts.push(params_of(inc, &phi)?);
    }
    for r in starts.len()..budget.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(budget.seed, r));
        starts.push((0..dim).map(|_| StandardNormal.sample(&mut rng)).collect());
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut used = 0;
    let mut converged = false;
    for batch in starts.chunks(8) {
        let results: Vec<(f64, Vec<f64>, bool)> = batch
            .par_iter()
            .map(|x0| run_once(&cost, x0.clone(), budget.iterations, target))
            .collect();
        used += batch.len();
        for (g, p, _) in results {
            if best.as_ref().is_none_or(|(b, _)| g > *b) {
                best = Some((g, p));
            }
        }
        if best.as_ref().is_some_and(|(b, _)| *b >= target - 1e-9) {
            converged = true;
            break;
        }
    }
    let (best_gap, p) = best.unwrap_or((f64::NEG_INFINITY, vec![1.0; dim]));
    let best_state = cost.state(&p)?;
    Ok(GapMaximum {
        best_state,
        best_gap,
        bound,
        restarts_used: used,
        converged,
    })
}
