//! The suite catalog. Each suite measures one inequality or identity over
//! seeded random trials and records signed slacks.

use std::sync::{Arc, OnceLock};

use rand_chacha::ChaCha8Rng;

use super::{
    maximize_gap, random_state_on, run_trials, EnsembleKind, GapBudget, SuiteParams, TrialRecord,
};
use crate::algebra::{random_unit_vector, MultiMatrixAlgebra, TraceWeight};
use crate::error::Result;
use crate::inclusion::{
    dual_expectation, tower_gap_formula, xu_identity, DualExpectation, Inclusion, Tower,
};
use crate::matrix::{log_quadrature, ComplexMatrix, HermitianMatrix, QuadratureGrid};
use crate::relent::{
    kosaki_eval, petz_decompose, rel_entropy_closed, rel_entropy_modular, reverse_entropy,
    KosakiGrid, OperatorSubspace,
};
use crate::states::{rescale_trace, restrict, s_tau, s_vn, tensor_state, State};

type Runner = fn(&SuiteParams, usize) -> Result<Vec<TrialRecord>>;

pub struct SuiteInfo {
    pub name: &'static str,
    /// The inequality or identity under test.
    pub citation: &'static str,
    pub default_trials: usize,
    pub tolerance: f64,
    pub run: Runner,
}

macro_rules! suite {
    ($name:literal, $cite:literal, $trials:expr, $tol:expr, $run:expr) => {
        SuiteInfo {
            name: $name,
            citation: $cite,
            default_trials: $trials,
            tolerance: $tol,
            run: $run,
        }
    };
}

pub static SUITES: &[SuiteInfo] = &[
    suite!(
        "entropy-bounds",
        "-log n <= S_tau(phi) <= 0 on M_n, normalized tau",
        500,
        1e-9,
        entropy_bounds
    ),
    suite!(
        "tvn",
        "S_tau(phi) = S_vN(phi) - log n on M_n",
        500,
        1e-9,
        tvn
    ),
    suite!(
        "additivity",
        "S(phi1 (x) phi2) = S(phi1) + S(phi2)",
        200,
        1e-9,
        additivity
    ),
    suite!(
        "subadditivity",
        "S(phi||psi1 (x) psi2) >= S(phi|A1||psi1) + S(phi|A2||psi2)",
        200,
        1e-9,
        subadditivity
    ),
    suite!(
        "monotonicity",
        "S(phi|B||psi|B) <= S(phi||psi)",
        500,
        1e-9,
        monotonicity
    ),
    suite!(
        "relent-scaling",
        "S(phi||lambda psi) = S(phi||psi) - log lambda",
        300,
        1e-10,
        relent_scaling
    ),
    suite!(
        "trace-rescaling",
        "S_{lambda tau}(phi) = S_tau(phi) + log lambda",
        300,
        1e-10,
        trace_rescaling
    ),
    suite!(
        "petz-identity",
        "S(phi||psi.eps) = S(phi|B||psi|B) + S(phi||phi.eps)",
        500,
        1e-8,
        petz_identity
    ),
    suite!(
        "gap-identity",
        "S_tau(phi|B) - S_tau(phi) = S(phi||phi.eps)",
        500,
        1e-9,
        gap_identity
    ),
    suite!(
        "pp-bound",
        "S(phi||phi.eps) <= log [A:B]_eps",
        1000,
        1e-8,
        pp_bound
    ),
    suite!(
        "entropy-gap-bound",
        "S_tau(phi|B) - S_tau(phi) <= log [A:B]_eps, tracial state",
        1000,
        1e-8,
        entropy_gap
    ),
    suite!(
        "semifinite-bound",
        "S_Tr(phi|B) - S_Tr(phi) <= log [A:B]_eps, unnormalized trace",
        1000,
        1e-8,
        semifinite
    ),
    suite!(
        "reverse-bound",
        "S(tau||phi) - S(tau|B||phi|B) <= log [A:B]_eps",
        500,
        1e-8,
        reverse_bound
    ),
    suite!(
        "reverse-monotonicity",
        "S(tau||phi) - S(tau|B||phi|B) >= 0",
        500,
        1e-10,
        reverse_monotonicity
    ),
    suite!(
        "xu-identity",
        "S_A(phi||phi.eps) + S_B'(phi'||phi'.eps') = log [A:B]_eps",
        200,
        1e-6,
        xu
    ),
    suite!(
        "kosaki-index",
        "eps^-1 = c eps' on the commutant, c = Jones index",
        5,
        1e-8,
        kosaki_index
    ),
    suite!(
        "subspace-entropy",
        "S_V anti-monotone in psi, basis independent, monotone in V",
        20,
        1e-9,
        subspace
    ),
    suite!(
        "tower",
        "S_vN gap + log(n/m) = S_tau gap per level, (n/m)^2 = index",
        50,
        1e-9,
        tower
    ),
    suite!(
        "route-agreement",
        "closed form = relative modular operator",
        200,
        1e-9,
        route_agreement
    ),
    suite!(
        "kosaki-formula",
        "step-function bound below the closed form, within 1e-3, refining upward",
        50,
        1e-9,
        kosaki_formula
    ),
    suite!(
        "log-integral",
        "-log lambda = int ((t+1)^-1 - lambda (t+lambda)^-1) dt/t",
        5,
        1e-6,
        log_integral
    ),
    suite!(
        "pp-values",
        "C in M_n: n and n^2; M_2 (x) 1 in M_4: 4 and 4; pp_cp >= pp_positive",
        6,
        1e-6,
        pp_values
    ),
    suite!(
        "spectral-invariance",
        "S_tau(phi.Ad u) = S_tau(phi)",
        200,
        1e-9,
        spectral_invariance
    ),
    suite!(
        "gap-saturation",
        "sup_phi S_tau(phi|B) - S_tau(phi) = log [A:B]_eps",
        2,
        1e-4,
        gap_saturation
    ),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn identity(residual: f64) -> f64 {
    -residual.abs()
}

fn full(n: usize) -> (Arc<MultiMatrixAlgebra>, TraceWeight) {
    let a = Arc::new(MultiMatrixAlgebra::full(n));
    let t = TraceWeight::normalized(&a);
    (a, t)
}

fn draw(
    p: &SuiteParams,
    a: &Arc<MultiMatrixAlgebra>,
    tau: &TraceWeight,
    rng: &mut ChaCha8Rng,
) -> Result<State> {
    match &p.ensemble {
        EnsembleKind::SpectrumFixed { spectrum } if spectrum.len() != a.ambient_dim() => {
            random_state_on(a, tau, &EnsembleKind::HilbertSchmidt, rng)
        }
        k => random_state_on(a, tau, k, rng),
    }
}

fn cycle_dim(p: &SuiteParams, i: usize, from: usize, to: usize) -> usize {
    p.dim.unwrap_or(from + i % (to - from + 1))
}

fn tensor_inclusion(normalized: bool) -> Arc<Inclusion> {
    static N: OnceLock<Arc<Inclusion>> = OnceLock::new();
    static U: OnceLock<Arc<Inclusion>> = OnceLock::new();
    let cell = if normalized { &N } else { &U };
    cell.get_or_init(|| {
        let a = Arc::new(MultiMatrixAlgebra::full(4));
        let tau = if normalized {
            TraceWeight::normalized(&a)
        } else {
            TraceWeight::unnormalized(&a)
        };
        Arc::new(
            Inclusion::new(a, Arc::new(MultiMatrixAlgebra::tensor_left(2, 2)), tau)
                .expect("tensor inclusion"),
        )
    })
    .clone()
}

fn inclusion(p: &SuiteParams) -> Arc<Inclusion> {
    p.inclusion
        .clone()
        .unwrap_or_else(|| tensor_inclusion(true))
}

fn entropy_bounds(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let d = cycle_dim(p, i, 2, 4);
        let (a, tau) = full(d);
        let s = s_tau(&draw(p, &a, &tau, rng)?, &tau)?;
        Ok((s, (s + (d as f64).ln()).min(-s)))
    })
}

fn tvn(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let d = cycle_dim(p, i, 2, 6);
        let (a, tau) = full(d);
        let phi = draw(p, &a, &tau, rng)?;
        let s = s_tau(&phi, &tau)?;
        Ok((s, identity(s - (s_vn(&phi)? - (d as f64).ln()))))
    })
}

fn additivity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |_, rng| {
        let (a1, t1) = full(2);
        let (a2, t2) = full(3);
        let phi1 = random_state_on(&a1, &t1, &EnsembleKind::HilbertSchmidt, rng)?;
        let phi2 = random_state_on(&a2, &t2, &EnsembleKind::HilbertSchmidt, rng)?;
        let prod = tensor_state(&phi1, &phi2)?;
        let s = s_tau(&prod, prod.tau())?;
        Ok((s, identity(s - s_tau(&phi1, &t1)? - s_tau(&phi2, &t2)?)))
    })
}

fn subadditivity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let left = Arc::new(MultiMatrixAlgebra::tensor_left(2, 2));
    let right = Arc::new(MultiMatrixAlgebra::tensor_right(2, 2));
    run_trials(n, p.seed, |_, rng| {
        let (a, t) = full(2);
        let psi1 = random_state_on(&a, &t, &EnsembleKind::HilbertSchmidt, rng)?;
        let psi2 = random_state_on(&a, &t, &EnsembleKind::HilbertSchmidt, rng)?;
        let psi = tensor_state(&psi1, &psi2)?;
        let phi = random_state_on(
            psi.algebra_arc(),
            psi.tau(),
            &EnsembleKind::HilbertSchmidt,
            rng,
        )?;
        let whole = rel_entropy_closed(&phi, &psi)?;
        let mut parts = 0.0;
        for sub in [&left, &right] {
            parts += rel_entropy_closed(&restrict(&phi, sub)?, &restrict(&psi, sub)?)?;
        }
        Ok((whole - parts, whole - parts))
    })
}

fn monotonicity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let psi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let big = rel_entropy_closed(&phi, &psi)?;
        let small = rel_entropy_closed(&inc.restrict(&phi)?, &inc.restrict(&psi)?)?;
        Ok((small, big - small))
    })
}

const LAMBDAS: [f64; 3] = [0.1, 1.0, 7.0];

fn relent_scaling(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let d = cycle_dim(p, i / 3, 2, 4);
        let (a, tau) = full(d);
        let lambda = LAMBDAS[i % 3];
        let phi = draw(p, &a, &tau, rng)?;
        let psi = draw(p, &a, &tau, rng)?;
        let base = rel_entropy_closed(&phi, &psi)?;
        let scaled = rel_entropy_closed(&phi, &psi.scaled(lambda)?)?;
        Ok((scaled, identity(scaled - base + lambda.ln())))
    })
}

fn trace_rescaling(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let d = cycle_dim(p, i / 3, 2, 4);
        let (a, tau) = full(d);
        let lambda = LAMBDAS[i % 3];
        let phi = draw(p, &a, &tau, rng)?;
        let re = rescale_trace(&phi, lambda)?;
        let s = s_tau(&re, re.tau())?;
        Ok((s, identity(s - s_tau(&phi, &tau)? - lambda.ln())))
    })
}

fn petz_identity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let psi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let r = petz_decompose(&phi, &psi, inc.sub(), inc.expectation())?;
        Ok((r.lhs, identity(r.residual)))
    })
}

fn gap_identity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    run_trials(n, p.seed, |_, rng| {
        let r = inc.entropy_gap_bound(&draw(p, inc.ambient(), inc.tau(), rng)?)?;
        Ok((r.gap, identity(r.route_residual)))
    })
}

fn pp_bound(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    let bound = inc.index_report().pp_positive.ln();
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let s = rel_entropy_closed(&phi, &inc.compose(&phi)?)?;
        Ok((s, bound - s))
    })
}

fn gap_records(inc: &Inclusion, p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |_, rng| {
        let r = inc.entropy_gap_bound(&draw(p, inc.ambient(), inc.tau(), rng)?)?;
        Ok((r.gap, r.slack))
    })
}

fn entropy_gap(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    gap_records(&inclusion(p), p, n)
}

fn semifinite(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = match &p.inclusion {
        Some(i) => Arc::new(i.with_trace(TraceWeight::unnormalized(i.ambient()))?),
        None => tensor_inclusion(false),
    };
    gap_records(&inc, p, n)
}

fn reverse_bound(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    let bound = inc.index_report().pp_positive.ln();
    let tau = inc.tau().scaled(1.0 / inc.tau().total())?;
    let inc = Arc::new(inc.with_trace(tau)?);
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let phi_b = inc.restrict(&phi)?;
        let d = reverse_entropy(inc.tau(), &phi)? - reverse_entropy(phi_b.tau(), &phi_b)?;
        Ok((d, bound - d))
    })
}

fn reverse_monotonicity(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    let tau = inc.tau().scaled(1.0 / inc.tau().total())?;
    let inc = Arc::new(inc.with_trace(tau)?);
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, inc.ambient(), inc.tau(), rng)?;
        let phi_b = inc.restrict(&phi)?;
        let d = reverse_entropy(inc.tau(), &phi)? - reverse_entropy(phi_b.tau(), &phi_b)?;
        Ok((d, d))
    })
}

fn default_dual() -> Arc<DualExpectation> {
    static D: OnceLock<Arc<DualExpectation>> = OnceLock::new();
    D.get_or_init(|| {
        Arc::new(dual_expectation(&tensor_inclusion(true)).expect("dual of the tensor inclusion"))
    })
    .clone()
}

fn xu(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let inc = inclusion(p);
    let dual = match &p.inclusion {
        Some(i) => Arc::new(dual_expectation(i)?),
        None => default_dual(),
    };
    run_trials(n, p.seed, |i, rng| {
        if i == 0 {
            // φ = τ: the whole index sits in the commutant term
            let t = inc.tau().scaled(1.0 / inc.tau().total())?;
            let tau = State::tracial(inc.ambient().clone(), t);
            let r = xu_identity(&inc, &tau, &dual)?;
            let split = r.term_a.abs().max((r.term_b_prime - r.log_index).abs());
            return Ok((r.term_b_prime, identity(split.max(r.residual))));
        }
        let r = xu_identity(&inc, &draw(p, inc.ambient(), inc.tau(), rng)?, &dual)?;
        Ok((r.term_a + r.term_b_prime, identity(r.residual)))
    })
}

/// Inclusions checked by default: `ℂ ⊂ M_2`, `ℂ ⊂ M_3`, `M_2⊗1 ⊂ M_4`, `ℂ² ⊂ M_2`, `M_2 = M_2`.
fn shipped_inclusions() -> Vec<Arc<Inclusion>> {
    let mk = |a: MultiMatrixAlgebra, b: MultiMatrixAlgebra| {
        let a = Arc::new(a);
        let tau = TraceWeight::normalized(&a);
        Arc::new(Inclusion::new(a, Arc::new(b), tau).expect("shipped inclusion"))
    };
    vec![
        mk(MultiMatrixAlgebra::full(2), MultiMatrixAlgebra::scalars(2)),
        mk(MultiMatrixAlgebra::full(3), MultiMatrixAlgebra::scalars(3)),
        tensor_inclusion(true),
        mk(MultiMatrixAlgebra::full(2), MultiMatrixAlgebra::diagonal(2)),
        mk(MultiMatrixAlgebra::full(2), MultiMatrixAlgebra::full(2)),
    ]
}

fn kosaki_index(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let incs = match &p.inclusion {
        Some(i) => vec![i.clone()],
        None => shipped_inclusions(),
    };
    run_trials(n.min(incs.len()), p.seed, |i, _| {
        let inc = &incs[i];
        let d = dual_expectation(inc)?;
        let mismatch = (d.scalar - inc.index_report().pp_cp).abs();
        Ok((d.scalar, identity(d.residual.max(mismatch))))
    })
}

fn subspace(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let a = Arc::new(MultiMatrixAlgebra::full(2));
    let tau = TraceWeight::unnormalized(&a);
    let chain = [
        OperatorSubspace::new(&a, &[a.identity()])?,
        OperatorSubspace::from_algebra(&MultiMatrixAlgebra::diagonal(2)),
        OperatorSubspace::from_algebra(&a),
    ];
    let grid = KosakiGrid::default();
    run_trials(n, p.seed, |_, rng| {
        let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, rng)?;
        let psi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, rng)?;
        // a smaller reference: ψ minus half its smallest eigenvalue along a random direction
        let v = random_unit_vector(2, rng);
        let dip = 0.5 * psi.min_eigenvalue();
        let lower = HermitianMatrix::hermitize(
            psi.rho().matrix() - &ComplexMatrix::outer(&v, &v).scale(dip),
        );
        let psi_low = State::functional(a.clone(), tau.clone(), lower)?;
        let mut slack = f64::INFINITY;
        let mut prev = f64::NEG_INFINITY;
        let mut top = 0.0;
        for v in &chain {
            let s = kosaki_eval(&phi, &psi, v, &grid)?;
            slack = slack.min(kosaki_eval(&phi, &psi_low, v, &grid)? - s);
            slack = slack.min(s - prev);
            prev = s;
            top = s;
        }
        // the same span from a different generating set
        let alt = [
            a.identity(),
            ComplexMatrix::unit(2, 0, 0).scale(3.0),
            &ComplexMatrix::unit(2, 0, 1) + &ComplexMatrix::unit(2, 1, 0),
            (&ComplexMatrix::unit(2, 0, 1) - &ComplexMatrix::unit(2, 1, 0))
                .scale_c(crate::matrix::C64::new(0.0, 1.0)),
        ];
        let alt_v = OperatorSubspace::new(&a, &alt)?;
        slack = slack.min(identity(kosaki_eval(&phi, &psi, &alt_v, &grid)? - top));
        Ok((top, slack))
    })
}

fn tower(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    static T: OnceLock<Tower> = OnceLock::new();
    let t = match T.get() {
        Some(t) => t,
        None => {
            let built = Tower::tensor_chain()?;
            T.get_or_init(|| built)
        }
    };
    let top = t.levels().last().expect("levels").ambient().clone();
    run_trials(n, p.seed, |_, rng| {
        let phi = draw(p, &top, t.tau(), rng)?;
        let reps = tower_gap_formula(t, &phi)?;
        let worst = reps
            .iter()
            .map(|r| r.residual.max((r.index_ratio - r.pp_cp).abs()))
            .fold(0.0, f64::max);
        Ok((reps.iter().map(|r| r.tau_gap).sum(), identity(worst)))
    })
}

fn route_agreement(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let (a, tau) = full(cycle_dim(p, i, 2, 4));
        let phi = draw(p, &a, &tau, rng)?;
        let psi = draw(p, &a, &tau, rng)?;
        let c = rel_entropy_closed(&phi, &psi)?;
        Ok((c, identity(c - rel_entropy_modular(&phi, &psi)?)))
    })
}

fn kosaki_formula(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let a = Arc::new(MultiMatrixAlgebra::full(2));
    let tau = TraceWeight::unnormalized(&a);
    let v = OperatorSubspace::from_algebra(&a);
    let g0 = KosakiGrid::default();
    let g1 = g0.refine();
    let g2 = g1.refine();
    run_trials(n, p.seed, |_, rng| {
        let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, rng)?;
        let psi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, rng)?;
        let exact = rel_entropy_closed(&phi, &psi)?;
        let v0 = kosaki_eval(&phi, &psi, &v, &g0)?;
        let v1 = kosaki_eval(&phi, &psi, &v, &g1)?;
        let v2 = kosaki_eval(&phi, &psi, &v, &g2)?;
        let slack = (1e-3 - (exact - v0))
            .min(v1 - v0)
            .min(v2 - v1)
            .min(exact + 1e-6 - v2);
        Ok((v0, slack))
    })
}

fn log_integral(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    const L: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
    let grid = QuadratureGrid::default();
    run_trials(n.min(L.len()), p.seed, |i, _| {
        let q = log_quadrature(L[i], &grid)?;
        Ok((q, identity(q + L[i].ln())))
    })
}

fn pp_values(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let mk = |a: MultiMatrixAlgebra, b: MultiMatrixAlgebra| -> Result<Inclusion> {
        let a = Arc::new(a);
        let tau = TraceWeight::normalized(&a);
        Inclusion::new(a, Arc::new(b), tau)
    };
    run_trials(n.min(6), p.seed, |i, _| {
        let (inc, pos, cp) = match i {
            0..=2 => {
                let k = i + 2;
                (
                    mk(MultiMatrixAlgebra::full(k), MultiMatrixAlgebra::scalars(k))?,
                    k as f64,
                    (k * k) as f64,
                )
            }
            3 => ((*tensor_inclusion(true)).clone(), 4.0, 4.0),
            4 => (
                mk(MultiMatrixAlgebra::full(2), MultiMatrixAlgebra::diagonal(2))?,
                2.0,
                2.0,
            ),
            _ => (
                mk(MultiMatrixAlgebra::full(3), MultiMatrixAlgebra::full(3))?,
                1.0,
                1.0,
            ),
        };
        let r = inc.index_report();
        let order = (r.pp_cp - r.pp_positive + 1e-9).min(0.0);
        Ok((
            r.pp_positive,
            identity(
                (r.pp_positive - pos)
                    .abs()
                    .max((r.pp_cp - cp).abs())
                    .max(-order),
            ),
        ))
    })
}

fn spectral_invariance(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    run_trials(n, p.seed, |i, rng| {
        let (a, tau) = full(cycle_dim(p, i, 2, 4));
        let phi = draw(p, &a, &tau, rng)?;
        let u = a.random_unitary(rng);
        let s = s_tau(&phi, &tau)?;
        Ok((s, identity(s - s_tau(&phi.conjugate(&u)?, &tau)?)))
    })
}

fn gap_saturation(p: &SuiteParams, n: usize) -> Result<Vec<TrialRecord>> {
    let incs: Vec<Arc<Inclusion>> = match &p.inclusion {
        Some(i) => vec![i.clone()],
        None => vec![tensor_inclusion(true), shipped_inclusions().swap_remove(0)],
    };
    let records: Result<Vec<TrialRecord>> = incs
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, inc)| {
            let budget = GapBudget {
                seed: super::trial_seed(p.seed, i),
                ..Default::default()
            };
            let m = maximize_gap(inc, &budget)?;
            // exceeding the ceiling is never within tolerance
            let slack = if m.best_gap > m.bound + 1e-8 {
                f64::NEG_INFINITY
            } else {
                (m.best_gap - m.bound).min(0.0)
            };
            Ok(TrialRecord {
                trial: i,
                value: m.best_gap,
                slack,
            })
        })
        .collect();
    records
}
