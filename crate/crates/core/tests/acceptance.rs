//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{
    maximize_gap, random_state, random_state_on, trial_seed, Ensemble, EnsembleKind, GapBudget,
};
use vnlab::inclusion::{dual_expectation, xu_identity, Inclusion};
use vnlab::matrix::{log_quadrature, HermitianMatrix, QuadratureGrid, C64};
use vnlab::relent::{
    kosaki_eval, petz_decompose, rel_entropy_closed, rel_entropy_modular, reverse_entropy,
    KosakiGrid, OperatorSubspace,
};
use vnlab::states::{s_tau, s_vn, State};
use vnlab::Result;

const SEED: u64 = 20240611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn rng(trial: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(SEED ^ salt, trial))
}

fn hs(a: &Arc<MultiMatrixAlgebra>, tau: &TraceWeight, r: &mut ChaCha8Rng) -> Result<State> {
    random_state_on(a, tau, &EnsembleKind::HilbertSchmidt, r)
}

fn tensor_inclusion(tau: fn(&MultiMatrixAlgebra) -> TraceWeight) -> Result<Inclusion> {
    let a = Arc::new(MultiMatrixAlgebra::full(4));
    let t = tau(&a);
    Inclusion::new(a, Arc::new(MultiMatrixAlgebra::tensor_left(2, 2)), t)
}

fn scalars_in(n: usize) -> Result<Inclusion> {
    let a = Arc::new(MultiMatrixAlgebra::full(n));
    let t = TraceWeight::normalized(&a);
    Inclusion::new(a, Arc::new(MultiMatrixAlgebra::scalars(n)), t)
}

fn bell(inc: &Inclusion) -> Result<State> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    State::vector(
        inc.ambient().clone(),
        inc.tau().clone(),
        &[C64::new(s, 0.0), z, z, C64::new(s, 0.0)],
    )
}

fn c1_tvn() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=6usize {
        for t in 0..100 {
            let phi = random_state(&Ensemble::hilbert_schmidt(
                n,
                trial_seed(SEED + n as u64, t),
            ))?;
            let r = s_tau(&phi, phi.tau())? - (s_vn(&phi)? - (n as f64).ln());
            worst = worst.max(r.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 10.0,
        format!("max residual {worst:.2e} over 500 states in {secs:.2} s"),
    )
}

fn c2_bounds() -> Result<Outcome> {
    let (mut pure, mut tracial) = (0.0f64, 0.0f64);
    for n in 2..=6usize {
        let a = Arc::new(MultiMatrixAlgebra::full(n));
        let tau = TraceWeight::normalized(&a);
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[n - 1] = C64::new(1.0, 0.0);
        let p = State::vector(a.clone(), tau.clone(), &v)?;
        pure = pure.max((s_tau(&p, &tau)? + (n as f64).ln()).abs());
        tracial = tracial.max(s_tau(&State::tracial(a, tau.clone()), &tau)?.abs());
    }
    outcome(
        pure < 1e-10 && tracial < 1e-12,
        format!("pure |S + log n| {pure:.1e}, tracial |S| {tracial:.1e}"),
    )
}

fn c3_pp_values() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=4usize {
        let r = scalars_in(n)?.index_report().clone();
        let nf = n as f64;
        ok &= (r.pp_positive - nf).abs() < 1e-6 && (r.pp_cp - nf * nf).abs() < 1e-8;
        parts.push(format!("n={n}: {:.9}/{:.9}", r.pp_positive, r.pp_cp));
    }
    outcome(ok, parts.join(", "))
}

fn c4_gap_bound() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, tau) in [
        ("tau", TraceWeight::normalized as fn(&_) -> _),
        ("Tr", TraceWeight::unnormalized),
    ] {
        let inc = tensor_inclusion(tau)?;
        let mut min_slack = f64::INFINITY;
        for t in 0..1000 {
            let phi = hs(inc.ambient(), inc.tau(), &mut rng(t, 4))?;
            let r = inc.entropy_gap_bound(&phi)?;
            min_slack = min_slack.min(4f64.ln() + 1e-8 - r.gap);
        }
        let b = inc.entropy_gap_bound(&bell(&inc)?)?.gap;
        ok &= min_slack >= 0.0 && (b - 1.3862944).abs() < 1e-6;
        parts.push(format!("{label}: min slack {min_slack:.4}, Bell {b:.7}"));
    }
    outcome(ok, parts.join("; "))
}

fn c5_optimality() -> Result<Outcome> {
    let tensor = maximize_gap(
        &tensor_inclusion(TraceWeight::normalized)?,
        &GapBudget::default(),
    )?;
    let c2 = maximize_gap(&scalars_in(2)?, &GapBudget::default())?;
    let ok = tensor.best_gap >= 4f64.ln() - 1e-4
        && c2.best_gap >= 2f64.ln() - 1e-4
        && tensor.best_gap <= tensor.bound + 1e-8
        && c2.best_gap <= c2.bound + 1e-8;
    outcome(
        ok,
        format!(
            "M_2(x)1 in M_4: {:.7}, C in M_2: {:.7}",
            tensor.best_gap, c2.best_gap
        ),
    )
}

fn c6_petz() -> Result<Outcome> {
    let inc = tensor_inclusion(TraceWeight::normalized)?;
    let mut worst = 0.0f64;
    for t in 0..500 {
        let mut r = rng(t, 6);
        let phi = hs(inc.ambient(), inc.tau(), &mut r)?;
        let psi = hs(inc.ambient(), inc.tau(), &mut r)?;
        worst = worst.max(petz_decompose(&phi, &psi, inc.sub(), inc.expectation())?.residual);
    }
    outcome(
        worst < 1e-8,
        format!("max residual {worst:.2e} over 500 pairs"),
    )
}

fn c7_xu() -> Result<Outcome> {
    let inc = tensor_inclusion(TraceWeight::normalized)?;
    let dual = dual_expectation(&inc)?;
    let mut worst = 0.0f64;
    for t in 0..200 {
        let phi = hs(inc.ambient(), inc.tau(), &mut rng(t, 7))?;
        let x = xu_identity(&inc, &phi, &dual)?;
        if !x.cyclic {
            return outcome(false, format!("trial {t}: state not faithful"));
        }
        worst = worst.max(x.residual);
    }
    let tr = xu_identity(
        &inc,
        &State::tracial(inc.ambient().clone(), inc.tau().clone()),
        &dual,
    )?;
    let split = tr.term_a.abs().max((tr.term_b_prime - 4f64.ln()).abs());
    outcome(
        worst < 1e-6 && split < 1e-9,
        format!(
            "max residual {worst:.2e}; at tau ({:.9}, {:.9})",
            tr.term_a, tr.term_b_prime
        ),
    )
}

fn c8_routes() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for t in 0..200 {
        let d = 2 + t % 3;
        let a = Arc::new(MultiMatrixAlgebra::full(d));
        let tau = TraceWeight::normalized(&a);
        let mut r = rng(t, 8);
        let phi = hs(&a, &tau, &mut r)?;
        let psi = hs(&a, &tau, &mut r)?;
        worst =
            worst.max((rel_entropy_closed(&phi, &psi)? - rel_entropy_modular(&phi, &psi)?).abs());
    }
    outcome(
        worst < 1e-9,
        format!("max |closed - modular| {worst:.2e} over 200 pairs, dims 2-4"),
    )
}

fn c9_kosaki() -> Result<Outcome> {
    let a = Arc::new(MultiMatrixAlgebra::full(2));
    let tau = TraceWeight::normalized(&a);
    let full = OperatorSubspace::from_algebra(&a);
    let grid = KosakiGrid::default();
    let (mut gap, mut drop) = (0.0f64, 0.0f64);
    let mut above = f64::NEG_INFINITY;
    for t in 0..50 {
        let mut r = rng(t, 9);
        let phi = hs(&a, &tau, &mut r)?;
        let psi = hs(&a, &tau, &mut r)?;
        let exact = rel_entropy_closed(&phi, &psi)?;
        let v0 = kosaki_eval(&phi, &psi, &full, &grid)?;
        let v1 = kosaki_eval(&phi, &psi, &full, &grid.refine())?;
        let v2 = kosaki_eval(&phi, &psi, &full, &grid.refine().refine())?;
        gap = gap.max(exact - v0);
        above = above.max(v0 - exact);
        drop = drop.max(v0 - v1).max(v1 - v2);
    }
    let formula_ok = gap <= 1e-3 && above <= 1e-6 && drop <= 1e-12;

    // S_V on scalars ⊂ diagonals ⊂ M_2
    let chain = [
        OperatorSubspace::from_algebra(&MultiMatrixAlgebra::scalars(2)),
        OperatorSubspace::from_algebra(&MultiMatrixAlgebra::diagonal(2)),
        full,
    ];
    let (mut anti, mut mono, mut limit) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    for t in 0..20 {
        let mut r = rng(t, 90);
        let phi = hs(&a, &tau, &mut r)?;
        let psi = hs(&a, &tau, &mut r)?;
        let chi = hs(&a, &tau, &mut r)?;
        let bigger = State::functional(
            a.clone(),
            tau.clone(),
            HermitianMatrix::hermitize(psi.rho().matrix() + chi.rho().matrix()),
        )?;
        let vals: Vec<f64> = chain
            .iter()
            .map(|v| kosaki_eval(&phi, &psi, v, &grid))
            .collect::<Result<_>>()?;
        for v in &chain {
            // ψ ≤ ψ + χ lowers the entropy
            anti = anti
                .max(kosaki_eval(&phi, &bigger, v, &grid)? - kosaki_eval(&phi, &psi, v, &grid)?);
        }
        mono = mono.max(vals[0] - vals[1]).max(vals[1] - vals[2]);
        limit = limit.max((vals[2] - rel_entropy_closed(&phi, &psi)?).abs());
    }
    let sv_ok = anti <= 1e-9 && mono <= 1e-9 && limit <= 1e-3;
    outcome(
        formula_ok && sv_ok,
        format!(
            "gap {gap:.2e}, overshoot {above:.1e}, refinement drop {drop:.1e}; a) {anti:.1e} c) {mono:.1e} d) {limit:.1e}"
        ),
    )
}

fn c10_reverse() -> Result<Outcome> {
    let inc = tensor_inclusion(TraceWeight::normalized)?;
    let mut min_slack = f64::INFINITY;
    for t in 0..500 {
        let phi = hs(inc.ambient(), inc.tau(), &mut rng(t, 10))?;
        let b = inc.restrict(&phi)?;
        let diff = reverse_entropy(inc.tau(), &phi)? - reverse_entropy(b.tau(), &b)?;
        min_slack = min_slack.min(4f64.ln() + 1e-8 - diff);
    }
    outcome(
        min_slack >= 0.0,
        format!("min slack {min_slack:.4} over 500 states"),
    )
}

fn c11_scaling() -> Result<Outcome> {
    let a = Arc::new(MultiMatrixAlgebra::full(3));
    let tau = TraceWeight::normalized(&a);
    let (mut norm, mut resc) = (0.0f64, 0.0f64);
    for t in 0..50 {
        let mut r = rng(t, 11);
        let phi = hs(&a, &tau, &mut r)?;
        let psi = hs(&a, &tau, &mut r)?;
        for lambda in [0.1, 1.0, 7.0] {
            let s =
                rel_entropy_closed(&phi, &psi.scaled(lambda)?)? - rel_entropy_closed(&phi, &psi)?;
            norm = norm.max((s + f64::ln(lambda)).abs());
            let e = s_tau(&phi, &tau.scaled(lambda)?)? - s_tau(&phi, &tau)?;
            resc = resc.max((e - f64::ln(lambda)).abs());
        }
    }
    outcome(
        norm < 1e-10 && resc < 1e-10,
        format!("norm {norm:.1e}, rescaling {resc:.1e}"),
    )
}

fn c12_log_integral() -> Result<Outcome> {
    let grid = QuadratureGrid::default();
    let mut worst = 0.0f64;
    for lambda in [0.1, 0.5, 1.0, 2.0, 10.0] {
        worst = worst.max((log_quadrature(lambda, &grid)? + f64::ln(lambda)).abs());
    }
    outcome(worst < 1e-6, format!("max error {worst:.1e}"))
}

fn c13_all_desk_scale() -> Result<Outcome> {
    let out = tempfile::tempdir()?;
    let start = Instant::now();
    let run = Command::new(env!("CARGO_BIN_EXE_vnlab"))
        .args(["verify", "all-desk-scale", "--out"])
        .arg(out.path())
        .output()?;
    let elapsed = start.elapsed();
    let code = run.status.code().unwrap_or(-1);
    let failed: Vec<String> = String::from_utf8_lossy(&run.stdout)
        .lines()
        .filter(|l| l.starts_with("FAIL"))
        .filter_map(|l| l.split_whitespace().nth(1).map(str::to_string))
        .collect();
    outcome(
        code == 0 && elapsed < Duration::from_secs(300),
        format!(
            "exit {code} in {:.1} s; failing suites: {failed:?}",
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 13] = [
        ("S_tau = S_vN - log n", c1_tvn),
        ("entropy bounds, equality cases", c2_bounds),
        ("Pimsner-Popa values for C in M_n", c3_pp_values),
        ("entropy increase bound, tau and Tr", c4_gap_bound),
        ("optimality of the bound", c5_optimality),
        ("chain rule", c6_petz),
        ("two-sided entropy identity", c7_xu),
        ("closed form vs modular operator", c8_routes),
        ("variational formula and S_V", c9_kosaki),
        ("reverse bound", c10_reverse),
        ("scaling laws", c11_scaling),
        ("integral formula for log", c12_log_integral),
        ("all-desk-scale experiment", c13_all_desk_scale),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        failures += usize::from(!o.passed);
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
