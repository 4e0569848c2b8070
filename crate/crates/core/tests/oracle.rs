//! Values frozen from an independent numpy/scipy computation (`tests/oracle/values.py`).

use std::sync::Arc;

use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::inclusion::Inclusion;
use vnlab::matrix::{ComplexMatrix, C64};
use vnlab::relent::{
    bounded_entropy_approximation, petz_decompose, rel_entropy_closed, reverse_entropy,
};
use vnlab::states::{s_tau, s_vn, State};

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn g3() -> Vec<Vec<C64>> {
    vec![
        vec![r(1.0), c(0.5, 0.5), r(0.0)],
        vec![c(0.0, 0.2), r(1.0), r(0.3)],
        vec![r(0.0), r(-0.4), c(0.7, 0.1)],
    ]
}

fn h3() -> Vec<Vec<C64>> {
    vec![
        vec![r(0.3), r(1.0), c(0.0, 0.1)],
        vec![r(0.5), r(0.2), r(0.6)],
        vec![c(0.0, -0.2), r(0.1), r(1.0)],
    ]
}

fn g4() -> Vec<Vec<C64>> {
    vec![
        vec![r(1.0), r(0.2), r(0.0), c(0.0, 0.5)],
        vec![r(0.1), r(0.8), c(0.0, 0.3), r(0.0)],
        vec![r(0.0), r(-0.4), r(1.0), r(0.2)],
        vec![r(0.6), r(0.0), r(0.1), c(0.9, -0.3)],
    ]
}

fn h4() -> Vec<Vec<C64>> {
    vec![
        vec![r(0.5), r(0.0), r(0.4), r(0.0)],
        vec![c(0.0, 0.2), r(1.0), r(0.0), r(0.3)],
        vec![r(0.0), r(0.1), r(0.7), c(0.0, 0.5)],
        vec![r(0.3), r(0.0), r(-0.2), r(1.0)],
    ]
}

fn state(a: &Arc<MultiMatrixAlgebra>, tau: &TraceWeight, rows: Vec<Vec<C64>>) -> State {
    let g = ComplexMatrix::from_rows(&rows).unwrap();
    let s = &g * &g.adjoint();
    let s = s.scale(1.0 / s.trace().re);
    State::from_ambient_density(a.clone(), tau.clone(), &s).unwrap()
}

fn close(got: f64, want: f64) {
    assert!((got - want).abs() < TOL, "got {got:.17}, want {want:.17}");
}

fn m3() -> (Arc<MultiMatrixAlgebra>, TraceWeight) {
    let a = Arc::new(MultiMatrixAlgebra::full(3));
    let t = TraceWeight::normalized(&a);
    (a, t)
}

#[test]
fn entropies_on_m3() {
    let (a, tau) = m3();
    let phi = state(&a, &tau, g3());
    close(s_vn(&phi).unwrap(), 0.9348091664753455);
    close(s_tau(&phi, &tau).unwrap(), -0.16380312219276427);
    close(reverse_entropy(&tau, &phi).unwrap(), 0.16185783311932997);
}

#[test]
fn relative_entropy_on_m3() {
    let (a, tau) = m3();
    let phi = state(&a, &tau, g3());
    let psi = state(&a, &tau, h3());
    close(rel_entropy_closed(&phi, &psi).unwrap(), 0.5258332308339217);
    close(rel_entropy_closed(&psi, &phi).unwrap(), 0.44081563349636443);
}

#[test]
fn cutoff_approximants_on_m3() {
    let (a, tau) = m3();
    let phi = state(&a, &tau, g3());
    for (k, want) in [
        (1, 0.3715998605600863),
        (2, 0.16380312219276486),
        (5, 0.16380312219276486),
    ] {
        let psi = bounded_entropy_approximation(&phi, &tau, k).unwrap();
        close(rel_entropy_closed(&phi, &psi).unwrap(), want);
    }
}

#[test]
fn chain_rule_on_tensor_inclusion() {
    let a = Arc::new(MultiMatrixAlgebra::full(4));
    let tau = TraceWeight::normalized(&a);
    let inc = Inclusion::new(
        a.clone(),
        Arc::new(MultiMatrixAlgebra::tensor_left(2, 2)),
        tau.clone(),
    )
    .unwrap();
    let phi = state(&a, &tau, g4());
    let psi = state(&a, &tau, h4());
    let p = petz_decompose(&phi, &psi, inc.sub(), inc.expectation()).unwrap();
    close(p.lhs, 0.23613992849924947);
    close(p.restriction, 0.06480035246667747);
    close(p.expectation, 0.17133957603257166);
    close(
        inc.entropy_gap_bound(&phi).unwrap().gap,
        0.17133957603257255,
    );

    let b = inc.restrict(&phi).unwrap();
    let diff = reverse_entropy(&tau, &phi).unwrap() - reverse_entropy(b.tau(), &b).unwrap();
    close(diff, 0.19583416349422567);
}
