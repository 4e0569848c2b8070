//! Segal entropy against the von Neumann entropy on `M_n`.
//!
//! With the normalized trace `S_τ(φ) = S_vN(φ) − log n`, so pure states sit at
//! `−log n` and the tracial state at 0.

use std::sync::Arc;

use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{random_state, Ensemble};
use vnlab::matrix::{ComplexMatrix, HermitianMatrix};
use vnlab::states::{rescale_trace, s_tau, s_vn, State};

fn main() -> vnlab::Result<()> {
    let m2 = Arc::new(MultiMatrixAlgebra::full(2));
    let tau = TraceWeight::normalized(&m2);

    let named = [
        ("pure", [1.0, 0.0]),
        ("tracial", [0.5, 0.5]),
        ("unbalanced", [0.75, 0.25]),
    ];
    for (name, p) in named {
        let sigma = ComplexMatrix::from_real_diag(&p);
        let phi = State::from_ambient_density(m2.clone(), tau.clone(), &sigma)?;
        println!(
            "{name:<11} S_tau = {:+.7}  S_vN = {:.7}",
            s_tau(&phi, &tau)?,
            s_vn(&phi)?
        );
    }

    for n in 2..=6 {
        let phi = random_state(&Ensemble::hilbert_schmidt(n, n as u64))?;
        let lhs = s_tau(&phi, phi.tau())?;
        let rhs = s_vn(&phi)? - (n as f64).ln();
        println!("n = {n}: S_tau = {lhs:+.9}, S_vN - log n = {rhs:+.9}");
    }

    // doubling the trace shifts the entropy by log 2
    let phi = State::new(
        m2.clone(),
        tau.clone(),
        HermitianMatrix::from_real_diag(&[1.5, 0.5]),
    )?;
    let shifted = rescale_trace(&phi, 2.0)?;
    println!(
        "S_2tau - S_tau = {:.7}",
        s_tau(&shifted, shifted.tau())? - s_tau(&phi, &tau)?
    );
    Ok(())
}
