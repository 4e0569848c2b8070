//! Chain rule for the expectation onto `M_2 ⊗ 1`, and the reverse entropy
//! difference `S(τ‖φ) − S(τ|_B‖φ|_B)`.
//!
//! The difference is never negative, but it is not bounded by `log 4`: it
//! blows up as `φ` approaches the boundary of the state space.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{random_state_on, EnsembleKind};
use vnlab::inclusion::Inclusion;
use vnlab::matrix::HermitianMatrix;
use vnlab::relent::{petz_decompose, reverse_entropy};
use vnlab::states::State;

fn main() -> vnlab::Result<()> {
    let a = Arc::new(MultiMatrixAlgebra::full(4));
    let tau = TraceWeight::normalized(&a);
    let inc = Inclusion::new(
        a.clone(),
        Arc::new(MultiMatrixAlgebra::tensor_left(2, 2)),
        tau.clone(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
        let psi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
        let p = petz_decompose(&phi, &psi, inc.sub(), inc.expectation())?;
        println!(
            "{:.9} = {:.9} + {:.9}  residual {:.1e}",
            p.lhs, p.restriction, p.expectation, p.residual
        );
        let b = inc.restrict(&phi)?;
        let diff = reverse_entropy(&tau, &phi)? - reverse_entropy(b.tau(), &b)?;
        println!("  reverse difference {diff:.6} (log 4 = {:.6})", 4f64.ln());
    }

    // C in M_2: the difference is -log of the geometric mean of the eigenvalues
    let m2 = Arc::new(MultiMatrixAlgebra::full(2));
    let t2 = TraceWeight::normalized(&m2);
    let c = Inclusion::new(
        m2.clone(),
        Arc::new(MultiMatrixAlgebra::scalars(2)),
        t2.clone(),
    )?;
    for eps in [0.25, 0.01, 1e-4] {
        let phi = State::new(
            m2.clone(),
            t2.clone(),
            HermitianMatrix::from_real_diag(&[2.0 * eps, 2.0 - 2.0 * eps]),
        )?;
        let b = c.restrict(&phi)?;
        let diff = reverse_entropy(&t2, &phi)? - reverse_entropy(b.tau(), &b)?;
        println!(
            "C in M_2, spectrum ({eps}, {}): difference {diff:.6} vs log 2 = {:.6}",
            1.0 - eps,
            2f64.ln()
        );
    }
    Ok(())
}
