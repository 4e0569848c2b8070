//! Three routes to `S(φ‖ψ)`: the closed form, the relative modular operator on
//! the standard form, and the step-function lower bound.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{random_state_on, EnsembleKind};
use vnlab::relent::{
    kosaki_eval, rel_entropy_closed, rel_entropy_modular, KosakiGrid, OperatorSubspace,
};

fn main() -> vnlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 2..=4 {
        let a = Arc::new(MultiMatrixAlgebra::full(d));
        let tau = TraceWeight::normalized(&a);
        let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
        let psi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
        let closed = rel_entropy_closed(&phi, &psi)?;
        let modular = rel_entropy_modular(&phi, &psi)?;
        println!(
            "M_{d}: closed {closed:.12}  modular {modular:.12}  diff {:.1e}",
            (closed - modular).abs()
        );
    }

    // the variational bound on M_2 climbs toward the closed form as the grid refines
    let a = Arc::new(MultiMatrixAlgebra::full(2));
    let tau = TraceWeight::normalized(&a);
    let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
    let psi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
    let exact = rel_entropy_closed(&phi, &psi)?;
    let v = OperatorSubspace::from_algebra(&a);
    let mut grid = KosakiGrid::default();
    for _ in 0..3 {
        let s = kosaki_eval(&phi, &psi, &v, &grid)?;
        println!(
            "n = 2^{:<2} {} slices: {s:.9} (closed form {exact:.9})",
            grid.n().log2() as u32,
            grid.slices()
        );
        grid = grid.refine();
    }

    // restricting V to the diagonals can only lower the bound
    let diag = OperatorSubspace::from_algebra(&MultiMatrixAlgebra::diagonal(2));
    println!(
        "V = diagonals: {:.9}",
        kosaki_eval(&phi, &psi, &diag, &KosakiGrid::default())?
    );
    Ok(())
}
