//! The dual expectation on the commutants and the two-sided entropy identity
//! `S_A(φ‖φ∘E) + S_B'(φ'‖φ'∘E') = log index`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{random_state_on, EnsembleKind};
use vnlab::inclusion::{dual_expectation, xu_identity, Inclusion};
use vnlab::states::State;

fn main() -> vnlab::Result<()> {
    let a = Arc::new(MultiMatrixAlgebra::full(4));
    let tau = TraceWeight::normalized(&a);
    let inc = Inclusion::new(
        a.clone(),
        Arc::new(MultiMatrixAlgebra::tensor_left(2, 2)),
        tau.clone(),
    )?;
    let dual = dual_expectation(&inc)?;
    let sig = |a: &MultiMatrixAlgebra| {
        a.block_signature()
            .iter()
            .map(|b| (b.dim, b.multiplicity))
            .collect::<Vec<_>>()
    };
    println!(
        "A' blocks {:?}, B' blocks {:?}, scalar {:.9} (fit residual {:.1e})",
        sig(&dual.a_prime),
        sig(&dual.b_prime),
        dual.scalar,
        dual.residual
    );

    let t = xu_identity(&inc, &State::tracial(a.clone(), tau.clone()), &dual)?;
    println!(
        "tau:  {:.9} + {:.9} = {:.9}",
        t.term_a, t.term_b_prime, t.log_index
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
        let r = xu_identity(&inc, &phi, &dual)?;
        println!(
            "phi:  {:.9} + {:.9} = {:.9}  residual {:.1e}",
            r.term_a, r.term_b_prime, r.log_index, r.residual
        );
    }
    Ok(())
}
