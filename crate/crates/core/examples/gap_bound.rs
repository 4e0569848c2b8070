//! Entropy increase under restriction to `M_2 ⊗ 1 ⊂ M_4`, bounded by the log of
//! the index; a Bell state attains `log 4`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{random_state_on, EnsembleKind};
use vnlab::inclusion::Inclusion;
use vnlab::matrix::C64;
use vnlab::states::State;

fn main() -> vnlab::Result<()> {
    let a = Arc::new(MultiMatrixAlgebra::full(4));
    let b = Arc::new(MultiMatrixAlgebra::tensor_left(2, 2));
    for (label, tau) in [
        ("tau", TraceWeight::normalized(&a)),
        ("Tr", TraceWeight::unnormalized(&a)),
    ] {
        let inc = Inclusion::new(a.clone(), b.clone(), tau.clone())?;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = f64::INFINITY;
        for _ in 0..1000 {
            let phi = random_state_on(&a, &tau, &EnsembleKind::HilbertSchmidt, &mut rng)?;
            worst = worst.min(inc.entropy_gap_bound(&phi)?.slack);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell = State::vector(a.clone(), tau, &[C64::new(s, 0.0), z, z, C64::new(s, 0.0)])?;
        let r = inc.entropy_gap_bound(&bell)?;
        println!(
            "{label:<3} 1000 states: min slack {worst:.4}; Bell gap {:.7} of bound {:.7}",
            r.gap, r.bound
        );
        println!(
            "    gap equals S(phi||phi.E): residual {:.1e}",
            r.route_residual
        );
    }
    Ok(())
}
