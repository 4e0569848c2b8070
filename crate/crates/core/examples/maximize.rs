//! The supremum of the entropy gap, found by Nelder–Mead over densities.

use std::sync::Arc;

use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::harness::{maximize_gap, GapBudget};
use vnlab::inclusion::Inclusion;

fn main() -> vnlab::Result<()> {
    let cases = [
        (
            "M_2 (x) 1 in M_4",
            MultiMatrixAlgebra::full(4),
            MultiMatrixAlgebra::tensor_left(2, 2),
        ),
        (
            "C in M_2",
            MultiMatrixAlgebra::full(2),
            MultiMatrixAlgebra::scalars(2),
        ),
        (
            "C in M_3",
            MultiMatrixAlgebra::full(3),
            MultiMatrixAlgebra::scalars(3),
        ),
    ];
    for (name, a, b) in cases {
        let a = Arc::new(a);
        let inc = Inclusion::new(a.clone(), Arc::new(b), TraceWeight::normalized(&a))?;
        for use_witness in [true, false] {
            let budget = GapBudget {
                restarts: 32,
                use_witness,
                ..Default::default()
            };
            let m = maximize_gap(&inc, &budget)?;
            println!(
                "{name:<17} witness {use_witness:<5}  best {:.7}  bound {:.7}  restarts {:>2}  converged {}",
                m.best_gap, m.bound, m.restarts_used, m.converged
            );
        }
    }
    Ok(())
}
