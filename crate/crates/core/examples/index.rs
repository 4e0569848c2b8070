//! Pimsner–Popa indices: the positive constant and the completely positive one.
//!
//! For `ℂ ⊂ M_n` they differ (`n` against `n²`); for a tensor factor they agree.

use std::sync::Arc;

use vnlab::algebra::{MultiMatrixAlgebra, TraceWeight};
use vnlab::inclusion::Inclusion;

fn show(name: &str, a: MultiMatrixAlgebra, b: MultiMatrixAlgebra) -> vnlab::Result<()> {
    let a = Arc::new(a);
    let inc = Inclusion::new(a.clone(), Arc::new(b), TraceWeight::normalized(&a))?;
    let r = inc.index_report();
    println!(
        "{name:<12} positive {:>8.5}  cp {:>8.5}  gap {:.5}  witness block {}",
        r.pp_positive, r.pp_cp, r.optimality_gap, r.witness_block
    );
    let c = &r.choi_certificate;
    println!(
        "{:<12} Choi of E on block {}: min eigenvalue {:.2e}",
        "", c.block, c.min_eigenvalue
    );
    Ok(())
}

fn main() -> vnlab::Result<()> {
    for n in 2..=4 {
        show(
            &format!("C in M_{n}"),
            MultiMatrixAlgebra::full(n),
            MultiMatrixAlgebra::scalars(n),
        )?;
    }
    show(
        "M_2 (x) 1",
        MultiMatrixAlgebra::full(4),
        MultiMatrixAlgebra::tensor_left(2, 2),
    )?;
    show(
        "diag in M_2",
        MultiMatrixAlgebra::full(2),
        MultiMatrixAlgebra::diagonal(2),
    )?;
    show(
        "C+M_2 in M_3",
        MultiMatrixAlgebra::full(3),
        MultiMatrixAlgebra::from_blocks(&[(1, 1), (2, 1)]),
    )?;
    show(
        "M_2 = M_2",
        MultiMatrixAlgebra::full(2),
        MultiMatrixAlgebra::full(2),
    )?;
    Ok(())
}
