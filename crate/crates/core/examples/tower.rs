//! Per-level entropy gaps along a two-step tower of tensor inclusions.

use vnlab::harness::{random_state, Ensemble};
use vnlab::inclusion::{tower_gap_formula, Tower};

fn main() -> vnlab::Result<()> {
    let tower = Tower::tensor_chain()?;
    for seed in 0..3 {
        let phi = random_state(&Ensemble::hilbert_schmidt(8, seed))?;
        for r in tower_gap_formula(&tower, &phi)? {
            println!(
                "seed {seed} level {}: n = {}, m = {}, S_tau gap {:.9}, formula {:.9}, (n/m)^2 = {}, cp index {:.6}",
                r.level, r.n, r.m, r.tau_gap, r.formula, r.index_ratio, r.pp_cp
            );
        }
    }
    Ok(())
}
