//! Seeded random states: Hilbert–Schmidt, purified Haar and fixed spectrum.

use vnlab::harness::{random_state, trial_seed, Ensemble, EnsembleKind};
use vnlab::states::s_tau;

fn main() -> vnlab::Result<()> {
    let kinds = [
        EnsembleKind::HilbertSchmidt,
        EnsembleKind::PurifiedHaar { env: 1 },
        // env = dim is the Hilbert–Schmidt law; with the same seed it is the same draw
        EnsembleKind::PurifiedHaar { env: 3 },
        EnsembleKind::PurifiedHaar { env: 8 },
        EnsembleKind::SpectrumFixed {
            spectrum: vec![0.7, 0.2, 0.1],
        },
    ];
    for kind in kinds {
        let vals: Vec<f64> = (0..200)
            .map(|t| {
                random_state(&Ensemble::new(kind.clone(), 3, trial_seed(42, t)))
                    .and_then(|s| s_tau(&s, s.tau()))
            })
            .collect::<vnlab::Result<_>>()?;
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{kind:?}: mean S_tau {mean:+.4}, min {lo:+.4} (floor {:+.4})",
            -(3f64).ln()
        );
    }
    let a = random_state(&Ensemble::hilbert_schmidt(3, 7))?;
    let b = random_state(&Ensemble::hilbert_schmidt(3, 7))?;
    println!("same seed, same state: {}", a.rho() == b.rho());
    Ok(())
}
