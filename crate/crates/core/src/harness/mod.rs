//! Randomized verification suites and the gap maximizer.

mod maximize;
mod suites;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{ginibre, haar_unitary, random_unit_vector, MultiMatrixAlgebra, TraceWeight};
use crate::error::{Error, Result};
use crate::inclusion::Inclusion;
use crate::matrix::{partial_trace, ComplexMatrix, Side};
use crate::states::State;

pub use maximize::{maximize_gap, GapBudget, GapMaximum};
pub use suites::{suite_names, SuiteInfo, SUITES};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// `GG*/Tr(GG*)` with `G` Ginibre.
    #[default]
    HilbertSchmidt,
    /// Reduced density of a Haar-random vector on `ℂ^d ⊗ ℂ^env`.
    PurifiedHaar { env: usize },
    /// `U diag(p) U*` with `U` Haar.
    SpectrumFixed { spectrum: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

impl Ensemble {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, seed }
    }

    pub fn hilbert_schmidt(dim: usize, seed: u64) -> Self {
        Self::new(EnsembleKind::HilbertSchmidt, dim, seed)
    }
}

/// Unit-trace density on `ℂ^d` drawn from `kind`.
pub fn sample_density(kind: &EnsembleKind, d: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let sigma = match kind {
        EnsembleKind::HilbertSchmidt => {
            let g = ginibre(d, rng);
            &g * &g.adjoint()
        }
        EnsembleKind::PurifiedHaar { env } => {
            let env = (*env).max(1);
            let v = random_unit_vector(d * env, rng);
            partial_trace(&ComplexMatrix::outer(&v, &v), (d, env), Side::Right)?
        }
        EnsembleKind::SpectrumFixed { spectrum } => {
            if spectrum.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: spectrum.len(),
                });
            }
            if spectrum.iter().any(|&p| !(p >= 0.0)) {
                return Err(Error::Config("spectrum entries must be nonnegative".into()));
            }
            let u = haar_unitary(d, rng);
            &(&u * &ComplexMatrix::from_real_diag(spectrum)) * &u.adjoint()
        }
    };
    let tr = sigma.trace().re;
    if !(tr > 0.0) {
        return Err(Error::NonPositive(tr));
    }
    Ok(sigma.hermitian_part().scale(1.0 / tr))
}

/// A state on `M_dim` with the normalized trace, deterministic in `ens.seed`.
pub fn random_state(ens: &Ensemble) -> Result<State> {
    if ens.dim == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let a = Arc::new(MultiMatrixAlgebra::full(ens.dim));
    let tau = TraceWeight::normalized(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(ens.seed);
    random_state_on(&a, &tau, &ens.kind, &mut rng)
}

/// A state on `alg`: the ambient density from `kind`, compressed into `alg`.
pub fn random_state_on(
    alg: &Arc<MultiMatrixAlgebra>,
    tau: &TraceWeight,
    kind: &EnsembleKind,
    rng: &mut impl Rng,
) -> Result<State> {
    let sigma = sample_density(kind, alg.ambient_dim(), rng)?;
    State::from_ambient_density(alg.clone(), tau.clone(), &sigma)?.normalized()
}

/// Per-trial seed; splitmix64 of the base seed and the trial index.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    let mut z = base
        ^ (trial as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f` on a pool capped by `VNE_THREADS` when set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var("VNE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// One trial of a suite: the measured quantity and its signed slack.
///
/// Inequalities `lhs ≤ rhs` store `rhs − lhs`; identities store `−|residual|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub value: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub citation: String,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// `max(0, −min slack)`.
    pub max_violation: f64,
    pub min_slack: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub passed: bool,
    pub records: Vec<TrialRecord>,
}

impl VerificationReport {
    pub fn from_records(
        info: &SuiteInfo,
        seed: u64,
        tolerance: f64,
        records: Vec<TrialRecord>,
    ) -> Self {
        let min_slack = records
            .iter()
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min);
        let finite = records.iter().map(|r| r.value).filter(|v| v.is_finite());
        let min_value = finite.clone().fold(f64::INFINITY, f64::min);
        let max_value = finite.fold(f64::NEG_INFINITY, f64::max);
        let max_violation = if records.is_empty() {
            0.0
        } else {
            (-min_slack).max(0.0)
        };
        Self {
            suite: info.name.to_string(),
            citation: info.citation.to_string(),
            trials: records.len(),
            seed,
            tolerance,
            max_violation,
            min_slack,
            min_value,
            max_value,
            passed: max_violation <= tolerance && records.iter().all(|r| !r.slack.is_nan()),
            records,
        }
    }
}

/// Parameters shared by all suites; unset fields take the suite defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub trials: Option<usize>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub dim: Option<usize>,
    pub ensemble: EnsembleKind,
    /// Replaces the default `M_2⊗1 ⊂ M_4` in inclusion-based suites.
    pub inclusion: Option<Arc<Inclusion>>,
}

impl SuiteParams {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Default::default()
        }
    }

    pub fn trials(mut self, n: usize) -> Self {
        self.trials = Some(n);
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

/// Runs `trial(i, rng)` for `i < n` in parallel, records ordered by `i`.
pub(crate) fn run_trials(
    n: usize,
    seed: u64,
    trial: impl Fn(usize, &mut ChaCha8Rng) -> Result<(f64, f64)> + Sync,
) -> Result<Vec<TrialRecord>> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
            trial(i, &mut rng).map(|(value, slack)| TrialRecord {
                trial: i,
                value,
                slack,
            })
        })
        .collect()
}

/// Executes the named suite.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<VerificationReport> {
    let info = SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let trials = params.trials.unwrap_or(info.default_trials);
    let records = with_thread_cap(|| (info.run)(params, trials))?;
    let tol = params.tolerance.unwrap_or(info.tolerance);
    Ok(VerificationReport::from_records(
        info,
        params.seed,
        tol,
        records,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_psd;
    use crate::matrix::HermitianMatrix;

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let a = random_state(&Ensemble::hilbert_schmidt(3, 7)).unwrap();
        let b = random_state(&Ensemble::hilbert_schmidt(3, 7)).unwrap();
        let c = random_state(&Ensemble::hilbert_schmidt(3, 8)).unwrap();
        assert_eq!(a.rho(), b.rho());
        assert_ne!(a.rho(), c.rho());
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
    }

    #[test]
    fn fixed_spectrum_is_unitary_orbit() {
        let kind = EnsembleKind::SpectrumFixed {
            spectrum: vec![0.5, 0.5],
        };
        let s = random_state(&Ensemble::new(kind, 2, 3)).unwrap();
        // maximally mixed: density 1 relative to the normalized trace
        assert!((s.rho().matrix() - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
        let kind = EnsembleKind::SpectrumFixed {
            spectrum: vec![0.9, 0.1],
        };
        let s = random_state(&Ensemble::new(kind, 2, 3)).unwrap();
        let ev = s.rho().eigenvalues();
        assert!((ev[0] - 0.2).abs() < 1e-12 && (ev[1] - 1.8).abs() < 1e-12);
    }

    #[test]
    fn purified_haar_is_a_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_density(&EnsembleKind::PurifiedHaar { env: 3 }, 3, &mut rng).unwrap();
        assert!((s.trace().re - 1.0).abs() < 1e-12);
        assert!(is_psd(&HermitianMatrix::hermitize(s), 1e-12));
        assert!(matches!(
            random_state(&Ensemble::hilbert_schmidt(0, 1)),
            Err(Error::EmptyEnsemble)
        ));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run_suite("nope", &SuiteParams::default()),
            Err(Error::UnknownSuite(_))
        ));
    }
}
