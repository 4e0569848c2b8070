//! JSON spec files: named algebras, traces, states, inclusions and experiments.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{generated_algebra, MultiMatrixAlgebra, TraceWeight};
use crate::error::{Error, Result};
use crate::harness::{random_state_on, EnsembleKind, SuiteParams, SUITES};
use crate::inclusion::Inclusion;
use crate::matrix::{ComplexMatrix, C64};
use crate::states::State;

pub const SCHEMA_VERSION: u32 = 1;

/// The spec shipped with the crate; used when no `--spec` is given.
pub const DESK_SPEC: &str = include_str!("../../data/desk.json");

/// Row-major matrix of `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: u32,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub traces: BTreeMap<String, TraceSpec>,
    #[serde(default)]
    pub states: BTreeMap<String, StateSpec>,
    #[serde(default)]
    pub inclusions: BTreeMap<String, InclusionSpec>,
    #[serde(default)]
    pub experiments: BTreeMap<String, ExperimentSpec>,
}

/// `⊕ M_n ⊗ 1_m` given as `[n, m]` pairs, or the algebra generated by explicit matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum AlgebraSpec {
    Blocks {
        blocks: Vec<(usize, usize)>,
    },
    Generated {
        dim: usize,
        generators: Vec<MatrixSpec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    Normalized,
    Unnormalized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weights {
    Kind(TraceKind),
    PerBlock(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSpec {
    pub algebra: String,
    pub weights: Weights,
}

/// Either an ambient density (unit trace on `ℂ^d`) or an ensemble draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub trace: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectationMode {
    /// The unique expectation preserving the inclusion's trace.
    #[default]
    TracePreserving,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionSpec {
    pub ambient: String,
    pub sub: String,
    pub trace: String,
    #[serde(default)]
    pub expectation: ExpectationMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub seed: u64,
    pub suites: Vec<SuiteRun>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRun {
    pub suite: String,
    /// Report file stem; defaults to the suite name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<String>,
}

impl SuiteRun {
    pub fn report_name(&self) -> &str {
        self.report.as_deref().unwrap_or(&self.suite)
    }
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: SpecFile = serde_json::from_str(text)?;
        if spec.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                spec.schema
            )));
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn desk() -> Self {
        Self::parse(DESK_SPEC).expect("shipped spec parses")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes") + "\n"
    }
}

fn matrix(m: &MatrixSpec, what: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Config(format!(
            "{what}: matrix must be square and non-empty"
        )));
    }
    ComplexMatrix::from_rows(&rows)
}

fn config(what: &str, e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(format!("{what}: {other}")),
    }
}

/// A spec with every name resolved and every object validated.
#[derive(Clone, Debug)]
pub struct Desk {
    pub spec: SpecFile,
    pub algebras: BTreeMap<String, Arc<MultiMatrixAlgebra>>,
    /// Trace and the name of its algebra.
    pub traces: BTreeMap<String, (String, TraceWeight)>,
    pub states: BTreeMap<String, State>,
    pub inclusions: BTreeMap<String, Arc<Inclusion>>,
}

impl Desk {
    pub fn new(spec: SpecFile) -> Result<Self> {
        let mut algebras = BTreeMap::new();
        for (name, a) in &spec.algebras {
            let what = format!("algebra {name}");
            let alg = match a {
                AlgebraSpec::Blocks { blocks } => {
                    if blocks.is_empty() || blocks.iter().any(|&(n, m)| n == 0 || m == 0) {
                        return Err(Error::Config(format!(
                            "{what}: blocks must be non-empty positive pairs"
                        )));
                    }
                    MultiMatrixAlgebra::from_blocks(blocks)
                }
                AlgebraSpec::Generated { dim, generators } => {
                    let gens = generators
                        .iter()
                        .map(|g| matrix(g, &what))
                        .collect::<Result<Vec<_>>>()?;
                    if *dim == 0 || gens.iter().any(|g| g.dim() != *dim) {
                        return Err(Error::Config(format!(
                            "{what}: generators must be {dim}×{dim}"
                        )));
                    }
                    generated_algebra(&gens, *dim, 1).map_err(|e| config(&what, e))?
                }
            };
            algebras.insert(name.clone(), Arc::new(alg));
        }
        let algebra = |name: &str, by: &str| {
            algebras
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Config(format!("{by}: unknown algebra {name}")))
        };

        let mut traces = BTreeMap::new();
        for (name, t) in &spec.traces {
            let what = format!("trace {name}");
            let alg = algebra(&t.algebra, &what)?;
            let tau = match &t.weights {
                Weights::Kind(TraceKind::Normalized) => TraceWeight::normalized(&alg),
                Weights::Kind(TraceKind::Unnormalized) => TraceWeight::unnormalized(&alg),
                Weights::PerBlock(w) => {
                    TraceWeight::from_weights(&alg, w).map_err(|e| config(&what, e))?
                }
            };
            traces.insert(name.clone(), (t.algebra.clone(), tau));
        }
        let trace = |name: &str, by: &str| {
            traces
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Config(format!("{by}: unknown trace {name}")))
        };

        let mut states = BTreeMap::new();
        for (name, s) in &spec.states {
            let what = format!("state {name}");
            let (alg_name, tau) = trace(&s.trace, &what)?;
            let alg = algebra(&alg_name, &what)?;
            let phi = match (&s.density, &s.ensemble) {
                (Some(d), None) => {
                    if s.seed.is_some() {
                        return Err(Error::Config(format!(
                            "{what}: seed only applies to ensembles"
                        )));
                    }
                    let sigma = matrix(d, &what)?;
                    if sigma.dim() != alg.ambient_dim() {
                        return Err(config(
                            &what,
                            Error::DimensionMismatch {
                                expected: alg.ambient_dim(),
                                got: sigma.dim(),
                            },
                        ));
                    }
                    let violation = (&sigma - &sigma.adjoint()).frobenius_norm();
                    if violation > 1e-10 {
                        return Err(config(&what, Error::NotHermitian { violation }));
                    }
                    let phi = State::from_ambient_density(alg, tau, &sigma)
                        .map_err(|e| config(&what, e))?;
                    if !phi.is_state() {
                        return Err(config(
                            &what,
                            Error::Mass {
                                expected: 1.0,
                                got: phi.mass(),
                            },
                        ));
                    }
                    phi
                }
                (None, Some(kind)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.unwrap_or(0));
                    random_state_on(&alg, &tau, kind, &mut rng).map_err(|e| config(&what, e))?
                }
                _ => {
                    return Err(Error::Config(format!(
                        "{what}: give exactly one of density or ensemble"
                    )))
                }
            };
            states.insert(name.clone(), phi);
        }

        let mut inclusions = BTreeMap::new();
        for (name, i) in &spec.inclusions {
            let what = format!("inclusion {name}");
            let (tau_alg, tau) = trace(&i.trace, &what)?;
            if tau_alg != i.ambient {
                return Err(Error::Config(format!(
                    "{what}: trace {} lives on {tau_alg}, not {}",
                    i.trace, i.ambient
                )));
            }
            let ExpectationMode::TracePreserving = i.expectation;
            let inc = Inclusion::new(algebra(&i.ambient, &what)?, algebra(&i.sub, &what)?, tau)
                .map_err(|e| config(&what, e))?;
            inclusions.insert(name.clone(), Arc::new(inc));
        }

        for (name, x) in &spec.experiments {
            let what = format!("experiment {name}");
            let mut seen = BTreeSet::new();
            for run in &x.suites {
                if !SUITES.iter().any(|s| s.name == run.suite) {
                    return Err(Error::Config(format!(
                        "{what}: unknown suite {}",
                        run.suite
                    )));
                }
                if let Some(inc) = &run.inclusion {
                    if !inclusions.contains_key(inc) {
                        return Err(Error::Config(format!("{what}: unknown inclusion {inc}")));
                    }
                }
                if !seen.insert(run.report_name()) {
                    return Err(Error::Config(format!(
                        "{what}: duplicate report {}",
                        run.report_name()
                    )));
                }
            }
        }
        Ok(Self {
            spec,
            algebras,
            traces,
            states,
            inclusions,
        })
    }

    pub fn state(&self, name: &str) -> Result<&State> {
        self.states
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown state {name}")))
    }

    pub fn trace(&self, name: &str) -> Result<&(String, TraceWeight)> {
        self.traces
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown trace {name}")))
    }

    pub fn inclusion(&self, name: &str) -> Result<&Arc<Inclusion>> {
        self.inclusions
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown inclusion {name}")))
    }

    pub fn experiment(&self, name: &str) -> Result<&ExperimentSpec> {
        self.spec
            .experiments
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown experiment {name}")))
    }

    /// Harness parameters for one suite of an experiment.
    pub fn suite_params(&self, run: &SuiteRun, seed: u64, tol: Option<f64>) -> Result<SuiteParams> {
        Ok(SuiteParams {
            trials: run.trials,
            seed,
            tolerance: tol.or(run.tolerance),
            dim: run.dim,
            ensemble: run.ensemble.clone().unwrap_or_default(),
            inclusion: run
                .inclusion
                .as_deref()
                .map(|n| self.inclusion(n).cloned())
                .transpose()?,
        })
    }
}
