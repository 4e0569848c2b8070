//! The `vnlab` command line: spec loading, dispatch and report files.
//!
//! Exit codes: 0 when every check passes, 1 on a violation, 2 on a
//! configuration error. Printed text never changes the exit code.

pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::harness::{maximize_gap, run_suite, GapBudget, VerificationReport};
use crate::relent::{
    kosaki_eval, rel_entropy_closed, rel_entropy_modular, KosakiGrid, OperatorSubspace,
};
use crate::states::{s_tau, s_vn};

pub use spec::{Desk, SpecFile, DESK_SPEC};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "vnlab",
    version,
    about = "Entropy and index computations for finite-dimensional inclusions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Spec file (JSON, schema 1); defaults to the shipped desk spec.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the tolerance of every check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Report directory for `verify`.
    #[arg(long, global = true, default_value = "reports")]
    pub out: PathBuf,
    /// Print entropies in bits.
    #[arg(long, global = true)]
    pub log2: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segal and von Neumann entropy of a state.
    Entropy {
        state: String,
        /// Trace for `S_τ`; defaults to the state's own.
        #[arg(long)]
        trace: Option<String>,
    },
    /// `S(φ‖ψ)` by the closed form, the relative modular operator and the step-function bound.
    Relent { phi: String, psi: String },
    /// Positive and completely positive Pimsner–Popa indices.
    Index { inclusion: String },
    /// Runs an experiment and writes one JSON report per suite plus `slacks.csv`.
    Verify { experiment: String },
    /// Searches for the state of largest entropy increase under restriction.
    Maximize {
        inclusion: String,
        #[arg(long)]
        restarts: Option<usize>,
    },
}

/// Seven decimals, without a sign on values that round to zero.
fn fixed(x: f64) -> String {
    let x = if x.abs() < 5e-8 { 0.0 } else { x };
    format!("{x:.7}")
}

struct Units {
    log2: bool,
}

impl Units {
    fn show(&self, x: f64) -> String {
        let v = if self.log2 {
            x / std::f64::consts::LN_2
        } else {
            x
        };
        format!("{} {}", fixed(v), if self.log2 { "bits" } else { "nats" })
    }
}

/// Parses `args` and runs the command, writing human-readable output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn load(cli: &Cli) -> Result<Desk> {
    let spec = match &cli.spec {
        Some(p) => SpecFile::load(p)?,
        None => SpecFile::desk(),
    };
    Desk::new(spec)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let desk = load(cli)?;
    let u = Units { log2: cli.log2 };
    match &cli.command {
        Command::Entropy { state, trace } => {
            entropy(&desk, state, trace.as_deref(), cli.tol, &u, out)
        }
        Command::Relent { phi, psi } => relent(&desk, phi, psi, cli.tol, &u, out),
        Command::Index { inclusion } => index(&desk, inclusion, cli.tol, out),
        Command::Verify { experiment } => {
            verify(&desk, experiment, cli.seed, cli.tol, &cli.out, out)
        }
        Command::Maximize {
            inclusion,
            restarts,
        } => {
            let mut budget = GapBudget {
                seed: cli.seed.unwrap_or(0),
                ..Default::default()
            };
            if let Some(r) = restarts {
                budget.restarts = *r;
            }
            maximize(&desk, inclusion, budget, cli.tol, &u, out)
        }
    }
}

fn state_algebra<'a>(desk: &'a Desk, state: &str) -> Result<&'a str> {
    let s = desk
        .spec
        .states
        .get(state)
        .ok_or_else(|| Error::Config(format!("unknown state {state}")))?;
    Ok(desk.trace(&s.trace)?.0.as_str())
}

fn entropy(
    desk: &Desk,
    name: &str,
    trace: Option<&str>,
    tol: Option<f64>,
    u: &Units,
    out: &mut dyn Write,
) -> Result<i32> {
    let tol = tol.unwrap_or(1e-9);
    let phi = desk.state(name)?;
    let alg_name = state_algebra(desk, name)?;
    let tau = match trace {
        Some(t) => {
            let (on, tau) = desk.trace(t)?;
            if on != alg_name {
                return Err(Error::Config(format!(
                    "trace {t} lives on {on}, state {name} on {alg_name}"
                )));
            }
            tau.clone()
        }
        None => phi.tau().clone(),
    };
    let st = s_tau(phi, &tau)?;
    writeln!(out, "state {name} on {alg_name}")?;
    writeln!(out, "S_tau = {}", u.show(st))?;
    let mut code = EXIT_PASS;
    if phi.algebra().is_factor() {
        let sv = s_vn(phi)?;
        let w = tau.weights()[0];
        let residual = (st - (sv + w.ln())).abs();
        writeln!(out, "S_vN  = {}", u.show(sv))?;
        writeln!(
            out,
            "S_vN + log w = {} (w = {w:.7}), residual {residual:.3e}",
            u.show(sv + w.ln())
        )?;
        if !(residual <= tol) {
            code = EXIT_VIOLATION;
        }
    } else {
        writeln!(out, "S_vN  = n/a ({} blocks)", phi.algebra().blocks().len())?;
    }
    Ok(code)
}

fn relent(
    desk: &Desk,
    phi: &str,
    psi: &str,
    tol: Option<f64>,
    u: &Units,
    out: &mut dyn Write,
) -> Result<i32> {
    let tol = tol.unwrap_or(1e-9);
    let (a1, a2) = (state_algebra(desk, phi)?, state_algebra(desk, psi)?);
    if a1 != a2 {
        return Err(Error::Config(format!(
            "states live on different algebras ({a1}, {a2})"
        )));
    }
    let (x, y) = (desk.state(phi)?, desk.state(psi)?);
    let closed = rel_entropy_closed(x, y)?;
    let modular = rel_entropy_modular(x, y)?;
    let v = OperatorSubspace::from_algebra(x.algebra());
    let kosaki = kosaki_eval(x, y, &v, &KosakiGrid::default())?;
    let residual = if closed.is_infinite() && modular == closed {
        0.0
    } else {
        (closed - modular).abs()
    };
    writeln!(out, "S({phi}||{psi})")?;
    writeln!(out, "closed form      {}", u.show(closed))?;
    writeln!(out, "modular operator {}", u.show(modular))?;
    writeln!(out, "step functions   {}", u.show(kosaki))?;
    writeln!(out, "route residual   {residual:.3e}")?;
    Ok(if residual <= tol {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

fn index(desk: &Desk, name: &str, tol: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let tol = tol.unwrap_or(1e-8);
    let inc = desk.inclusion(name)?;
    let r = inc.index_report();
    writeln!(out, "inclusion {name}")?;
    writeln!(out, "pp_positive = {}", fixed(r.pp_positive))?;
    writeln!(out, "pp_cp       = {}", fixed(r.pp_cp))?;
    if let Some(c) = r.closed_form {
        writeln!(out, "closed form = {}", fixed(c))?;
    }
    let amps: Vec<String> = r
        .witness_vector
        .iter()
        .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
        .collect();
    writeln!(
        out,
        "witness     = block {}, [{}]",
        r.witness_block,
        amps.join(", ")
    )?;
    writeln!(out, "optimality gap = {}", fixed(r.optimality_gap))?;
    let c = &r.choi_certificate;
    writeln!(
        out,
        "choi: block {}, lambda {}, min eigenvalue {:.3e}, unit in support: {}",
        c.block,
        fixed(c.lambda),
        c.min_eigenvalue,
        c.in_support
    )?;
    Ok(if r.optimality_gap >= -tol * r.pp_cp.max(1.0) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

fn maximize(
    desk: &Desk,
    name: &str,
    budget: GapBudget,
    tol: Option<f64>,
    u: &Units,
    out: &mut dyn Write,
) -> Result<i32> {
    let tol = tol.unwrap_or(1e-4);
    let inc = desk.inclusion(name)?;
    let m = maximize_gap(inc, &budget)?;
    writeln!(out, "inclusion {name}")?;
    writeln!(out, "best gap  = {}", u.show(m.best_gap))?;
    writeln!(out, "log index = {}", u.show(m.bound))?;
    writeln!(
        out,
        "restarts  = {}, converged: {}",
        m.restarts_used, m.converged
    )?;
    let ok = m.best_gap <= m.bound + 1e-8 && m.best_gap >= m.bound - tol;
    Ok(if ok { EXIT_PASS } else { EXIT_VIOLATION })
}

/// Writes `<suite>.json` per report and one `slacks.csv`.
pub fn write_reports(dir: &Path, reports: &[(String, VerificationReport)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut csv = csv::Writer::from_path(dir.join("slacks.csv"))?;
    csv.write_record(["suite", "trial", "slack"])?;
    for (name, r) in reports {
        let json = serde_json::to_string_pretty(r)? + "\n";
        std::fs::write(dir.join(format!("{name}.json")), json)?;
        for t in &r.records {
            csv.write_record([
                name.as_str(),
                &t.trial.to_string(),
                &format!("{:e}", t.slack),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}

fn verify(
    desk: &Desk,
    name: &str,
    seed: Option<u64>,
    tol: Option<f64>,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let x = desk.experiment(name)?;
    let seed = seed.unwrap_or(x.seed);
    let mut reports = Vec::with_capacity(x.suites.len());
    for run in &x.suites {
        let params = desk.suite_params(run, seed, tol)?;
        let r = run_suite(&run.suite, &params)?;
        writeln!(
            out,
            "{} {:<28} trials {:>5}  max violation {:.3e}  min slack {:.3e}",
            if r.passed { "PASS" } else { "FAIL" },
            run.report_name(),
            r.trials,
            r.max_violation,
            r.min_slack
        )?;
        reports.push((run.report_name().to_string(), r));
    }
    write_reports(dir, &reports)?;
    let failed = reports.iter().filter(|(_, r)| !r.passed).count();
    writeln!(
        out,
        "{name}: {} of {} suites passed, reports in {}",
        reports.len() - failed,
        reports.len(),
        dir.display()
    )?;
    Ok(if failed == 0 {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}
