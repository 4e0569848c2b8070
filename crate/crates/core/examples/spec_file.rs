//! Loading the shipped spec, resolving names and running an experiment in
//! process, as `vnlab verify` does.

use vnlab::cli::{write_reports, Desk, SpecFile};
use vnlab::harness::run_suite;
use vnlab::states::s_tau;

fn main() -> vnlab::Result<()> {
    let desk = Desk::new(SpecFile::desk())?;
    println!("algebras: {:?}", desk.algebras.keys().collect::<Vec<_>>());
    println!(
        "experiments: {:?}",
        desk.spec.experiments.keys().collect::<Vec<_>>()
    );

    for name in ["m2-pure", "m2-tracial", "m2-unbalanced"] {
        let phi = desk.state(name)?;
        println!("{name:<14} S_tau = {:+.7}", s_tau(phi, phi.tau())?);
    }
    for name in ["c-in-m3", "m2-in-m4", "trivial"] {
        let r = desk.inclusion(name)?.index_report();
        println!("{name:<14} positive {:.6} cp {:.6}", r.pp_positive, r.pp_cp);
    }

    let quick = desk.experiment("quick")?;
    let mut reports = Vec::new();
    for run in &quick.suites {
        let r = run_suite(&run.suite, &desk.suite_params(run, quick.seed, None)?)?;
        println!("{:<20} passed {}", run.report_name(), r.passed);
        reports.push((run.report_name().to_string(), r));
    }
    let dir = std::env::temp_dir().join("vnlab-spec-example");
    write_reports(&dir, &reports)?;
    println!("reports in {}", dir.display());
    Ok(())
}
