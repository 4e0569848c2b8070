//! Regression pins for seeded ensembles.

use vnlab::harness::{random_state, run_suite, Ensemble, SuiteParams};
use vnlab::states::s_tau;

#[test]
fn hilbert_schmidt_dim3_seed7() {
    let want = [
        (0.420003071305988, 0.0),
        (0.062468630075812055, 0.04597291801545625),
        (0.1524900355130772, -0.15856344520088778),
        (0.062468630075812055, -0.04597291801545625),
        (0.286754956532993, 0.0),
        (-0.009583207452618784, -0.10112715761603858),
        (0.1524900355130772, 0.15856344520088778),
        (-0.009583207452618784, 0.10112715761603858),
        (0.293241972161019, 0.0),
    ];
    let s = random_state(&Ensemble::hilbert_schmidt(3, 7)).unwrap();
    for (z, (re, im)) in s.ambient_density().matrix().to_row_major().iter().zip(want) {
        assert!(
            (z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14,
            "{z} vs ({re}, {im})"
        );
    }
    assert!((s_tau(&s, s.tau()).unwrap() - -0.20789558315745282).abs() < 1e-13);
}

#[test]
fn suite_reports_repeat_exactly() {
    for name in ["tvn", "pp-bound", "xu-identity"] {
        let p = SuiteParams::seeded(99).trials(40);
        let a = serde_json::to_string(&run_suite(name, &p).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(name, &p).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
