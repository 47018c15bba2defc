use krein_core::verify::{run_suite, run_suite_with, Execution, Suite, SuiteConfig};
use krein_core::TolerancePolicy;

fn config(trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        trials,
        dim_max: 6,
        seed,
        tol: TolerancePolicy::default(),
    }
}

#[test]
fn every_suite_passes_200_trials() {
    for suite in Suite::ALL {
        let trials = if suite == Suite::Unsolvable { 50 } else { 200 };
        let r = run_suite(suite, &config(trials, 77));
        assert!(r.ok(), "{suite}: {:?}", r.failures.first());
        assert_eq!(r.passed, trials);
    }
}

#[test]
fn sum_identity_rejection_rate_is_low() {
    let r = run_suite(Suite::LemmaLjt2, &config(500, 3));
    assert!(r.ok());
    assert!(r.rejection_rate() < 0.05, "rate {}", r.rejection_rate());
}

#[test]
fn execution_mode_does_not_change_results() {
    for suite in [Suite::Completion, Suite::ExtensionSandwich, Suite::ThmB] {
        let cfg = config(40, 5);
        let a = run_suite_with(suite, &cfg, Execution::Sequential);
        let b = run_suite_with(suite, &cfg, Execution::Parallel);
        assert_eq!(a, b, "{suite}");
    }
}
