//! Acceptance suite at full sample sizes. Prints one PASS/FAIL line per
//! property (run with `--nocapture` to see them).

use tmgs::verify::{
    check_e_minimum, check_f_minimum, check_f_tilde_equivalence, check_g_minimum, check_hessians,
    check_local_invariance, check_root_bracketing, check_special_families, check_spectral_identities,
    check_threshold_chain, CheckResult, Counts, VerifyConfig,
};

const SEED: u64 = 20240917;

fn cfg() -> VerifyConfig {
    VerifyConfig::new(Counts::FULL, SEED)
}

fn report(r: CheckResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}\nfirst failures: {:#?}", r.line(), r.failures);
}

#[test]
fn e_minimum_matches_brute_force() {
    report(check_e_minimum(&cfg()));
}

#[test]
fn f_minimum_matches_brute_force() {
    report(check_f_minimum(&cfg()));
}

#[test]
fn g_minimum_matches_brute_force() {
    report(check_g_minimum(&cfg()));
}

#[test]
fn f_tilde_sign_tracks_ppt_invariant() {
    report(check_f_tilde_equivalence(&cfg()));
}

#[test]
fn scaling_root_is_bracketed_and_solved() {
    report(check_root_bracketing(&cfg()));
}

#[test]
fn spectral_identities_hold() {
    report(check_spectral_identities(&cfg()));
}

#[test]
fn hessians_match_finite_differences() {
    report(check_hessians(&cfg()));
}

#[test]
fn special_family_scalings() {
    report(check_special_families(&cfg()));
}

#[test]
fn invariants_survive_local_symplectic_maps() {
    report(check_local_invariance(&cfg()));
}

#[test]
fn separability_tests_flip_together() {
    report(check_threshold_chain(&cfg()));
}

#[test]
fn injected_fault_is_detected() {
    let r = check_e_minimum(&VerifyConfig { inject_fault: true, ..VerifyConfig::new(Counts::uniform(20), SEED) });
    println!("{} (expected FAIL)", r.line());
    assert!(!r.passed);
}
