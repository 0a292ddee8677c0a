//! Acceptance suite: one test per criterion, each printing its verdict
//! line. Run with `cargo test --test acceptance -- --nocapture` to see all
//! verdicts; a failing test prints its verdict in the panic message too.
//!
//! Criteria 7 and 9 contain clauses that measurably cannot hold at the
//! pinned sizes (finite-size corrections decay too slowly); they are
//! asserted as specified rather than weakened, so their failures are
//! expected and documented.

use icelab_core::suite::{self, CriterionOutcome};

fn assert_criterion(outcome: CriterionOutcome) {
    let line = outcome.verdict_line();
    println!("{line}");
    assert!(outcome.passed, "{line}");
}

#[test]
fn criterion_01_ik_identity() {
    assert_criterion(suite::criterion_01_ik_identity());
}

#[test]
fn criterion_02_free_ik_identity() {
    assert_criterion(suite::criterion_02_free_ik_identity());
}

#[test]
fn criterion_03_yang_baxter() {
    assert_criterion(suite::criterion_03_yang_baxter());
}

#[test]
fn criterion_04_schur_bridge() {
    assert_criterion(suite::criterion_04_schur_bridge());
}

#[test]
fn criterion_05_contours() {
    assert_criterion(suite::criterion_05_contours());
}

#[test]
fn criterion_06_oneq_limit() {
    assert_criterion(suite::criterion_06_oneq_limit());
}

#[test]
fn criterion_07_height_tracy_widom() {
    // The standardized-mean and KS clauses fail at N = 1000: the exact
    // transfer-matrix values of E[H_N] show the standardized mean is still
    // ~2.0 there (limit 1.7711), drifting down by only ~0.02 per doubling
    // of N. Asserted as specified; see the repository notes.
    assert_criterion(suite::criterion_07_height_tracy_widom());
}

#[test]
fn criterion_08_sampler_exactness() {
    assert_criterion(suite::criterion_08_sampler_exactness());
}

#[test]
fn criterion_09_gue_corners() {
    // The per-row count clauses fail at N = 128: exact enumeration at small
    // N extrapolates to P(row 2) ~ 0.85 and P(row 3) ~ 0.67 there (the
    // collision probability decays like 1/sqrt(N)), so the > 0.9 threshold
    // needs N in the several-hundreds. Every other clause passes.
    assert_criterion(suite::criterion_09_gue_corners());
}

#[test]
fn criterion_10_f2_numerics() {
    assert_criterion(suite::criterion_10_f2_numerics());
}

#[test]
fn criterion_11_airy_identities() {
    assert_criterion(suite::criterion_11_airy_identities());
}

#[test]
fn criterion_12_sigma_consistency() {
    assert_criterion(suite::criterion_12_sigma_consistency());
}
