//! One test per acceptance criterion; each prints its checks and a PASS/FAIL line.

use illposed::acceptance::{self, CriterionResult};

fn report(r: CriterionResult) {
    print!("{}", r.render());
    assert!(r.passed(), "criterion {} failed: {}", r.number, r.title);
}

#[test]
fn criterion_01_hausdorff_moment_operator() {
    report(acceptance::criterion_1());
}

#[test]
fn criterion_02_closed_form_multiplier_family() {
    report(acceptance::criterion_2());
}

#[test]
fn criterion_03_compact_noncompact_equivalence() {
    report(acceptance::criterion_3());
}

#[test]
fn criterion_04_riemann_liouville_discretization() {
    report(acceptance::criterion_4());
}

#[test]
fn criterion_05_hilbert_finite_sections() {
    report(acceptance::criterion_5());
}

#[test]
fn criterion_06_gaussian_fft_multiplier() {
    report(acceptance::criterion_6());
}

#[test]
fn criterion_07_measure_reweighting() {
    report(acceptance::criterion_7());
}

#[test]
fn criterion_08_ill_posedness_diagnostics() {
    report(acceptance::criterion_8());
}

#[test]
fn criterion_09_unbounded_multipliers() {
    report(acceptance::criterion_9());
}

#[test]
fn criterion_10_rearrangement_duality() {
    report(acceptance::criterion_10());
}
