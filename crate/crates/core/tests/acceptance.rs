//! End-to-end acceptance run: every numbered check from the built-in
//! verification suite, one test per check, each printing its report line.
//! Run with `--nocapture` to see measured values, bounds, and margins.

use avgdiff::verify::{criteria, format_line, CriterionReport};

fn run_one(id: usize) -> CriterionReport {
    let (_, _, f) = criteria()
        .into_iter()
        .find(|(i, _, _)| *i == id)
        .expect("criterion id exists");
    let report = f();
    println!("{}", format_line(&report));
    println!("    {}", report.detail);
    assert!(report.passed, "criterion {id} failed: {}", report.detail);
    report
}

#[test]
fn c01_cesaro_lacunary_bound() {
    run_one(1);
}

#[test]
fn c02_cesaro_identity_divergence() {
    run_one(2);
}

#[test]
fn c03_pairwise_multiplier_floor() {
    run_one(3);
}

#[test]
fn c04_sinc_pair_floor() {
    run_one(4);
}

#[test]
fn c05_real_vs_integer_sup() {
    run_one(5);
}

#[test]
fn c06_bernoulli_tail_closed_form() {
    run_one(6);
}

#[test]
fn c07_stolz_domination() {
    run_one(7);
}

#[test]
fn c08_bernoulli_lacunary_growth() {
    run_one(8);
}

#[test]
fn c09_double_exp_stability() {
    run_one(9);
}

#[test]
fn c10_power_window_probe() {
    run_one(10);
}

#[test]
fn c11_sinc_dyadic_bound() {
    run_one(11);
}

#[test]
fn c12_sinc_harmonic_growth() {
    run_one(12);
}

#[test]
fn c13_smoothed_total_bound() {
    run_one(13);
}

#[test]
fn c14_box_difference_ladder() {
    run_one(14);
}

#[test]
fn c15_block_sum_divergence() {
    run_one(15);
}

#[test]
fn c16_sign_oracle_alignment() {
    run_one(16);
}

#[test]
fn c17_rademacher_square_function() {
    run_one(17);
}

#[test]
fn c18_rotation_tent_ladder() {
    run_one(18);
}

#[test]
fn c19_lacunary_lp_uniformity() {
    run_one(19);
}

#[test]
fn c20_sampling_refinement_growth() {
    run_one(20);
}
