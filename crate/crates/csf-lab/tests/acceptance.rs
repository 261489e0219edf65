//! Acceptance suite: every numbered criterion below runs at its pinned
//! tolerance and prints one PASS line. Criteria drive the shipped experiment
//! registry (so the CLI path is exercised) or the library directly where no
//! experiment applies.

use std::collections::BTreeMap;

use csf_core::exact_solutions::{circle_pressure, oval_pressure, OvalParams};
use csf_core::flow_theta::harnack_margin;
use csf_core::geometry::{AngleGrid, CurvatureProfile};
use csf_lab::config::ExperimentConfig;
use csf_lab::experiments::run_experiment;

fn run_defaulted(name: &str, dir: &std::path::Path) -> csf_lab::ExperimentSummary {
    let mut config = ExperimentConfig::defaulted(name);
    config.out_dir = dir.to_path_buf();
    run_experiment(&config).unwrap_or_else(|e| panic!("experiment {name} errored: {e}"))
}

fn metric(summary: &csf_lab::ExperimentSummary, key: &str) -> f64 {
    *summary
        .metrics
        .get(key)
        .unwrap_or_else(|| panic!("metric {key} missing from {}", summary.name))
}

#[test]
fn criterion_01_oval_oracle_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("oval-verify", dir.path());
    let err = metric(&summary, "l_inf_err");
    assert!(summary.pass && err < 1e-6, "oval L_inf error {err}");
    println!("criterion 01 (oval-oracle solver accuracy): PASS, l_inf_err = {err:.3e}");
}

#[test]
fn criterion_02_circle_self_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("circle-verify", dir.path());
    let err = metric(&summary, "l_inf_err");
    assert!(summary.pass && err < 1e-9, "circle L_inf error {err}");
    println!("criterion 02 (circle self-similarity): PASS, l_inf_err = {err:.3e}");
}

#[test]
fn criterion_03_lyapunov_identity() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("lyapunov-monotone", dir.path());
    let rel = metric(&summary, "worst_rel_dissipation_err");
    let inc = metric(&summary, "max_increase_J");
    let max_j = metric(&summary, "max_J");
    assert!(rel < 0.01, "dissipation identity off by {rel}");
    assert!(inc <= 1e-8, "J increased by {inc}");
    assert!(max_j < 0.0, "J reached {max_j}");
    assert!(summary.pass);
    println!(
        "criterion 03 (Lyapunov J identity): PASS, worst relative dissipation error = {rel:.3e}, max J = {max_j:.3}"
    );
}

#[test]
fn criterion_04_stability_functional_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("I-functional-zero", dir.path());
    let wi = metric(&summary, "worst_abs_I");
    let wd = metric(&summary, "worst_abs_I_dissipation");
    assert!(wi < 1e-10 && wd < 1e-10, "I = {wi}, dI = {wd}");
    assert!(summary.pass);
    println!("criterion 04 (I ≡ 0 on ancient families): PASS, worst |I| = {wi:.3e}, worst |dI/dt| = {wd:.3e}");
}

#[test]
fn criterion_05_linearized_rates() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("normalized-rate", dir.path());
    let r2 = metric(&summary, "rate2");
    let r3 = metric(&summary, "rate3");
    assert!(
        (-2.2..=-1.8).contains(&r2),
        "mode-2 rate {r2} outside [-2.2, -1.8]"
    );
    assert!(
        (-7.7..=-6.3).contains(&r3),
        "mode-3 rate {r3} outside [-7.7, -6.3]"
    );
    assert!(summary.pass);
    println!("criterion 05 (linearized rates): PASS, rate2 = {r2:.4}, rate3 = {r3:.4}");
}

#[test]
fn criterion_06_backward_limit() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("backward-limit", dir.path());
    let a_err = metric(&summary, "a_err");
    let b_err = metric(&summary, "b_err");
    let b_quarter = metric(&summary, "b_quarter_err");
    let slope = metric(&summary, "residual_log_slope");
    // the γ = 0 oval limits onto a cos²(θ + b) with a → λ = 1 and b → γ = 0;
    // the π/2 phase belongs to the quarter-turned oval, asserted alongside
    assert!(a_err < 1e-6, "a error {a_err}");
    assert!(b_err < 1e-6, "b error {b_err}");
    assert!(b_quarter < 1e-6, "quarter-turned b error {b_quarter}");
    assert!(
        (slope - 2.0).abs() <= 0.2,
        "residual log-slope {slope} not 2 ± 10%"
    );
    assert!(summary.pass);
    println!(
        "criterion 06 (backward limit): PASS, a err = {a_err:.2e}, b err = {b_err:.2e}, b(γ=π/2) err = {b_quarter:.2e}, residual log-slope = {slope:.4}"
    );
}

#[test]
fn criterion_07_classifier_correctness() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("classify", dir.path());
    let passed = metric(&summary, "cases_passed");
    let total = metric(&summary, "cases_total");
    let wl = metric(&summary, "worst_lambda_err");
    let wg = metric(&summary, "worst_gamma_err");
    assert_eq!(
        passed,
        total,
        "classifier failed {} of {total} cases",
        total - passed
    );
    assert_eq!(total, 11.0, "circle + 9 ovals + mode-3 impostor");
    assert!(wl < 1e-6 && wg < 1e-6, "parameter errors λ {wl}, γ {wg}");
    assert!(summary.pass);
    println!(
        "criterion 07 (classifier correctness): PASS, {passed}/{total} cases, worst λ err = {wl:.2e}, worst γ err = {wg:.2e}"
    );
}

#[test]
fn criterion_08_oscillation_monotonicities() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("grayson-convexify", dir.path());
    let tac_inc = metric(&summary, "tac_max_increase");
    assert!(
        tac_inc <= 1e-4,
        "total absolute curvature increased by {tac_inc}"
    );
    assert_eq!(metric(&summary, "zero_count_nonincreasing"), 1.0);
    assert_eq!(
        metric(&summary, "zero_count_last"),
        0.0,
        "curve did not convexify"
    );
    assert!(summary.pass);
    // sturm-monotone adds the independent heat-flow oracle
    let sturm = run_defaulted("sturm-monotone", dir.path());
    assert!(sturm.pass, "sturm-monotone failed: {:?}", sturm.metrics);
    println!(
        "criterion 08 (oscillation monotonicities): PASS, TAC max increase = {tac_inc:.2e}, zeros {} -> 0",
        metric(&summary, "zero_count_first")
    );
}

#[test]
fn criterion_09_area_law() {
    let dir = tempfile::tempdir().unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut slopes = BTreeMap::new();
    for name in ["grayson-convexify", "tac-monotone"] {
        let summary = run_defaulted(name, dir.path());
        let slope = metric(&summary, "area_slope");
        assert!(
            ((slope + two_pi) / two_pi).abs() <= 0.01,
            "{name}: area slope {slope} not -2π ± 1%"
        );
        slopes.insert(name, slope);
    }
    println!("criterion 09 (area law health check): PASS, slopes = {slopes:?}");
}

#[test]
fn criterion_10_grim_reaper_soliton() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_defaulted("grim-reaper-soliton", dir.path());
    let h = metric(&summary, "hausdorff");
    assert!(h < 1e-3, "soliton Hausdorff distance {h}");
    assert!(summary.pass);
    println!("criterion 10 (grim-reaper soliton): PASS, Hausdorff = {h:.3e}");
}

#[test]
fn criterion_11_harnack_diagnostic() {
    let grid = AngleGrid::new(256).unwrap();
    // nonnegative margins across t ∈ [-10, -0.1] on both ancient families
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let t = -10.0 + (10.0 - 0.1) * i as f64 / 99.0;
        worst = worst.min(harnack_margin(&circle_pressure(grid, t).unwrap()).unwrap());
        for &gamma in &[0.0, 0.3] {
            let params = OvalParams::new(1.0, gamma).unwrap();
            worst = worst.min(harnack_margin(&oval_pressure(grid, params, t).unwrap()).unwrap());
        }
    }
    assert!(worst >= 0.0, "ancient-family margin dipped to {worst}");

    // A steep non-ancient profile has negative margin. A mode-1 bump cannot
    // violate the inequality — its pointwise minimum is (1-a)(2-a) > 0 for
    // every amplitude a < 1 — so the failing witness is the mode-3 profile;
    // both brute-force values are pinned.
    let tame = CurvatureProfile::from_fn(grid, -1.0, |t| 1.0 + 0.9 * t.cos());
    let tame_margin = harnack_margin(&tame).unwrap();
    assert!(
        (tame_margin - 0.11).abs() < 1e-10,
        "mode-1 margin {tame_margin}"
    );
    let steep = CurvatureProfile::from_fn(grid, -1.0, |t| 1.0 + 0.9 * (3.0 * t).cos());
    let steep_margin = harnack_margin(&steep).unwrap();
    assert!(
        steep_margin < 0.0,
        "steep profile margin {steep_margin} should be negative"
    );
    assert!((steep_margin - (-8.17)).abs() < 1e-9);
    println!(
        "criterion 11 (Harnack diagnostic): PASS, worst ancient margin = {worst:.3e}, steep mode-3 margin = {steep_margin:.3}, mode-1 margin = +{tame_margin:.3} (cannot go negative)"
    );
}

#[test]
fn criterion_12_determinism() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    // one tangent-angle and one arclength experiment cover both solvers
    for name in ["circle-verify", "sturm-monotone"] {
        let sa = run_defaulted(name, dir_a.path());
        let sb = run_defaulted(name, dir_b.path());
        assert_eq!(sa.files, sb.files, "{name}: file lists differ");
        for file in &sa.files {
            let a = std::fs::read(dir_a.path().join(name).join(file)).unwrap();
            let b = std::fs::read(dir_b.path().join(name).join(file)).unwrap();
            assert_eq!(a, b, "{name}/{file} differs between identical runs");
        }
    }
    println!("criterion 12 (determinism): PASS, bit-identical artifacts across reruns");
}
