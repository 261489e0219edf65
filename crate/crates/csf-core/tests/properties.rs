//! Property tests for the structural identities: mode decomposition as an
//! isometry, the Wirtinger inequality, the integral bound implied by a
//! nonnegative Harnack margin, and reconstruction round trips on randomly
//! generated closure-satisfying profiles.

use proptest::prelude::*;

use csf_core::asymptotics::{fourier_decompose, synthesize};
use csf_core::flow_arclength::sturm_zero_count;
use csf_core::flow_theta::harnack_margin;
use csf_core::functionals::wirtinger_gap;
use csf_core::geometry::{
    closure_residual, curvature_of_curve, geometric_measures, reconstruct_curve, AngleGrid,
    CurvatureProfile,
};
use csf_core::spectral::periodic_integral;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn sample_grid(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n).map(|j| f(TWO_PI * j as f64 / n as f64)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// decompose ∘ synthesize is the identity on band-limited data, and the
    /// discrete mean square obeys the Parseval relation in this normalization.
    #[test]
    fn decompose_synthesize_round_trip(
        alpha in prop::collection::vec(-1.0f64..1.0, 9),
        beta_tail in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let n = 64;
        let mut beta = vec![0.0];
        beta.extend(beta_tail);
        let samples = {
            let mut s = vec![0.0; n];
            for (j, v) in s.iter_mut().enumerate() {
                let t = TWO_PI * j as f64 / n as f64;
                for (l, &a) in alpha.iter().enumerate() {
                    *v += a * (l as f64 * t).cos();
                }
                for (l, &b) in beta.iter().enumerate().skip(1) {
                    *v += b * (l as f64 * t).sin();
                }
            }
            s
        };
        let spectrum = fourier_decompose(&samples, 8).unwrap();
        for l in 0..=8 {
            prop_assert!((spectrum.alpha(l) - alpha[l]).abs() < 1e-12);
            prop_assert!((spectrum.beta(l) - beta[l]).abs() < 1e-12);
        }
        let back = synthesize(&spectrum, n);
        for (a, b) in samples.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // Parseval: mean of f² = α₀² + ½ Σ_{l≥1} (α_l² + β_l²)
        let mean_sq = samples.iter().map(|v| v * v).sum::<f64>() / n as f64;
        let parseval = spectrum.alpha(0).powi(2)
            + 0.5
                * (1..=8)
                    .map(|l| spectrum.alpha(l).powi(2) + spectrum.beta(l).powi(2))
                    .sum::<f64>();
        prop_assert!((mean_sq - parseval).abs() < 1e-10);
    }

    /// The Wirtinger inequality: λ² ∫f_θ² ≥ ∫f² for f vanishing at the ends
    /// of an interval of length λπ.
    #[test]
    fn wirtinger_gap_is_nonnegative(
        coeffs in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let n = 513;
        let f: Vec<f64> = (0..n)
            .map(|j| {
                let t = std::f64::consts::PI * j as f64 / (n - 1) as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * ((i + 1) as f64 * t).sin())
                    .sum()
            })
            .collect();
        let gap = wirtinger_gap(&f, 0.0, std::f64::consts::PI, 1.0).unwrap();
        prop_assert!(gap >= -1e-9, "gap {gap}");
    }

    /// Profiles with nonnegative Harnack margin satisfy ∫ p_θ²/p ≤ 4 ∫ p
    /// (divide the pointwise inequality by p and integrate by parts).
    #[test]
    fn margin_implies_integral_gradient_bound(
        c0 in 0.5f64..2.0,
        amps in prop::collection::vec(-0.2f64..0.2, 3),
    ) {
        let n = 128;
        let p = sample_grid(n, |t| {
            c0 + amps
                .iter()
                .enumerate()
                .map(|(i, a)| a * ((i + 1) as f64 * t).cos())
                .sum::<f64>()
        });
        prop_assume!(p.iter().all(|&v| v > 0.05));
        let grid = AngleGrid::new(n).unwrap();
        let profile = CurvatureProfile::pressure(grid, p.clone(), -1.0).unwrap();
        let margin = harnack_margin(&profile).unwrap();
        prop_assume!(margin >= 0.0);
        let diff = csf_core::spectral::Differentiator::new(n);
        let p_th = diff.derivative(&p, 1);
        let lhs_integrand: Vec<f64> =
            (0..n).map(|j| p_th[j] * p_th[j] / p[j]).collect();
        let lhs = periodic_integral(&lhs_integrand);
        let rhs = 4.0 * periodic_integral(&p);
        prop_assert!(lhs <= rhs + 1e-10, "lhs {lhs} > rhs {rhs} with margin {margin}");
    }

    /// Periodic sign changes come in pairs.
    #[test]
    fn zero_count_is_even(
        coeffs in prop::collection::vec(-1.0f64..1.0, 5),
    ) {
        let n = 256;
        let samples = sample_grid(n, |t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * ((i + 1) as f64 * t).sin() + 0.3 * c * (i as f64 * t).cos())
                .sum()
        });
        if let Ok(count) = sturm_zero_count(&samples, 1e-12) {
            prop_assert!(count % 2 == 0, "odd count {count}");
        }
    }

    /// Random convex-ish profiles built with no mode-1 content in 1/κ satisfy
    /// the closure condition exactly, reconstruct to an embedded closed
    /// curve, and the polygon curvature matches √p.
    #[test]
    fn reconstruction_round_trip(
        c0 in 0.8f64..1.2,
        a2 in -0.05f64..0.05,
        b3 in -0.05f64..0.05,
        a4 in -0.03f64..0.03,
    ) {
        let n = 256;
        // radius-of-curvature function with vanishing mode-1 pair
        let inv_kappa = |t: f64| {
            c0 + a2 * (2.0 * t).cos() + b3 * (3.0 * t).sin() + a4 * (4.0 * t).cos()
        };
        let grid = AngleGrid::new(n).unwrap();
        let profile = CurvatureProfile::from_fn(grid, -1.0, |t| {
            let k = 1.0 / inv_kappa(t);
            k * k
        });
        let (cx, cy) = closure_residual(&profile).unwrap();
        prop_assert!(cx.hypot(cy) < 1e-8, "closure ({cx}, {cy})");
        let curve = reconstruct_curve(&profile).unwrap();
        prop_assert!(curve.is_embedded());
        prop_assert!(geometric_measures(&curve).signed_area > 0.0);
        let ks = curvature_of_curve(&curve).unwrap();
        let mut worst = 0.0f64;
        for (j, &(_, k)) in ks.iter().enumerate() {
            let t = TWO_PI * j as f64 / n as f64;
            worst = worst.max((k - 1.0 / inv_kappa(t)).abs());
        }
        prop_assert!(worst < 1e-2, "curvature round-trip error {worst}");
    }

    /// Reversing orientation flips the shoelace sign and keeps the length.
    #[test]
    fn orientation_flip(
        bump in -0.2f64..0.2,
        phase in 0.0f64..TWO_PI,
    ) {
        let n = 128;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|j| {
                let t = TWO_PI * j as f64 / n as f64;
                let r = 1.0 + bump * (3.0 * t + phase).cos();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let fwd = csf_core::geometry::PlanarCurve::closed(pts.clone()).unwrap();
        let mut rev_pts = pts;
        rev_pts.reverse();
        let rev = csf_core::geometry::PlanarCurve::closed(rev_pts).unwrap();
        let mf = geometric_measures(&fwd);
        let mr = geometric_measures(&rev);
        prop_assert!((mf.signed_area + mr.signed_area).abs() < 1e-12);
        prop_assert!((mf.length - mr.length).abs() < 1e-12);
    }
}

/// Deterministic order check: the curvature round trip error decays at least
/// quadratically as the grid doubles.
#[test]
fn round_trip_convergence_order() {
    let inv_kappa = |t: f64| 1.0 + 0.1 * (2.0 * t).cos() + 0.05 * (3.0 * t).sin();
    let err_at = |n: usize| -> f64 {
        let grid = AngleGrid::new(n).unwrap();
        let profile = CurvatureProfile::from_fn(grid, -1.0, |t| {
            let k = 1.0 / inv_kappa(t);
            k * k
        });
        let curve = reconstruct_curve(&profile).unwrap();
        let ks = curvature_of_curve(&curve).unwrap();
        ks.iter()
            .enumerate()
            .map(|(j, &(_, k))| {
                let t = TWO_PI * j as f64 / n as f64;
                (k - 1.0 / inv_kappa(t)).abs()
            })
            .fold(0.0, f64::max)
    };
    let e1 = err_at(128);
    let e2 = err_at(256);
    let e3 = err_at(512);
    assert!(e2 < e1 / 3.5, "first halving: {e1} -> {e2}");
    assert!(e3 < e2 / 3.5, "second halving: {e2} -> {e3}");
}

/// Closure residuals of profiles sampled from genuinely closed convex curves
/// stay below the closing tolerance.
#[test]
fn closure_residual_of_closed_forms() {
    use csf_core::exact_solutions::{circle_pressure, oval_pressure, OvalParams};
    let grid = AngleGrid::new(256).unwrap();
    for &t in &[-5.0, -1.0, -0.3] {
        let (cx, cy) = closure_residual(&circle_pressure(grid, t).unwrap()).unwrap();
        assert!(cx.hypot(cy) < 1e-10);
        for &gamma in &[0.0, 0.4, 1.2] {
            let params = OvalParams::new(1.0, gamma).unwrap();
            let (cx, cy) = closure_residual(&oval_pressure(grid, params, t).unwrap()).unwrap();
            assert!(
                cx.hypot(cy) < 1e-10,
                "oval closure ({cx}, {cy}) at t={t}, γ={gamma}"
            );
        }
    }
}
