//! Fourier-mode machinery: decomposition against the trigonometric basis,
//! the linearized spectrum about the circle fixed point, exponential-rate and
//! backward-limit fitting, quadrupole extraction from normalized runs, and
//! the ancient-solution classifier.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_solutions::{wrap_mod_pi, OvalParams};
use crate::flow_theta::{Frame, ThetaFlowState};
use crate::functionals::FunctionalSeries;
use crate::geometry::CurvatureProfile;
use crate::spectral::{periodic_integral, trig_coefficients, trig_synthesize};
use crate::trajectory::FlowTrajectory;

/// Coefficients (α_l, β_l) of a periodic profile against {cos lθ, sin lθ},
/// normalized so a pure cos lθ input yields α_l = 1. β_0 is kept as a zero
/// slot so both lists index directly by mode number.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl ModeSpectrum {
    pub fn max_mode(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self, l: usize) -> f64 {
        self.alpha[l]
    }

    pub fn beta(&self, l: usize) -> f64 {
        self.beta[l]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// √(α_l² + β_l²)
    pub fn amplitude(&self, l: usize) -> f64 {
        self.alpha[l].hypot(self.beta[l])
    }
}

/// Decompose uniform periodic samples into modes 0..=max_mode.
/// Requires n ≥ 2·max_mode + 2 so every requested mode is resolved.
pub fn fourier_decompose(samples: &[f64], max_mode: usize) -> Result<ModeSpectrum> {
    let (alpha, beta) = trig_coefficients(samples, max_mode)?;
    Ok(ModeSpectrum { alpha, beta })
}

/// Evaluate the spectrum back on an n-point grid.
pub fn synthesize(spectrum: &ModeSpectrum, n: usize) -> Vec<f64> {
    trig_synthesize(&spectrum.alpha, &spectrum.beta, n)
}

/// Eigenvalue λ_l = 2 - l² of the linearization f ↦ f_θθ + 2f about the
/// circle fixed point; eigenvectors are cos lθ and sin lθ, and λ_l < -2 for
/// every l ≥ 3.
pub fn linearized_spectrum(l: usize) -> f64 {
    2.0 - (l * l) as f64
}

/// Apply the linearized operator f_θθ + 2f spectrally.
pub fn apply_linearized(samples: &[f64]) -> Vec<f64> {
    let diff = crate::spectral::Differentiator::new(samples.len());
    let second = diff.derivative(samples, 2);
    samples
        .iter()
        .zip(second)
        .map(|(f, fdd)| fdd + 2.0 * f)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    pub r_squared: f64,
}

/// Least-squares slope of log(value) against time. Requires at least five
/// strictly positive values; a constant series fits exactly with rate 0.
pub fn fit_exponential_rate(series: &FunctionalSeries) -> Result<RateFit> {
    if series.len() < 5 {
        return Err(Error::invalid(format!(
            "need at least 5 samples to fit a rate, got {}",
            series.len()
        )));
    }
    if series.values().iter().any(|&v| v <= 0.0) {
        return Err(Error::NonPositiveValues);
    }
    let ts = series.times();
    let ys: Vec<f64> = series.values().iter().map(|v| v.ln()).collect();
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(&ys).map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
    let rate = sxy / sxx;
    let ss_tot: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    let ss_res: f64 = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| {
            let fit = ym + rate * (t - tm);
            (y - fit) * (y - fit)
        })
        .sum();
    let r_squared = if ss_tot < 1e-300 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(RateFit { rate, r_squared })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackwardLimitFit {
    pub a: f64,
    pub b: f64,
    /// L² misfit between the profile and the fitted a cos²(θ + b).
    pub residual: f64,
}

/// Least-squares fit of a backward-limit profile a cos²(θ + b), a ≥ 0,
/// b ∈ [0, π).
///
/// Since a cos²(θ+b) = a/2 + (a/2) cos 2(θ+b), the fit is closed-form in the
/// mean and the mode-2 pair: the phase comes from the mode-2 angle and the
/// amplitude from the L²-weighted combination of mean and mode-2 magnitude.
pub fn fit_backward_limit(profile: &CurvatureProfile) -> Result<BackwardLimitFit> {
    let p = profile.pressure_values();
    let spectrum = fourier_decompose(&p, 2)?;
    let mean = spectrum.alpha(0);
    let r2 = spectrum.amplitude(2);
    if mean.abs() < 1e-300 && r2 < 1e-300 {
        return Ok(BackwardLimitFit {
            a: 0.0,
            b: 0.0,
            residual: 0.0,
        });
    }
    // minimize 2π(α₀ - a/2)² + π(r₂ - a/2)² over a
    let a = ((4.0 * mean + 2.0 * r2) / 3.0).max(0.0);
    let b = if r2 < 1e-300 {
        0.0
    } else {
        wrap_mod_pi(0.5 * (-spectrum.beta(2)).atan2(spectrum.alpha(2)))
    };
    let n = p.len();
    let fit: Vec<f64> = (0..n)
        .map(|j| {
            let theta = profile.grid().node(j);
            let c = (theta + b).cos();
            a * c * c
        })
        .collect();
    let mis: Vec<f64> = (0..n).map(|j| (p[j] - fit[j]) * (p[j] - fit[j])).collect();
    Ok(BackwardLimitFit {
        a,
        b,
        residual: periodic_integral(&mis).sqrt(),
    })
}

/// Quadrupole coefficients of a normalized trajectory: for each retained τ,
/// a(τ) and b(τ) are the mode-2 cos/sin coefficients of κ̃ - 1 amplified by
/// e^{2τ}. On a circular limit they converge; their limits identify the
/// asymptotic quadrupole.
pub fn extract_quadrupole(
    trajectory: &FlowTrajectory<ThetaFlowState>,
) -> Result<(FunctionalSeries, FunctionalSeries)> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if trajectory
        .states()
        .iter()
        .any(|s| s.frame != Frame::Normalized)
    {
        return Err(Error::WrongFrame);
    }
    let mut taus = Vec::with_capacity(trajectory.len());
    let mut a_vals = Vec::with_capacity(trajectory.len());
    let mut b_vals = Vec::with_capacity(trajectory.len());
    for state in trajectory.states() {
        let tau = state.profile.time();
        let w: Vec<f64> = state.profile.values().iter().map(|v| v - 1.0).collect();
        let spectrum = fourier_decompose(&w, 2)?;
        let gain = (2.0 * tau).exp();
        taus.push(tau);
        a_vals.push(spectrum.alpha(2) * gain);
        b_vals.push(spectrum.beta(2) * gain);
    }
    Ok((
        FunctionalSeries::new("quadrupole_a", taus.clone(), a_vals)?,
        FunctionalSeries::new("quadrupole_b", taus, b_vals)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassificationKind {
    Circle,
    AngenentOval,
    Unknown,
}

/// Verdict of the ancient-solution classifier, with the worst fit residual
/// observed across the snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: ClassificationKind,
    pub params: Option<OvalParams>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Tolerance on profile-form residuals (off-form mode content, drift of
    /// the mode-2 pair in time, misfit of the c(t) law).
    pub form_tol: f64,
    /// Highest mode inspected for off-form content.
    pub max_mode: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            form_tol: 1e-6,
            max_mode: 8,
        }
    }
}

/// Classify snapshots of an ancient convex evolution as a contracting circle,
/// an Angenent oval, or Unknown.
///
/// The dichotomy rests on the mode structure forced by a vanishing stability
/// functional: the pressure must have the form
/// p = a sin 2θ/2 - b cos 2θ/2 + c(t) with a, b constant in time; then
/// λ = √(a² + b²) and γ from a = -λ sin 2γ, b = -λ cos 2γ, with c(t)
/// following 1/(-2(t - t₀)) in the circle case and
/// λ(1 + e^{2λt'})/(2(1 - e^{2λt'})) in the oval case, both up to the free
/// time translation the numerics cannot pin.
pub fn classify_ancient(snapshots: &[CurvatureProfile]) -> Result<Classification> {
    classify_ancient_with(snapshots, &ClassifyOptions::default())
}

pub fn classify_ancient_with(
    snapshots: &[CurvatureProfile],
    options: &ClassifyOptions,
) -> Result<Classification> {
    if snapshots.len() < 3 {
        return Err(Error::TooFewSnapshots {
            count: snapshots.len(),
            required: 3,
        });
    }
    let mut ordered: Vec<&CurvatureProfile> = snapshots.iter().collect();
    ordered.sort_by(|x, y| x.time().partial_cmp(&y.time()).unwrap());
    for w in ordered.windows(2) {
        if w[0].time() >= w[1].time() {
            return Err(Error::TooFewSnapshots {
                count: snapshots.len(),
                required: 3,
            });
        }
    }
    if ordered.iter().any(|p| p.time() >= 0.0) {
        return Err(Error::invalid("ancient snapshots need times t < 0"));
    }

    let tol = options.form_tol;
    let mut worst_form: f64 = 0.0;
    let mut means = Vec::new();
    let mut sin2 = Vec::new(); // a/2 per snapshot
    let mut cos2 = Vec::new(); // -b/2 per snapshot
    for profile in &ordered {
        let p = profile.pressure_values();
        let max_mode = options.max_mode.min(p.len() / 2 - 1);
        let spectrum = fourier_decompose(&p, max_mode)?;
        let mut off = spectrum.amplitude(1);
        for l in 3..=max_mode {
            off = off.max(spectrum.amplitude(l));
        }
        worst_form = worst_form.max(off);
        means.push(spectrum.alpha(0));
        sin2.push(spectrum.beta(2));
        cos2.push(spectrum.alpha(2));
    }
    if worst_form > tol {
        return Ok(Classification {
            kind: ClassificationKind::Unknown,
            params: None,
            residual: worst_form,
        });
    }

    // the mode-2 pair must be constant in time
    let mean_of = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let a_bar = 2.0 * mean_of(&sin2);
    let b_bar = -2.0 * mean_of(&cos2);
    let drift = sin2
        .iter()
        .map(|v| (2.0 * v - a_bar).abs())
        .chain(cos2.iter().map(|v| (-2.0 * v - b_bar).abs()))
        .fold(0.0, f64::max);
    worst_form = worst_form.max(drift);
    if drift > tol {
        return Ok(Classification {
            kind: ClassificationKind::Unknown,
            params: None,
            residual: drift,
        });
    }

    let lambda = a_bar.hypot(b_bar);
    let times: Vec<f64> = ordered.iter().map(|p| p.time()).collect();

    if lambda <= tol {
        // circle family: c(t) = 1/(-2(t - t₀)) for a free translation t₀
        if means.iter().any(|&c| c <= 0.0) {
            return Ok(Classification {
                kind: ClassificationKind::Unknown,
                params: None,
                residual: f64::INFINITY,
            });
        }
        let t0s: Vec<f64> = times
            .iter()
            .zip(&means)
            .map(|(t, c)| t + 1.0 / (2.0 * c))
            .collect();
        let t0 = mean_of(&t0s);
        let resid = times
            .iter()
            .zip(&means)
            .map(|(t, c)| {
                let model = 1.0 / (-2.0 * (t - t0));
                (c - model).abs()
            })
            .fold(0.0, f64::max)
            .max(worst_form);
        if resid <= tol {
            return Ok(Classification {
                kind: ClassificationKind::Circle,
                params: None,
                residual: resid,
            });
        }
        return Ok(Classification {
            kind: ClassificationKind::Unknown,
            params: None,
            residual: resid,
        });
    }

    // oval family
    let gamma = wrap_mod_pi(0.5 * (-a_bar).atan2(-b_bar));
    // invert c = λ(1 + w)/(2(1 - w)) with w = e^{2λt'} ∈ (0, 1)
    let mut t0s = Vec::with_capacity(times.len());
    for (&t, &c) in times.iter().zip(&means) {
        let w = (2.0 * c - lambda) / (2.0 * c + lambda);
        if !(w > 0.0 && w < 1.0) {
            return Ok(Classification {
                kind: ClassificationKind::Unknown,
                params: None,
                residual: f64::INFINITY,
            });
        }
        t0s.push(t - w.ln() / (2.0 * lambda));
    }
    let t0 = mean_of(&t0s);
    let resid = times
        .iter()
        .zip(&means)
        .map(|(t, c)| {
            let w = (2.0 * lambda * (t - t0)).exp();
            let model = lambda * (1.0 + w) / (2.0 * (1.0 - w));
            (c - model).abs()
        })
        .fold(0.0, f64::max)
        .max(worst_form);
    if resid <= tol {
        let params = OvalParams::new(lambda, gamma)?;
        return Ok(Classification {
            kind: ClassificationKind::AngenentOval,
            params: Some(params),
            residual: resid,
        });
    }
    Ok(Classification {
        kind: ClassificationKind::Unknown,
        params: None,
        residual: resid,
    })
}
