//! Monotone functionals of the pressure and their exact dissipation
//! identities, the steady-state residual, and the Wirtinger inequality gap.

use crate::error::{Error, Result};
use crate::geometry::CurvatureProfile;
use crate::spectral::{periodic_integral, Differentiator};

/// A functional value together with its instantaneous dissipation, evaluated
/// from the evolution equation rather than by differencing in time, so the
/// identities are testable on single profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub value: f64,
    pub dissipation: f64,
}

/// J(p) = ∫ (p_θ²/p - 4p) dθ, with dJ/dt = -2 ∫ p_t²/p² dθ. Non-increasing
/// along the pressure flow and nonpositive on ancient solutions.
pub fn lyapunov_j(profile: &CurvatureProfile) -> Result<FunctionalValue> {
    profile.require_strictly_positive()?;
    let p = profile.pressure_values();
    let n = p.len();
    let diff = Differentiator::new(n);
    let p_th = diff.derivative(&p, 1);
    let p_thth = diff.derivative(&p, 2);
    let integrand: Vec<f64> = (0..n)
        .map(|j| p_th[j] * p_th[j] / p[j] - 4.0 * p[j])
        .collect();
    let value = periodic_integral(&integrand);
    let rhs: Vec<f64> = (0..n)
        .map(|j| p[j] * p_thth[j] - 0.5 * p_th[j] * p_th[j] + 2.0 * p[j] * p[j])
        .collect();
    let diss: Vec<f64> = (0..n).map(|j| rhs[j] * rhs[j] / (p[j] * p[j])).collect();
    Ok(FunctionalValue {
        value,
        dissipation: -2.0 * periodic_integral(&diss),
    })
}

/// I(α) = ∫ (α_θ² - 4α²) dθ with α = p_θ, and dI/dt = -2 ∫ α_t²/p dθ where
/// α_t = p (α_θθ + 4α). α is always derived spectrally from p so the
/// derivative relation holds exactly at the discrete level.
pub fn stability_i(profile: &CurvatureProfile) -> Result<FunctionalValue> {
    profile.require_strictly_positive()?;
    let p = profile.pressure_values();
    let n = p.len();
    let diff = Differentiator::new(n);
    let alpha = diff.derivative(&p, 1);
    let alpha_th = diff.derivative(&alpha, 1);
    let alpha_thth = diff.derivative(&alpha, 2);
    let integrand: Vec<f64> = (0..n)
        .map(|j| alpha_th[j] * alpha_th[j] - 4.0 * alpha[j] * alpha[j])
        .collect();
    let value = periodic_integral(&integrand);
    let diss: Vec<f64> = (0..n)
        .map(|j| {
            let alpha_t = p[j] * (alpha_thth[j] + 4.0 * alpha[j]);
            alpha_t * alpha_t / p[j]
        })
        .collect();
    Ok(FunctionalValue {
        value,
        dissipation: -2.0 * periodic_integral(&diss),
    })
}

/// L∞ residual of the steady-state equation p p_θθ - ½ p_θ² + 2p² = 0.
/// Zeros in the profile are allowed; backward limits satisfy this exactly.
pub fn steady_state_residual(profile: &CurvatureProfile) -> f64 {
    let p = profile.pressure_values();
    let n = p.len();
    let diff = Differentiator::new(n);
    let p_th = diff.derivative(&p, 1);
    let p_thth = diff.derivative(&p, 2);
    (0..n)
        .map(|j| (p[j] * p_thth[j] - 0.5 * p_th[j] * p_th[j] + 2.0 * p[j] * p[j]).abs())
        .fold(0.0, f64::max)
}

/// Wirtinger gap λ_w² ∫ f_θ² - ∫ f² for f sampled uniformly on [a, b]
/// (endpoints included) with f(a) = f(b) = 0 and b - a ≤ λ_w π. Nonnegative
/// exactly when the inequality holds; zero on the extremal sine mode.
///
/// The integrals are evaluated through the sine series of the odd extension,
/// which differentiates the vanishing-boundary interpolant exactly.
pub fn wirtinger_gap(samples: &[f64], a: f64, b: f64, lambda_w: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::invalid("need at least 3 samples on [a, b]"));
    }
    let length = b - a;
    if !(length > 0.0) {
        return Err(Error::invalid("interval must have b > a"));
    }
    let max_length = lambda_w * std::f64::consts::PI;
    if length > max_length * (1.0 + 1e-12) {
        return Err(Error::BadInterval { length, max_length });
    }
    let scale = samples.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tol = 1e-8 * (1.0 + scale);
    let first = samples[0].abs();
    let last = samples[samples.len() - 1].abs();
    if first > tol || last > tol {
        return Err(Error::BadBoundary {
            value: first.max(last),
            tolerance: tol,
        });
    }

    // Odd extension over [a, 2b - a] makes a 2L-periodic function whose
    // Fourier series is a pure sine series on the original interval.
    let m = samples.len() - 1; // panels on [a, b]
    let ext_len = 2 * m;
    let mut ext = vec![0.0; ext_len];
    for j in 1..m {
        ext[j] = samples[j];
        ext[ext_len - j] = -samples[j];
    }
    // sine coefficients c_l of f = Σ c_l sin(lπ(θ-a)/L), l = 1..m-1
    let mut freq: Vec<rustfft::num_complex::Complex<f64>> = ext
        .iter()
        .map(|&v| rustfft::num_complex::Complex::new(v, 0.0))
        .collect();
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(ext_len).process(&mut freq);
    let mut int_f2 = 0.0;
    let mut int_df2 = 0.0;
    for (l, coeff) in freq.iter().enumerate().take(m).skip(1) {
        let c = -2.0 * coeff.im / ext_len as f64;
        let k = l as f64 * std::f64::consts::PI / length;
        int_f2 += c * c;
        int_df2 += c * c * k * k;
    }
    int_f2 *= length / 2.0;
    int_df2 *= length / 2.0;
    Ok(lambda_w * lambda_w * int_df2 - int_f2)
}

/// A named time series of a scalar diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSeries {
    name: String,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl FunctionalSeries {
    pub fn new(name: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("series times and values differ in length"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("series times must be strictly increasing"));
        }
        Ok(FunctionalSeries {
            name: name.into(),
            times,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest upward jump between consecutive values; ≤ slack certifies the
    /// series non-increasing up to that slack.
    pub fn max_increase(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }
}
