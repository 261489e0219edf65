//! Fourier pseudospectral kernels on the uniform periodic grid.
//!
//! All profiles live on θ_j = 2πj/n. Derivatives are computed by FFT,
//! multiplication by (ik)^m and inverse FFT; integrals use the periodic
//! trapezoid rule, which is spectrally accurate for smooth periodic data.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Periodic trapezoid quadrature of samples over one full period.
pub fn periodic_integral(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    values.iter().sum::<f64>() * TWO_PI / n
}

/// FFT-based differentiation engine for a fixed grid size.
///
/// Plans are reused across calls, so one instance should be shared over the
/// lifetime of a time-stepping loop.
pub struct Differentiator {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Differentiator {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Differentiator {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    fn to_freq(&self, values: &[f64]) -> Vec<Complex<f64>> {
        debug_assert_eq!(values.len(), self.n);
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    fn to_phys(&self, mut freq: Vec<Complex<f64>>) -> Vec<f64> {
        self.inverse.process(&mut freq);
        let scale = 1.0 / self.n as f64;
        freq.into_iter().map(|c| c.re * scale).collect()
    }

    /// Signed wavenumber for bin k: 0, 1, …, n/2, -n/2+1, …, -1.
    fn wavenumber(&self, k: usize) -> f64 {
        if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }

    /// Spectral derivative of the given order.
    ///
    /// For odd orders the Nyquist mode is annihilated (its derivative is a
    /// sine mode the grid cannot carry).
    pub fn derivative(&self, values: &[f64], order: u32) -> Vec<f64> {
        let mut freq = self.to_freq(values);
        let nyquist = self.n / 2;
        for (k, c) in freq.iter_mut().enumerate() {
            let ik = Complex::new(0.0, self.wavenumber(k));
            *c *= ik.powu(order);
            if !order.is_multiple_of(2) && k == nyquist && self.n.is_multiple_of(2) {
                *c = Complex::new(0.0, 0.0);
            }
        }
        self.to_phys(freq)
    }

    /// Antiderivative split into mean slope and periodic part.
    ///
    /// Returns (G, mean) where G is periodic with G[0] = 0 and the full
    /// antiderivative vanishing at θ = 0 is G_j + mean · θ_j.
    pub fn antiderivative(&self, values: &[f64]) -> (Vec<f64>, f64) {
        let mut freq = self.to_freq(values);
        let mean = freq[0].re / self.n as f64;
        freq[0] = Complex::new(0.0, 0.0);
        let nyquist = self.n / 2;
        for (k, c) in freq.iter_mut().enumerate().skip(1) {
            if k == nyquist && self.n.is_multiple_of(2) {
                // cos-Nyquist integrates to an unrepresentable sine mode
                *c = Complex::new(0.0, 0.0);
            } else {
                *c /= Complex::new(0.0, self.wavenumber(k));
            }
        }
        let mut phys = self.to_phys(freq);
        let offset = phys[0];
        for v in phys.iter_mut() {
            *v -= offset;
        }
        (phys, mean)
    }
}

/// Trigonometric coefficients (α_l, β_l) against {cos lθ, sin lθ}, l = 0..=max_mode,
/// normalized so a pure input cos lθ yields α_l = 1. β_0 is identically zero.
pub fn trig_coefficients(values: &[f64], max_mode: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = values.len();
    if n < 2 * max_mode + 2 {
        return Err(Error::GridTooCoarse { n, mode: max_mode });
    }
    let diff = Differentiator::new(n);
    let freq = diff.to_freq(values);
    let mut alpha = Vec::with_capacity(max_mode + 1);
    let mut beta = Vec::with_capacity(max_mode + 1);
    alpha.push(freq[0].re / n as f64);
    beta.push(0.0);
    for c in freq.iter().take(max_mode + 1).skip(1) {
        alpha.push(2.0 * c.re / n as f64);
        beta.push(-2.0 * c.im / n as f64);
    }
    Ok((alpha, beta))
}

/// Evaluate Σ α_l cos lθ + β_l sin lθ on an n-point uniform grid.
pub fn trig_synthesize(alpha: &[f64], beta: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let theta = TWO_PI * j as f64 / n as f64;
            let mut v = 0.0;
            for (l, &a) in alpha.iter().enumerate() {
                v += a * (l as f64 * theta).cos();
            }
            for (l, &b) in beta.iter().enumerate().skip(1) {
                v += b * (l as f64 * theta).sin();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| TWO_PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_of_low_modes_is_exact() {
        let n = 64;
        let th = grid(n);
        let f: Vec<f64> = th
            .iter()
            .map(|t| (3.0 * t).sin() + 0.5 * (2.0 * t).cos())
            .collect();
        let d = Differentiator::new(n);
        let df = d.derivative(&f, 1);
        let ddf = d.derivative(&f, 2);
        for j in 0..n {
            let t = th[j];
            let exact1 = 3.0 * (3.0 * t).cos() - (2.0 * t).sin();
            let exact2 = -9.0 * (3.0 * t).sin() - 2.0 * (2.0 * t).cos();
            assert!(
                (df[j] - exact1).abs() < 1e-12,
                "first derivative off at node {j}"
            );
            assert!(
                (ddf[j] - exact2).abs() < 1e-11,
                "second derivative off at node {j}"
            );
        }
    }

    #[test]
    fn periodic_integral_is_spectrally_accurate() {
        let n = 32;
        let th = grid(n);
        let f: Vec<f64> = th.iter().map(|t| 1.0 + 0.3 * (4.0 * t).cos()).collect();
        assert!((periodic_integral(&f) - TWO_PI).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_recovers_mean_and_periodic_part() {
        let n = 64;
        let th = grid(n);
        // f = 2 + cos θ: antiderivative 2θ + sin θ
        let f: Vec<f64> = th.iter().map(|t| 2.0 + t.cos()).collect();
        let d = Differentiator::new(n);
        let (g, mean) = d.antiderivative(&f);
        assert!((mean - 2.0).abs() < 1e-13);
        for j in 0..n {
            assert!((g[j] - th[j].sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn trig_coefficients_match_pure_modes() {
        let n = 64;
        let th = grid(n);
        let f: Vec<f64> = th
            .iter()
            .map(|t| 3.0 * t.sin() - 0.5 * (4.0 * t).cos())
            .collect();
        let (alpha, beta) = trig_coefficients(&f, 8).unwrap();
        assert!((beta[1] - 3.0).abs() < 1e-12);
        assert!((alpha[4] + 0.5).abs() < 1e-12);
        let others: f64 = alpha
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != 4)
            .map(|(_, a)| a.abs())
            .sum::<f64>()
            + beta
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != 1)
                .map(|(_, b)| b.abs())
                .sum::<f64>();
        assert!(others < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = vec![0.0; 8];
        assert!(matches!(
            trig_coefficients(&f, 4),
            Err(Error::GridTooCoarse { n: 8, mode: 4 })
        ));
    }
}
