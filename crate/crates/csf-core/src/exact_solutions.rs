//! Closed-form ancient and soliton solutions used as oracles throughout the
//! test suite: contracting circles, Angenent ovals, their backward limits,
//! and the grim-reaper translating soliton.

use crate::error::{Error, Result};
use crate::geometry::{AngleGrid, CurvatureProfile, PlanarCurve};

/// Parameters of an Angenent oval: the rate λ > 0 and the phase γ, stored
/// mod π because cos²(θ + γ) has period π. λ = 0 is reserved for the circle
/// family, which has its own constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvalParams {
    lambda: f64,
    gamma: f64,
}

impl OvalParams {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!(
                "oval rate lambda = {lambda} must be > 0"
            )));
        }
        Ok(OvalParams {
            lambda,
            gamma: wrap_mod_pi(gamma),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

pub(crate) fn wrap_mod_pi(angle: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut a = angle.rem_euclid(pi);
    // collapse the representative π - ε ≈ π back onto 0 when it is pure rounding
    if pi - a < 1e-12 {
        a = 0.0;
    }
    a
}

fn require_ancient(t: f64) -> Result<()> {
    if t < 0.0 {
        Ok(())
    } else {
        Err(Error::NonAncientTime { time: t })
    }
}

/// Contracting-circle pressure p(θ, t) = 1/(-2t).
pub fn circle_pressure(grid: AngleGrid, t: f64) -> Result<CurvatureProfile> {
    require_ancient(t)?;
    let value = 1.0 / (-2.0 * t);
    CurvatureProfile::pressure(grid, vec![value; grid.len()], t)
}

/// Angenent-oval pressure p(θ, t) = λ (1/(1 - e^{2λt}) - sin²(θ + γ)).
///
/// Evaluated in the cancellation-free form
/// λ (cos²(θ+γ) + e^{2λt} sin²(θ+γ)) / (1 - e^{2λt}), which stays accurate
/// down to p ~ e^{2λt} near the shrinking minimum and is manifestly positive.
pub fn oval_pressure(grid: AngleGrid, params: OvalParams, t: f64) -> Result<CurvatureProfile> {
    require_ancient(t)?;
    let lambda = params.lambda();
    let u = (2.0 * lambda * t).exp();
    let values = grid
        .nodes()
        .map(|theta| {
            let phi = theta + params.gamma();
            let c = phi.cos();
            let s = phi.sin();
            lambda * (c * c + u * s * s) / (1.0 - u)
        })
        .collect();
    CurvatureProfile::pressure(grid, values, t)
}

/// Time derivative of the oval pressure; it is independent of θ.
pub fn oval_pressure_dt(params: OvalParams, t: f64) -> Result<f64> {
    require_ancient(t)?;
    let lambda = params.lambda();
    let u = (2.0 * lambda * t).exp();
    Ok(2.0 * lambda * lambda * u / ((1.0 - u) * (1.0 - u)))
}

/// Analytic θ-derivatives of the oval pressure at one angle: (p, p_θ, p_θθ).
pub fn oval_pressure_theta_derivatives(
    params: OvalParams,
    t: f64,
    theta: f64,
) -> Result<(f64, f64, f64)> {
    require_ancient(t)?;
    let lambda = params.lambda();
    let u = (2.0 * lambda * t).exp();
    let phi = theta + params.gamma();
    let c = phi.cos();
    let s = phi.sin();
    let p = lambda * (c * c + u * s * s) / (1.0 - u);
    let p_theta = -lambda * (2.0 * phi).sin();
    let p_theta_theta = -2.0 * lambda * (2.0 * phi).cos();
    Ok((p, p_theta, p_theta_theta))
}

/// Residuals of the separable ansatz p = a(t) - b(t) sin²(θ + γ): substituting
/// into the pressure equation forces b' = 0 and a' = -2ab + 2a².
/// Returns (b', a' - (-2ab + 2a²)); both vanish exactly on the oval family.
pub fn oval_ansatz_residual(a: f64, b: f64, da_dt: f64, db_dt: f64) -> (f64, f64) {
    (db_dt, da_dt - (-2.0 * a * b + 2.0 * a * a))
}

/// Backward-limit profile p̃(θ) = a cos²(θ + b): the pointwise limit of the
/// pressure as t → -∞. Non-strict (it has zeros when a > 0), time-stamped -∞,
/// and never fed to the reconstruction.
pub fn backward_limit_profile(grid: AngleGrid, a: f64, b: f64) -> Result<CurvatureProfile> {
    if a < 0.0 {
        return Err(Error::invalid(format!(
            "backward-limit amplitude a = {a} must be >= 0"
        )));
    }
    let values = grid
        .nodes()
        .map(|theta| {
            let c = (theta + b).cos();
            let v = a * c * c;
            // snap rounding-level residue at grid-aligned zeros to exact zero
            if v < a * 1e-30 {
                0.0
            } else {
                v
            }
        })
        .collect();
    CurvatureProfile::pressure(grid, values, f64::NEG_INFINITY)
}

/// Grim-reaper translating soliton y = t - ln cos x, sampled uniformly in x
/// on [-half_width, half_width]. Its curvature is cos x.
pub fn grim_reaper_curve(t: f64, half_width: f64, points: usize) -> Result<PlanarCurve> {
    if !(half_width > 0.0 && half_width < std::f64::consts::FRAC_PI_2) {
        return Err(Error::invalid(format!(
            "half_width {half_width} must lie in (0, pi/2)"
        )));
    }
    if points < 2 {
        return Err(Error::invalid("grim reaper needs at least 2 sample points"));
    }
    let pts = (0..points)
        .map(|j| {
            let x = -half_width + 2.0 * half_width * j as f64 / (points - 1) as f64;
            [x, t - x.cos().ln()]
        })
        .collect();
    PlanarCurve::open(pts)
}

/// Closed-form curvature of the grim reaper at abscissa x.
pub fn grim_reaper_curvature(x: f64) -> f64 {
    x.cos()
}
