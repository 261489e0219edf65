//! Python bindings for the curve shortening flow laboratory.
//!
//! Profiles cross the boundary as plain lists of pressure samples on the
//! uniform angle grid θ_j = 2πj/n; curves as coordinate lists. Solver errors
//! surface as ValueError.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use csf_core::asymptotics;
use csf_core::exact_solutions;
use csf_core::flow_arclength::{self, ArcControls, ArcFlowState};
use csf_core::flow_theta::{self, ThetaControls, ThetaFlowState};
use csf_core::functionals;
use csf_core::geometry::{self, AngleGrid, CurvatureProfile, PlanarCurve};
use csf_core::trajectory::{FlowStatus, FlowTrajectory};

fn err(e: csf_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pressure_profile(values: Vec<f64>, time: f64) -> PyResult<CurvatureProfile> {
    let grid = AngleGrid::new(values.len()).map_err(err)?;
    CurvatureProfile::pressure(grid, values, time).map_err(err)
}

fn curve_from_lists(xs: Vec<f64>, ys: Vec<f64>, closed: bool) -> PyResult<PlanarCurve> {
    if xs.len() != ys.len() {
        return Err(PyValueError::new_err("xs and ys must have equal length"));
    }
    let pts: Vec<[f64; 2]> = xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect();
    if closed {
        PlanarCurve::closed(pts)
    } else {
        PlanarCurve::open(pts)
    }
    .map_err(err)
}

fn curve_to_lists(curve: &PlanarCurve) -> (Vec<f64>, Vec<f64>) {
    let xs = curve.points().iter().map(|p| p[0]).collect();
    let ys = curve.points().iter().map(|p| p[1]).collect();
    (xs, ys)
}

/// (times, profiles, diagnostics, extinct) of a tangent-angle run.
type ThetaRunOut = (Vec<f64>, Vec<Vec<f64>>, BTreeMap<String, Vec<f64>>, bool);

/// (times, (xs, ys) curves, diagnostics, extinct) of an arclength run.
type ArcRunOut = (
    Vec<f64>,
    Vec<(Vec<f64>, Vec<f64>)>,
    BTreeMap<String, Vec<f64>>,
    bool,
);

fn theta_trajectory_out(traj: &FlowTrajectory<ThetaFlowState>) -> ThetaRunOut {
    let times = traj.times();
    let profiles = traj
        .states()
        .iter()
        .map(|s| s.profile.values().to_vec())
        .collect();
    let mut diagnostics: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    if let Some(first) = traj.diagnostics().first() {
        for name in first.keys() {
            if let Some(series) = traj.series(name) {
                diagnostics.insert(name.clone(), series.values().to_vec());
            }
        }
    }
    (
        times,
        profiles,
        diagnostics,
        traj.status() == FlowStatus::Extinction,
    )
}

// --- exact solutions -------------------------------------------------------

/// Contracting-circle pressure 1/(-2t) sampled on an n-node grid.
#[pyfunction]
fn circle_pressure(n: usize, t: f64) -> PyResult<Vec<f64>> {
    let grid = AngleGrid::new(n).map_err(err)?;
    Ok(exact_solutions::circle_pressure(grid, t)
        .map_err(err)?
        .values()
        .to_vec())
}

/// Angenent-oval pressure λ(1/(1-e^{2λt}) - sin²(θ+γ)).
#[pyfunction]
fn oval_pressure(n: usize, lam: f64, gamma: f64, t: f64) -> PyResult<Vec<f64>> {
    let grid = AngleGrid::new(n).map_err(err)?;
    let params = exact_solutions::OvalParams::new(lam, gamma).map_err(err)?;
    Ok(exact_solutions::oval_pressure(grid, params, t)
        .map_err(err)?
        .values()
        .to_vec())
}

/// Backward-limit profile a cos²(θ + b).
#[pyfunction]
fn backward_limit_profile(n: usize, a: f64, b: f64) -> PyResult<Vec<f64>> {
    let grid = AngleGrid::new(n).map_err(err)?;
    Ok(exact_solutions::backward_limit_profile(grid, a, b)
        .map_err(err)?
        .values()
        .to_vec())
}

/// Grim reaper y = t - ln cos x sampled on [-half_width, half_width].
#[pyfunction]
fn grim_reaper_curve(t: f64, half_width: f64, points: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let curve = exact_solutions::grim_reaper_curve(t, half_width, points).map_err(err)?;
    Ok(curve_to_lists(&curve))
}

// --- tangent-angle flow ----------------------------------------------------

/// Right-hand side p p_θθ - ½p_θ² + 2p² with spectral derivatives.
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn pressure_rhs(values: Vec<f64>, time: f64) -> PyResult<Vec<f64>> {
    flow_theta::pressure_rhs(&pressure_profile(values, time)?).map_err(err)
}

/// Evolve the pressure equation; returns (times, profiles, diagnostics,
/// extinct).
#[pyfunction]
#[pyo3(signature = (values, t_start, t_end, outputs = 33))]
fn evolve_pressure(
    values: Vec<f64>,
    t_start: f64,
    t_end: f64,
    outputs: usize,
) -> PyResult<ThetaRunOut> {
    let initial = ThetaFlowState::pressure(pressure_profile(values, t_start)?);
    let controls = ThetaControls {
        outputs,
        ..ThetaControls::default()
    };
    let traj = flow_theta::evolve_pressure(&initial, t_end, &controls).map_err(err)?;
    Ok(theta_trajectory_out(&traj))
}

/// Evolve the normalized curvature equation in rescaled time.
#[pyfunction]
#[pyo3(signature = (values, tau_start, tau_end, outputs = 33))]
fn evolve_normalized(
    values: Vec<f64>,
    tau_start: f64,
    tau_end: f64,
    outputs: usize,
) -> PyResult<ThetaRunOut> {
    let grid = AngleGrid::new(values.len()).map_err(err)?;
    let profile = CurvatureProfile::curvature(grid, values, tau_start).map_err(err)?;
    let controls = ThetaControls {
        outputs,
        ..ThetaControls::default()
    };
    let traj =
        flow_theta::evolve_normalized(&ThetaFlowState::normalized(profile), tau_end, &controls)
            .map_err(err)?;
    Ok(theta_trajectory_out(&traj))
}

/// Minimum over nodes of the Harnack quantity p p_θθ - ½p_θ² + 2p².
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn harnack_margin(values: Vec<f64>, time: f64) -> PyResult<f64> {
    flow_theta::harnack_margin(&pressure_profile(values, time)?).map_err(err)
}

/// Extinction-time estimate t + A(t)/(2π) from the spectral enclosed area.
#[pyfunction]
fn extinction_time_estimate(values: Vec<f64>, time: f64) -> PyResult<f64> {
    flow_theta::extinction_time_estimate(&pressure_profile(values, time)?).map_err(err)
}

// --- functionals -----------------------------------------------------------

/// J(p) = ∫(p_θ²/p - 4p) dθ and its dissipation -2∫p_t²/p² dθ.
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn lyapunov_j(values: Vec<f64>, time: f64) -> PyResult<(f64, f64)> {
    let v = functionals::lyapunov_j(&pressure_profile(values, time)?).map_err(err)?;
    Ok((v.value, v.dissipation))
}

/// I(α) = ∫(α_θ² - 4α²) dθ with α = p_θ, and its dissipation.
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn stability_i(values: Vec<f64>, time: f64) -> PyResult<(f64, f64)> {
    let v = functionals::stability_i(&pressure_profile(values, time)?).map_err(err)?;
    Ok((v.value, v.dissipation))
}

/// L∞ residual of the steady-state equation p p_θθ - ½p_θ² + 2p².
#[pyfunction]
fn steady_state_residual(values: Vec<f64>) -> PyResult<f64> {
    Ok(functionals::steady_state_residual(&pressure_profile(
        values, -1.0,
    )?))
}

/// Wirtinger gap λ²∫f_θ² - ∫f² for samples on [a, b] vanishing at the ends.
#[pyfunction]
fn wirtinger_gap(samples: Vec<f64>, a: f64, b: f64, lambda_w: f64) -> PyResult<f64> {
    functionals::wirtinger_gap(&samples, a, b, lambda_w).map_err(err)
}

// --- geometry ---------------------------------------------------------------

/// Closure integrals (∫cos θ/κ dθ, ∫sin θ/κ dθ).
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn closure_residual(values: Vec<f64>, time: f64) -> PyResult<(f64, f64)> {
    geometry::closure_residual(&pressure_profile(values, time)?).map_err(err)
}

/// Reconstruct the closed convex curve with the given pressure profile.
#[pyfunction]
#[pyo3(signature = (values, time = -1.0))]
fn reconstruct_curve(values: Vec<f64>, time: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let curve = geometry::reconstruct_curve(&pressure_profile(values, time)?).map_err(err)?;
    Ok(curve_to_lists(&curve))
}

/// Arclengths and signed curvatures of a polygon.
#[pyfunction]
#[pyo3(signature = (xs, ys, closed = true))]
fn curvature_of_curve(xs: Vec<f64>, ys: Vec<f64>, closed: bool) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let curve = curve_from_lists(xs, ys, closed)?;
    let sk = geometry::curvature_of_curve(&curve).map_err(err)?;
    Ok(sk.into_iter().unzip())
}

/// (length, signed area) of a polygon.
#[pyfunction]
#[pyo3(signature = (xs, ys, closed = true))]
fn geometric_measures(xs: Vec<f64>, ys: Vec<f64>, closed: bool) -> PyResult<(f64, f64)> {
    let m = geometry::geometric_measures(&curve_from_lists(xs, ys, closed)?);
    Ok((m.length, m.signed_area))
}

// --- arclength flow ----------------------------------------------------------

/// Evolve a curve by its curvature vector; returns (times, curves,
/// diagnostics, extinct) with curves as (xs, ys) pairs.
#[pyfunction]
#[pyo3(signature = (xs, ys, t_start, t_end, outputs = 33, closed = true))]
fn evolve_curve(
    xs: Vec<f64>,
    ys: Vec<f64>,
    t_start: f64,
    t_end: f64,
    outputs: usize,
    closed: bool,
) -> PyResult<ArcRunOut> {
    let curve = curve_from_lists(xs, ys, closed)?;
    let controls = ArcControls {
        outputs,
        ..ArcControls::default()
    };
    let traj = flow_arclength::evolve_curve(&ArcFlowState::new(curve, t_start), t_end, &controls)
        .map_err(err)?;
    let times = traj.times();
    let curves = traj
        .states()
        .iter()
        .map(|s| curve_to_lists(&s.curve))
        .collect();
    let mut diagnostics: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    if let Some(first) = traj.diagnostics().first() {
        for name in first.keys() {
            if let Some(series) = traj.series(name) {
                diagnostics.insert(name.clone(), series.values().to_vec());
            }
        }
    }
    Ok((
        times,
        curves,
        diagnostics,
        traj.status() == FlowStatus::Extinction,
    ))
}

/// Sign changes of a periodic sample list with a tolerance band.
#[pyfunction]
fn sturm_zero_count(samples: Vec<f64>, tolerance: f64) -> PyResult<usize> {
    flow_arclength::sturm_zero_count(&samples, tolerance).map_err(err)
}

/// ∫(ε² + κ²)^{1/2} ds over a polygon.
#[pyfunction]
#[pyo3(signature = (xs, ys, epsilon = 0.0, closed = true))]
fn total_absolute_curvature(
    xs: Vec<f64>,
    ys: Vec<f64>,
    epsilon: f64,
    closed: bool,
) -> PyResult<f64> {
    flow_arclength::total_absolute_curvature(&curve_from_lists(xs, ys, closed)?, epsilon)
        .map_err(err)
}

// --- asymptotics -------------------------------------------------------------

/// Trigonometric coefficients (alphas, betas) up to max_mode.
#[pyfunction]
fn fourier_decompose(values: Vec<f64>, max_mode: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = asymptotics::fourier_decompose(&values, max_mode).map_err(err)?;
    Ok((s.alphas().to_vec(), s.betas().to_vec()))
}

/// Eigenvalue 2 - l² of the linearization about the circle.
#[pyfunction]
fn linearized_spectrum(l: usize) -> f64 {
    asymptotics::linearized_spectrum(l)
}

/// Least-squares exponential rate of a positive series: (rate, r_squared).
#[pyfunction]
fn fit_exponential_rate(times: Vec<f64>, values: Vec<f64>) -> PyResult<(f64, f64)> {
    let series = functionals::FunctionalSeries::new("series", times, values).map_err(err)?;
    let fit = asymptotics::fit_exponential_rate(&series).map_err(err)?;
    Ok((fit.rate, fit.r_squared))
}

/// Fit a cos²(θ + b) to a profile: (a, b, residual).
#[pyfunction]
fn fit_backward_limit(values: Vec<f64>) -> PyResult<(f64, f64, f64)> {
    let fit = asymptotics::fit_backward_limit(&pressure_profile(values, -1.0)?).map_err(err)?;
    Ok((fit.a, fit.b, fit.residual))
}

/// Classify pressure snapshots at distinct ancient times; returns a dict
/// with kind, lambda, gamma, residual.
#[pyfunction]
fn classify_ancient<'py>(
    py: Python<'py>,
    times: Vec<f64>,
    profiles: Vec<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    if times.len() != profiles.len() {
        return Err(PyValueError::new_err(
            "times and profiles must have equal length",
        ));
    }
    let snapshots: Vec<CurvatureProfile> = times
        .into_iter()
        .zip(profiles)
        .map(|(t, v)| pressure_profile(v, t))
        .collect::<PyResult<_>>()?;
    let c = asymptotics::classify_ancient(&snapshots).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item(
        "kind",
        match c.kind {
            csf_core::ClassificationKind::Circle => "Circle",
            csf_core::ClassificationKind::AngenentOval => "AngenentOval",
            csf_core::ClassificationKind::Unknown => "Unknown",
        },
    )?;
    out.set_item("lambda", c.params.map(|p| p.lambda()))?;
    out.set_item("gamma", c.params.map(|p| p.gamma()))?;
    out.set_item("residual", c.residual)?;
    Ok(out)
}

#[pymodule]
fn csf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(circle_pressure, m)?)?;
    m.add_function(wrap_pyfunction!(oval_pressure, m)?)?;
    m.add_function(wrap_pyfunction!(backward_limit_profile, m)?)?;
    m.add_function(wrap_pyfunction!(grim_reaper_curve, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_pressure, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_normalized, m)?)?;
    m.add_function(wrap_pyfunction!(harnack_margin, m)?)?;
    m.add_function(wrap_pyfunction!(extinction_time_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_j, m)?)?;
    m.add_function(wrap_pyfunction!(stability_i, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_residual, m)?)?;
    m.add_function(wrap_pyfunction!(wirtinger_gap, m)?)?;
    m.add_function(wrap_pyfunction!(closure_residual, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_curve, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_of_curve, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_measures, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_curve, m)?)?;
    m.add_function(wrap_pyfunction!(sturm_zero_count, m)?)?;
    m.add_function(wrap_pyfunction!(total_absolute_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(linearized_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponential_rate, m)?)?;
    m.add_function(wrap_pyfunction!(fit_backward_limit, m)?)?;
    m.add_function(wrap_pyfunction!(classify_ancient, m)?)?;
    Ok(())
}
