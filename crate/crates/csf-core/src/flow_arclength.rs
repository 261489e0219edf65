//! Front-tracking solver for ∂F/∂t = κν on embedded closed curves in
//! point-cloud form, plus the oscillation and curvature-bound diagnostics:
//! Sturm zero counts, ε-regularized total absolute curvature, the blow-up
//! rescaling, and the two-bound convexity certificate.
//!
//! Points move by the discrete curvature vector F_ss (pure normal motion up
//! to reparametrization) and are resampled to uniform arclength after every
//! step through a C² periodic cubic spline; pure normal motion clusters
//! points at high curvature and destabilizes the stepper otherwise. The
//! tangential component introduced by resampling only reparametrizes the
//! evolving shape.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{curvature_of_curve, geometric_measures, vertex_curvature, PlanarCurve};
use crate::trajectory::{FlowStatus, FlowTrajectory, Timestamped};

#[derive(Debug, Clone, PartialEq)]
pub struct ArcFlowState {
    pub curve: PlanarCurve,
    pub time: f64,
}

impl ArcFlowState {
    pub fn new(curve: PlanarCurve, time: f64) -> Self {
        ArcFlowState { curve, time }
    }
}

impl Timestamped for ArcFlowState {
    fn time(&self) -> f64 {
        self.time
    }
}

#[derive(Debug, Clone)]
pub struct ArcControls {
    /// Fraction of the explicit stability limit dt ≤ (min segment)²/2.
    pub c_cfl: f64,
    pub dt_min: f64,
    /// Halt with Extinction once max |κ| exceeds this.
    pub kappa_blowup: f64,
    /// Halt with Extinction once the enclosed area falls below this.
    pub area_min: f64,
    /// Run the embeddedness sweep every this many steps.
    pub embed_check_every: usize,
    /// Requested output instants; None gives `outputs` uniform instants.
    pub output_times: Option<Vec<f64>>,
    pub outputs: usize,
    /// Band half-width for the recorded zero-count diagnostic, as a fraction
    /// of max |κ|.
    pub zero_band_fraction: f64,
}

impl Default for ArcControls {
    fn default() -> Self {
        ArcControls {
            c_cfl: 0.5,
            dt_min: 1e-12,
            kappa_blowup: 1e4,
            area_min: 1e-6,
            embed_check_every: 16,
            output_times: None,
            outputs: 33,
            zero_band_fraction: 1e-6,
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Discrete curvature vector κν = F_ss by the three-point second difference
/// on the (nonuniform) chord lengths.
///
/// Endpoints of open curves copy their interior neighbor: the true endpoint
/// motion depends on the curve beyond the arc, so any local rule carries an
/// irreducible boundary layer, and the copy is the one that stays stable
/// under the resampling loop (extrapolation feeds back and grows).
fn curvature_vectors(points: &[[f64; 2]], closed: bool) -> Vec<[f64; 2]> {
    let m = points.len();
    let mut v = vec![[0.0, 0.0]; m];
    let interior = |i: usize| {
        let prev = points[(i + m - 1) % m];
        let here = points[i];
        let next = points[(i + 1) % m];
        let h_minus = dist(here, prev).max(1e-300);
        let h_plus = dist(next, here).max(1e-300);
        let dx_p = [(next[0] - here[0]) / h_plus, (next[1] - here[1]) / h_plus];
        let dx_m = [(here[0] - prev[0]) / h_minus, (here[1] - prev[1]) / h_minus];
        let scale = 2.0 / (h_plus + h_minus);
        [scale * (dx_p[0] - dx_m[0]), scale * (dx_p[1] - dx_m[1])]
    };
    if closed {
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = interior(i);
        }
    } else {
        for (i, slot) in v.iter_mut().enumerate().take(m - 1).skip(1) {
            *slot = interior(i);
        }
        v[0] = v[1];
        v[m - 1] = v[m - 2];
    }
    v
}

fn min_segment(points: &[[f64; 2]], closed: bool) -> f64 {
    let m = points.len();
    let last = if closed { m } else { m - 1 };
    (0..last)
        .map(|i| dist(points[i], points[(i + 1) % m]))
        .fold(f64::INFINITY, f64::min)
}

/// Solve a cyclic tridiagonal system by the Sherman-Morrison correction of
/// two Thomas sweeps. `sub[i]`, `diag[i]`, `sup[i]` are the coefficients of
/// row i, with sub[0] and sup[n-1] sitting in the corners.
fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 3);
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= sub[0] * sup[n - 1] / gamma;
    let solve = |b: &[f64], d: &[f64]| -> Vec<f64> {
        // plain Thomas on the modified system
        let mut c_star = vec![0.0; n];
        let mut d_star = vec![0.0; n];
        c_star[0] = sup[0] / b[0];
        d_star[0] = d[0] / b[0];
        for i in 1..n {
            let m = b[i] - sub[i] * c_star[i - 1];
            c_star[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
            d_star[i] = (d[i] - sub[i] * d_star[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d_star[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d_star[i] - c_star[i] * x[i + 1];
        }
        x
    };
    let x = solve(&b, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    let z = solve(&b, &u);
    let factor = (x[0] + sub[0] * x[n - 1] / gamma) / (1.0 + z[0] + sub[0] * z[n - 1] / gamma);
    (0..n).map(|i| x[i] - factor * z[i]).collect()
}

/// Knot second derivatives of the natural C² cubic spline through (u_i, y_i).
fn spline_second_derivatives(u: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut sub = vec![0.0; n];
    let mut diag = vec![1.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = u[i] - u[i - 1];
        let h1 = u[i + 1] - u[i];
        sub[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        sup[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    // natural boundary: M_0 = M_{n-1} = 0 (diag already 1, rhs 0)
    let mut c_star = vec![0.0; n];
    let mut d_star = vec![0.0; n];
    c_star[0] = sup[0] / diag[0];
    d_star[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c_star[i - 1];
        c_star[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d_star[i] = (rhs[i] - sub[i] * d_star[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d_star[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_star[i] - c_star[i] * x[i + 1];
    }
    x
}

fn spline_eval(u: &[f64], y: &[f64], m2: &[f64], s: f64) -> f64 {
    // locate the panel by binary search
    let n = u.len();
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if u[mid] <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = u[hi] - u[lo];
    let a = (u[hi] - s) / h;
    let b = (s - u[lo]) / h;
    a * y[lo] + b * y[hi] + ((a * a * a - a) * m2[lo] + (b * b * b - b) * m2[hi]) * h * h / 6.0
}

/// Resample a curve to `m` points at uniform arclength (periodic C² spline
/// for closed curves, natural spline for open ones). This is the tangential
/// redistribution the solver applies after every step; it is also useful for
/// turning uniform-θ reconstructions into well-conditioned polygons.
pub fn resample_to_uniform_arclength(curve: &PlanarCurve, m: usize) -> Result<PlanarCurve> {
    if m < 3 {
        return Err(Error::invalid("need at least 3 resample points"));
    }
    if curve.is_closed() {
        PlanarCurve::closed(resample_closed(curve.points(), m))
    } else {
        PlanarCurve::open(resample_open(curve.points(), m))
    }
}

/// Resample a closed polygon to `m` points at uniform arclength using a
/// periodic C² cubic spline in the cumulative chord parameter.
fn resample_closed(points: &[[f64; 2]], m: usize) -> Vec<[f64; 2]> {
    let n = points.len();
    // cumulative chord parameter with the closing span appended
    let mut u = vec![0.0; n + 1];
    for i in 0..n {
        let next = points[(i + 1) % n];
        u[i + 1] = u[i] + dist(points[i], next);
    }
    let total = u[n];

    // periodic spline second derivatives per coordinate
    let mut out = vec![[0.0, 0.0]; m];
    for dim in 0..2 {
        let y: Vec<f64> = points.iter().map(|p| p[dim]).collect();
        // cyclic system over knots 0..n-1, row i couples i-1, i, i+1
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let h_prev = if i == 0 {
                total - u[n - 1]
            } else {
                u[i] - u[i - 1]
            };
            let h_next = u[i + 1] - u[i];
            let y_prev = y[(i + n - 1) % n];
            let y_next = y[(i + 1) % n];
            sub[i] = h_prev / 6.0;
            diag[i] = (h_prev + h_next) / 3.0;
            sup[i] = h_next / 6.0;
            rhs[i] = (y_next - y[i]) / h_next - (y[i] - y_prev) / h_prev;
        }
        let m2 = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs);
        // extended arrays with the wrap knot repeated for evaluation
        let mut u_ext = u.clone();
        let mut y_ext = y.clone();
        y_ext.push(y[0]);
        let mut m2_ext = m2.clone();
        m2_ext.push(m2[0]);
        u_ext[n] = total;
        for (k, slot) in out.iter_mut().enumerate() {
            let s = total * k as f64 / m as f64;
            slot[dim] = spline_eval(&u_ext, &y_ext, &m2_ext, s);
        }
    }
    out
}

/// Resample an open polyline to `m` points at uniform arclength with a
/// natural cubic spline.
fn resample_open(points: &[[f64; 2]], m: usize) -> Vec<[f64; 2]> {
    let n = points.len();
    let mut u = vec![0.0; n];
    for i in 1..n {
        u[i] = u[i - 1] + dist(points[i - 1], points[i]);
    }
    let total = u[n - 1];
    let mut out = vec![[0.0, 0.0]; m];
    for dim in 0..2 {
        let y: Vec<f64> = points.iter().map(|p| p[dim]).collect();
        let m2 = spline_second_derivatives(&u, &y);
        for (k, slot) in out.iter_mut().enumerate() {
            let s = total * k as f64 / (m - 1) as f64;
            slot[dim] = spline_eval(&u, &y, &m2, s);
        }
    }
    out
}

fn signed_curvatures(points: &[[f64; 2]], closed: bool) -> Vec<f64> {
    let m = points.len();
    let mut ks = vec![0.0; m];
    let at = |i: usize| vertex_curvature(points[(i + m - 1) % m], points[i], points[(i + 1) % m]);
    if closed {
        for (i, slot) in ks.iter_mut().enumerate() {
            *slot = at(i);
        }
    } else {
        for (i, slot) in ks.iter_mut().enumerate().take(m - 1).skip(1) {
            *slot = at(i);
        }
        ks[0] = ks[1];
        ks[m - 1] = ks[m - 2];
    }
    ks
}

fn arc_diagnostics(curve: &PlanarCurve, band_fraction: f64) -> BTreeMap<String, f64> {
    let mut d = BTreeMap::new();
    let meas = geometric_measures(curve);
    d.insert("length".to_string(), meas.length);
    d.insert("area".to_string(), meas.signed_area);
    let ks = signed_curvatures(curve.points(), curve.is_closed());
    let kmax = ks.iter().map(|k| k.abs()).fold(0.0, f64::max);
    d.insert("max_abs_kappa".to_string(), kmax);
    for (key, eps) in [("tac_eps0", 0.0), ("tac_eps01", 0.1), ("tac_eps1", 1.0)] {
        if let Ok(v) = total_absolute_curvature(curve, eps) {
            d.insert(key.to_string(), v);
        }
    }
    if curve.is_closed() {
        if let Ok(count) = sturm_zero_count(&ks, band_fraction * kmax) {
            d.insert("zero_count".to_string(), count as f64);
        }
        if meas.signed_area.abs() > 0.0 {
            d.insert(
                "isoperimetric_ratio".to_string(),
                meas.length * meas.length / (4.0 * std::f64::consts::PI * meas.signed_area),
            );
        }
    }
    d
}

/// Evolve a curve by its curvature vector up to `t_end`.
///
/// Closed curves must be embedded and counterclockwise with at least 32
/// points; the embeddedness sweep re-runs every `embed_check_every` steps and
/// a failure is a discretization fault (the flow preserves embeddedness).
/// Open curves (translating-soliton diagnostics) skip the area and
/// embeddedness machinery.
pub fn evolve_curve(
    initial: &ArcFlowState,
    t_end: f64,
    controls: &ArcControls,
) -> Result<FlowTrajectory<ArcFlowState>> {
    let t_start = initial.time;
    if !(t_start < t_end) {
        return Err(Error::invalid(format!(
            "need t_start < t_end, got [{t_start}, {t_end}]"
        )));
    }
    let closed = initial.curve.is_closed();
    if initial.curve.len() < 32 {
        return Err(Error::invalid("arclength flow needs at least 32 points"));
    }
    if closed {
        if !initial.curve.is_ccw() {
            return Err(Error::invalid(
                "closed curves must be oriented counterclockwise",
            ));
        }
        if let Some((i, j)) = initial.curve.find_self_intersection() {
            return Err(Error::SelfIntersection {
                time: t_start,
                first: i,
                second: j,
            });
        }
    }

    let output_times = crate::flow_theta::sanitize_output_times(match &controls.output_times {
        Some(times) => times.clone(),
        None => (0..controls.outputs)
            .map(|i| t_start + (t_end - t_start) * i as f64 / (controls.outputs - 1) as f64)
            .collect(),
    });

    let m = initial.curve.len();
    let mut points = initial.curve.points().to_vec();
    let mut t = t_start;
    let mut steps: usize = 0;

    let mut trajectory = FlowTrajectory::new();
    trajectory.push(
        ArcFlowState::new(initial.curve.clone(), t),
        arc_diagnostics(&initial.curve, controls.zero_band_fraction),
    )?;

    'outer: for target in output_times
        .into_iter()
        .filter(|&tt| tt > t_start && tt <= t_end)
    {
        while t < target {
            let h_min = min_segment(&points, closed);
            let dt_stable = controls.c_cfl * h_min * h_min / 2.0;
            if dt_stable < controls.dt_min {
                return Err(Error::StepSizeUnderflow {
                    time: t,
                    dt: dt_stable,
                    dt_min: controls.dt_min,
                });
            }
            let dt = dt_stable.min(target - t);

            // Heun step on point positions
            let v1 = curvature_vectors(&points, closed);
            let mid: Vec<[f64; 2]> = points
                .iter()
                .zip(&v1)
                .map(|(p, v)| [p[0] + dt * v[0], p[1] + dt * v[1]])
                .collect();
            let v2 = curvature_vectors(&mid, closed);
            for (i, p) in points.iter_mut().enumerate() {
                p[0] += 0.5 * dt * (v1[i][0] + v2[i][0]);
                p[1] += 0.5 * dt * (v1[i][1] + v2[i][1]);
            }
            t += dt;
            steps += 1;

            points = if closed {
                resample_closed(&points, m)
            } else {
                resample_open(&points, m)
            };

            let ks = signed_curvatures(&points, closed);
            let kmax = ks.iter().map(|k| k.abs()).fold(0.0, f64::max);
            let area = if closed {
                let poly = PlanarCurve::closed(points.clone())?;
                geometric_measures(&poly).signed_area
            } else {
                f64::INFINITY
            };
            if kmax > controls.kappa_blowup || (closed && area < controls.area_min) {
                let curve = build_curve(points.clone(), closed)?;
                let diag = arc_diagnostics(&curve, controls.zero_band_fraction);
                trajectory.push(ArcFlowState::new(curve, t), diag)?;
                trajectory.set_status(FlowStatus::Extinction);
                break 'outer;
            }
            if closed && steps.is_multiple_of(controls.embed_check_every) {
                let poly = PlanarCurve::closed(points.clone())?;
                if let Some((i, j)) = poly.find_self_intersection() {
                    return Err(Error::SelfIntersection {
                        time: t,
                        first: i,
                        second: j,
                    });
                }
            }
        }
        if t >= target {
            let curve = build_curve(points.clone(), closed)?;
            let diag = arc_diagnostics(&curve, controls.zero_band_fraction);
            trajectory.push(ArcFlowState::new(curve, t), diag)?;
        }
    }
    Ok(trajectory)
}

fn build_curve(points: Vec<[f64; 2]>, closed: bool) -> Result<PlanarCurve> {
    if closed {
        PlanarCurve::closed(points)
    } else {
        PlanarCurve::open(points)
    }
}

/// Count sign changes of a periodic sample list, treating |value| ≤ tolerance
/// as a band that an arc of samples may cross only once.
///
/// Samples inside the band are skipped; every remaining adjacent pair (taken
/// cyclically) with opposite signs contributes one crossing. Errors with
/// AllZero when every sample sits inside the band.
pub fn sturm_zero_count(samples: &[f64], tolerance: f64) -> Result<usize> {
    if tolerance < 0.0 {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    let signs: Vec<f64> = samples
        .iter()
        .filter(|v| v.abs() > tolerance)
        .map(|v| v.signum())
        .collect();
    if signs.is_empty() {
        return Err(Error::AllZero);
    }
    let mut count = 0;
    let k = signs.len();
    for i in 0..k {
        if signs[i] != signs[(i + 1) % k] {
            count += 1;
        }
    }
    Ok(count)
}

/// Discrete ∫ (ε² + κ²)^{1/2} ds; ε = 0 gives the total absolute curvature,
/// which equals 2π on embedded convex closed curves and decreases along the
/// flow for every ε ≥ 0.
pub fn total_absolute_curvature(curve: &PlanarCurve, epsilon: f64) -> Result<f64> {
    if epsilon < 0.0 {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    let ks = curvature_of_curve(curve)?;
    let pts = curve.points();
    let m = pts.len();
    let mut total = 0.0;
    for i in 0..m {
        let ds = if curve.is_closed() {
            0.5 * (dist(pts[(i + m - 1) % m], pts[i]) + dist(pts[i], pts[(i + 1) % m]))
        } else if i == 0 {
            0.5 * dist(pts[0], pts[1])
        } else if i == m - 1 {
            0.5 * dist(pts[m - 2], pts[m - 1])
        } else {
            0.5 * (dist(pts[i - 1], pts[i]) + dist(pts[i], pts[i + 1]))
        };
        let k = ks[i].1;
        total += (epsilon * epsilon + k * k).sqrt() * ds;
    }
    Ok(total)
}

/// Outcome of the two-bound convexity certificate: |κ| ≤ c1 and
/// ∫|κ| ds ≤ c2 over every retained state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCertificate {
    pub holds: bool,
    pub max_kappa: f64,
    pub max_tac: f64,
}

pub fn convexity_certificate(
    trajectory: &FlowTrajectory<ArcFlowState>,
    c1: f64,
    c2: f64,
) -> Result<ConvexityCertificate> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let mut max_kappa: f64 = 0.0;
    let mut max_tac: f64 = 0.0;
    for state in trajectory.states() {
        let ks = curvature_of_curve(&state.curve)?;
        let k = ks.iter().map(|&(_, k)| k.abs()).fold(0.0, f64::max);
        max_kappa = max_kappa.max(k);
        max_tac = max_tac.max(total_absolute_curvature(&state.curve, 0.0)?);
    }
    Ok(ConvexityCertificate {
        holds: max_kappa <= c1 && max_tac <= c2,
        max_kappa,
        max_tac,
    })
}

/// A trajectory rescaled about its final maximum-curvature point, with the
/// normalization data that produced it.
#[derive(Debug, Clone)]
pub struct RescaledTrajectory {
    pub trajectory: FlowTrajectory<ArcFlowState>,
    /// Max |κ| of the final retained state (the dilation factor).
    pub q: f64,
    /// The max-curvature point of the final state (the new origin).
    pub base_point: [f64; 2],
    /// The time of the final state (mapped to rescaled time 0).
    pub base_time: f64,
}

/// Blow-up rescaling about the final retained state: positions are recentered
/// at the max-|κ| point and dilated by Q = max |κ|, times map to (t - t_i) Q².
/// The rescaled final state has max |κ| = 1 attained at the origin.
pub fn blowup_rescale(trajectory: &FlowTrajectory<ArcFlowState>) -> Result<RescaledTrajectory> {
    let last = trajectory.last()?;
    let ks = curvature_of_curve(&last.curve)?;
    let (idx, q) = ks
        .iter()
        .enumerate()
        .map(|(i, &(_, k))| (i, k.abs()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or(Error::EmptyTrajectory)?;
    if q == 0.0 {
        return Err(Error::invalid("flat final state cannot be rescaled"));
    }
    let base_point = last.curve.points()[idx];
    let base_time = last.time;

    let mut rescaled = FlowTrajectory::new();
    for (state, diag) in trajectory.states().iter().zip(trajectory.diagnostics()) {
        let pts: Vec<[f64; 2]> = state
            .curve
            .points()
            .iter()
            .map(|p| [q * (p[0] - base_point[0]), q * (p[1] - base_point[1])])
            .collect();
        let curve = build_curve(pts, state.curve.is_closed())?;
        rescaled.push(
            ArcFlowState::new(curve, (state.time - base_time) * q * q),
            diag.clone(),
        )?;
    }
    rescaled.set_status(trajectory.status());
    Ok(RescaledTrajectory {
        trajectory: rescaled,
        q,
        base_point,
        base_time,
    })
}
