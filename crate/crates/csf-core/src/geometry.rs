//! Convex-curve representations: tangent-angle curvature profiles, embedded
//! plane curves, and the reconstruction bridging the two.
//!
//! A strictly positive 2π-periodic curvature function κ(θ) is the curvature
//! of an embedded closed convex curve exactly when both closure integrals
//! ∫ cos θ / κ dθ and ∫ sin θ / κ dθ vanish; reconstruction integrates
//! dX/dθ = (cos θ, sin θ) / κ(θ).

use crate::error::{Error, Result};
use crate::spectral::{periodic_integral, Differentiator, TWO_PI};

/// Absolute tolerance on the closure residual below which a profile is
/// accepted as the curvature function of a closed curve. Spectral quadrature
/// drives true closed profiles to machine precision, so this is grid-independent.
pub const DEFAULT_CLOSE_TOL: f64 = 1e-8;

/// Uniform periodic grid θ_j = 2πj/n, j = 0..n-1. The endpoint 2π is not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleGrid {
    n: usize,
}

impl AngleGrid {
    /// n must be even and at least 8 so modes up to 2 are resolved with margin.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "grid size {n} must be even and >= 8"
            )));
        }
        Ok(AngleGrid { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        TWO_PI * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }
}

/// Whether stored samples are the pressure p = κ² or the curvature κ itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Pressure,
    Curvature,
}

/// Periodic samples of the pressure (or curvature) at one time stamp; the
/// tangent-angle state of a convex curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    grid: AngleGrid,
    values: Vec<f64>,
    time: f64,
    representation: Representation,
}

impl CurvatureProfile {
    pub fn new(
        grid: AngleGrid,
        values: Vec<f64>,
        time: f64,
        representation: Representation,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "profile has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("profile values must be finite"));
        }
        Ok(CurvatureProfile {
            grid,
            values,
            time,
            representation,
        })
    }

    pub fn pressure(grid: AngleGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        Self::new(grid, values, time, Representation::Pressure)
    }

    pub fn curvature(grid: AngleGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        Self::new(grid, values, time, Representation::Curvature)
    }

    /// Build a pressure profile by sampling a function of θ.
    pub fn from_fn(grid: AngleGrid, time: f64, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        CurvatureProfile {
            grid,
            values,
            time,
            representation: Representation::Pressure,
        }
    }

    pub fn grid(&self) -> AngleGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Strict positivity of every node, required by the parabolic solvers.
    pub fn is_strictly_positive(&self) -> bool {
        self.min_value() > 0.0
    }

    /// Pressure samples regardless of the stored representation.
    pub fn pressure_values(&self) -> Vec<f64> {
        match self.representation {
            Representation::Pressure => self.values.clone(),
            Representation::Curvature => self.values.iter().map(|k| k * k).collect(),
        }
    }

    /// Curvature samples; fails on negative pressure nodes.
    pub fn curvature_values(&self) -> Result<Vec<f64>> {
        match self.representation {
            Representation::Curvature => Ok(self.values.clone()),
            Representation::Pressure => {
                if self.min_value() < 0.0 {
                    return Err(Error::non_positive());
                }
                Ok(self.values.iter().map(|p| p.sqrt()).collect())
            }
        }
    }

    pub(crate) fn require_strictly_positive(&self) -> Result<()> {
        if self.is_strictly_positive() {
            Ok(())
        } else {
            Err(Error::non_positive())
        }
    }
}

/// Ordered point list of a plane curve. Closed curves treat the list as
/// cyclic without repeating the first point.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    points: Vec<[f64; 2]>,
    closed: bool,
}

impl PlanarCurve {
    pub fn closed(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::build(points, true)
    }

    pub fn open(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::build(points, false)
    }

    fn build(points: Vec<[f64; 2]>, closed: bool) -> Result<Self> {
        let min_points = if closed { 3 } else { 2 };
        if points.len() < min_points {
            return Err(Error::invalid(format!(
                "curve needs at least {min_points} points, got {}",
                points.len()
            )));
        }
        let curve = PlanarCurve { points, closed };
        if let Some(index) = curve.repeated_point() {
            return Err(Error::DegenerateSegment { index });
        }
        Ok(curve)
    }

    fn repeated_point(&self) -> Option<usize> {
        let m = self.points.len();
        let last = if self.closed { m } else { m - 1 };
        (0..last).find(|&i| {
            let a = self.points[i];
            let b = self.points[(i + 1) % m];
            a[0] == b[0] && a[1] == b[1]
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of segments: m for closed curves, m-1 for open ones.
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    fn segment(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let m = self.points.len();
        (self.points[i], self.points[(i + 1) % m])
    }

    pub fn is_ccw(&self) -> bool {
        signed_area(self) > 0.0
    }

    /// O(m log m)-typical sweep over segments; returns the first properly
    /// crossing non-adjacent pair, if any.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let m = self.segment_count();
        let n_points = self.points.len();
        let mut order: Vec<usize> = (0..m).collect();
        let min_x = |i: usize| {
            let (a, b) = self.segment(i);
            a[0].min(b[0])
        };
        let max_x = |i: usize| {
            let (a, b) = self.segment(i);
            a[0].max(b[0])
        };
        order.sort_by(|&i, &j| min_x(i).partial_cmp(&min_x(j)).unwrap());
        let mut active: Vec<usize> = Vec::new();
        for &i in &order {
            let xi = min_x(i);
            active.retain(|&j| max_x(j) >= xi);
            for &j in &active {
                let adjacent = {
                    let d = (i as isize - j as isize).unsigned_abs();
                    d == 1 || (self.closed && d == n_points - 1)
                };
                if adjacent {
                    continue;
                }
                let (p1, p2) = self.segment(i);
                let (q1, q2) = self.segment(j);
                if segments_intersect(p1, p2, q1, q2) {
                    return Some((j.min(i), j.max(i)));
                }
            }
            active.push(i);
        }
        None
    }

    pub fn is_embedded(&self) -> bool {
        self.find_self_intersection().is_none()
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(sub(p2, p1), sub(q1, p1));
    let d2 = cross(sub(p2, p1), sub(q2, p1));
    let d3 = cross(sub(q2, q1), sub(p1, q1));
    let d4 = cross(sub(q2, q1), sub(p2, q1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: [f64; 2], b: [f64; 2], c: [f64; 2], d: f64| {
        d == 0.0
            && c[0] >= a[0].min(b[0])
            && c[0] <= a[0].max(b[0])
            && c[1] >= a[1].min(b[1])
            && c[1] <= a[1].max(b[1])
    };
    on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4)
}

/// Both closure integrals (∫ cos θ / κ dθ, ∫ sin θ / κ dθ) by periodic
/// trapezoid quadrature.
pub fn closure_residual(profile: &CurvatureProfile) -> Result<(f64, f64)> {
    profile.require_strictly_positive()?;
    let kappa = profile.curvature_values()?;
    let n = profile.grid().len();
    let cos_int: Vec<f64> = (0..n)
        .map(|j| profile.grid().node(j).cos() / kappa[j])
        .collect();
    let sin_int: Vec<f64> = (0..n)
        .map(|j| profile.grid().node(j).sin() / kappa[j])
        .collect();
    Ok((periodic_integral(&cos_int), periodic_integral(&sin_int)))
}

/// Reconstruct the embedded closed convex curve whose curvature function the
/// profile is, with the default closure tolerance.
///
/// The basepoint is integrated from X(0) = (0,0) and the polygon is then
/// recentered on its area centroid; the flow is translation invariant and no
/// basepoint is canonical.
pub fn reconstruct_curve(profile: &CurvatureProfile) -> Result<PlanarCurve> {
    reconstruct_curve_with_tol(profile, DEFAULT_CLOSE_TOL)
}

pub fn reconstruct_curve_with_tol(profile: &CurvatureProfile, tol: f64) -> Result<PlanarCurve> {
    let (x, y) = reconstruct_coordinates(profile, tol)?;
    let points: Vec<[f64; 2]> = x.into_iter().zip(y).map(|(a, b)| [a, b]).collect();
    let curve = PlanarCurve::closed(points)?;
    let c = area_centroid(&curve);
    let recentered: Vec<[f64; 2]> = curve
        .points
        .iter()
        .map(|p| [p[0] - c[0], p[1] - c[1]])
        .collect();
    PlanarCurve::closed(recentered)
}

fn reconstruct_coordinates(profile: &CurvatureProfile, tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    profile.require_strictly_positive()?;
    let kappa = profile.curvature_values()?;
    let grid = profile.grid();
    let n = grid.len();
    let gx: Vec<f64> = (0..n).map(|j| grid.node(j).cos() / kappa[j]).collect();
    let gy: Vec<f64> = (0..n).map(|j| grid.node(j).sin() / kappa[j]).collect();
    let residual = periodic_integral(&gx).hypot(periodic_integral(&gy));
    if residual > tol {
        return Err(Error::NonClosable {
            residual,
            tolerance: tol,
        });
    }
    let diff = Differentiator::new(n);
    let (px, mx) = diff.antiderivative(&gx);
    let (py, my) = diff.antiderivative(&gy);
    // The means carry the (sub-tolerance) residual as a linear drift; keep it
    // so the discrete polygon closes only as well as the profile itself does.
    let x: Vec<f64> = (0..n).map(|j| px[j] + mx * grid.node(j)).collect();
    let y: Vec<f64> = (0..n).map(|j| py[j] + my * grid.node(j)).collect();
    Ok((x, y))
}

/// Enclosed area of the profile's curve evaluated spectrally, which is far
/// more accurate than the polygon shoelace on the reconstructed points.
pub fn profile_enclosed_area(profile: &CurvatureProfile) -> Result<f64> {
    let (x, y) = reconstruct_coordinates(profile, DEFAULT_CLOSE_TOL)?;
    let kappa = profile.curvature_values()?;
    let grid = profile.grid();
    let n = grid.len();
    // A = ½ ∮ (x dy - y dx), with dX/dθ = (cos θ, sin θ)/κ
    let integrand: Vec<f64> = (0..n)
        .map(|j| {
            let t = grid.node(j);
            0.5 * (x[j] * t.sin() - y[j] * t.cos()) / kappa[j]
        })
        .collect();
    Ok(periodic_integral(&integrand))
}

/// Signed polygon curvature at each vertex with its cumulative arclength.
///
/// Uses the circumscribed circle through consecutive point triples; for open
/// curves the endpoint values replicate their interior neighbors.
pub fn curvature_of_curve(curve: &PlanarCurve) -> Result<Vec<(f64, f64)>> {
    let m = curve.len();
    if m < 3 {
        return Err(Error::invalid("need at least 3 points for curvature"));
    }
    let pts = curve.points();
    let mut arclength = Vec::with_capacity(m);
    let mut s = 0.0;
    for (i, p) in pts.iter().enumerate() {
        arclength.push(s);
        if i + 1 < m || curve.is_closed() {
            s += dist(*p, pts[(i + 1) % m]);
        }
    }
    let kappa_at = |i: usize| -> f64 {
        let a = pts[(i + m - 1) % m];
        let b = pts[i];
        let c = pts[(i + 1) % m];
        vertex_curvature(a, b, c)
    };
    let mut out = Vec::with_capacity(m);
    for (i, &s) in arclength.iter().enumerate() {
        let k = if curve.is_closed() {
            kappa_at(i)
        } else if i == 0 {
            kappa_at(1)
        } else if i == m - 1 {
            kappa_at(m - 2)
        } else {
            kappa_at(i)
        };
        out.push((s, k));
    }
    Ok(out)
}

/// Curvature of the circumcircle through a, b, c, signed by turning direction.
pub(crate) fn vertex_curvature(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let e1 = sub(b, a);
    let e2 = sub(c, b);
    let chord = dist(a, c);
    let denom = dist(a, b) * dist(b, c) * chord;
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * cross(e1, e2) / denom
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measures {
    pub length: f64,
    pub signed_area: f64,
}

/// Polygonal length and shoelace signed area (positive when counterclockwise).
/// Open curves report zero area.
pub fn geometric_measures(curve: &PlanarCurve) -> Measures {
    Measures {
        length: polygon_length(curve),
        signed_area: signed_area(curve),
    }
}

fn polygon_length(curve: &PlanarCurve) -> f64 {
    let pts = curve.points();
    let m = pts.len();
    (0..curve.segment_count())
        .map(|i| dist(pts[i], pts[(i + 1) % m]))
        .sum()
}

fn signed_area(curve: &PlanarCurve) -> f64 {
    if !curve.is_closed() {
        return 0.0;
    }
    let pts = curve.points();
    let m = pts.len();
    0.5 * (0..m)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % m];
            cross(a, b)
        })
        .sum::<f64>()
}

fn area_centroid(curve: &PlanarCurve) -> [f64; 2] {
    let pts = curve.points();
    let m = pts.len();
    let a = signed_area(curve);
    if a.abs() < 1e-300 {
        // fall back to the vertex mean for degenerate polygons
        let mut cx = 0.0;
        let mut cy = 0.0;
        for p in pts {
            cx += p[0];
            cy += p[1];
        }
        return [cx / m as f64, cy / m as f64];
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..m {
        let p = pts[i];
        let q = pts[(i + 1) % m];
        let w = cross(p, q);
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// Distance from a point to the polyline (its segments, not just vertices).
pub fn point_to_polyline_distance(p: [f64; 2], curve: &PlanarCurve) -> f64 {
    let pts = curve.points();
    let m = pts.len();
    let mut best = f64::INFINITY;
    for i in 0..curve.segment_count() {
        let a = pts[i];
        let b = pts[(i + 1) % m];
        best = best.min(point_segment_distance(p, a, b));
    }
    best
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// One-sided Hausdorff distance from points of `a` to the polyline `b`.
pub fn directed_hausdorff(a: &PlanarCurve, b: &PlanarCurve) -> f64 {
    a.points()
        .iter()
        .map(|&p| point_to_polyline_distance(p, b))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff_distance(a: &PlanarCurve, b: &PlanarCurve) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}
