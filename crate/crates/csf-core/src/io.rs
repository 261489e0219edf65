//! CSV and JSON serialization of profiles, curves, diagnostic series, and
//! classification results.
//!
//! All numeric output is written through Rust's shortest round-trip float
//! formatting, so re-parsing recovers every value bit-exactly and identical
//! data produces identical bytes.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{Classification, ClassificationKind};
use crate::error::{Error, Result};
use crate::functionals::FunctionalSeries;
use crate::geometry::{AngleGrid, CurvatureProfile, PlanarCurve};

/// Profile as CSV with a `theta,p` header.
pub fn profile_to_csv(profile: &CurvatureProfile) -> String {
    let mut out = String::from("theta,p\n");
    for (j, v) in profile.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", profile.grid().node(j), v));
    }
    out
}

/// Curve as CSV with an `x,y` header.
pub fn curve_to_csv(curve: &PlanarCurve) -> String {
    let mut out = String::from("x,y\n");
    for p in curve.points() {
        out.push_str(&format!("{},{}\n", p[0], p[1]));
    }
    out
}

/// Diagnostic series as CSV with a `time,value` header.
pub fn series_to_csv(series: &FunctionalSeries) -> String {
    let mut out = String::from("time,value\n");
    for (t, v) in series.times().iter().zip(series.values()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    n: usize,
    time: f64,
    values: Vec<f64>,
}

/// Profile as JSON {"n": …, "time": …, "values": […]}; the values are the
/// pressure samples.
pub fn profile_to_json(profile: &CurvatureProfile) -> String {
    let doc = ProfileJson {
        n: profile.grid().len(),
        time: profile.time(),
        values: profile.pressure_values(),
    };
    serde_json::to_string(&doc).expect("profile serialization cannot fail")
}

pub fn profile_from_json(text: &str) -> Result<CurvatureProfile> {
    let doc: ProfileJson =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad profile JSON: {e}")))?;
    if doc.values.len() != doc.n {
        return Err(Error::invalid(format!(
            "profile JSON claims n = {} but carries {} values",
            doc.n,
            doc.values.len()
        )));
    }
    CurvatureProfile::pressure(AngleGrid::new(doc.n)?, doc.values, doc.time)
}

/// Parse a `theta,p` CSV back into a profile at the given time stamp. The
/// theta column must be the uniform grid in order.
pub fn profile_from_csv(text: &str, time: f64) -> Result<CurvatureProfile> {
    let mut values = Vec::new();
    let mut thetas = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("theta") {
            continue;
        }
        let mut parts = line.split(',');
        let theta: f64 = parse_field(parts.next(), lineno)?;
        let p: f64 = parse_field(parts.next(), lineno)?;
        thetas.push(theta);
        values.push(p);
    }
    let grid = AngleGrid::new(values.len())?;
    for (j, &theta) in thetas.iter().enumerate() {
        if (theta - grid.node(j)).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "theta column is not the uniform grid at row {j}"
            )));
        }
    }
    CurvatureProfile::pressure(grid, values, time)
}

fn parse_field(field: Option<&str>, lineno: usize) -> Result<f64> {
    field
        .ok_or_else(|| Error::invalid(format!("missing field at line {}", lineno + 1)))?
        .trim()
        .parse()
        .map_err(|e| Error::invalid(format!("bad number at line {}: {e}", lineno + 1)))
}

/// Classification as JSON {"kind": …, "lambda": …, "gamma": …, "residual": …};
/// the parameters are null except on ovals.
pub fn classification_to_json(c: &Classification) -> String {
    let kind = match c.kind {
        ClassificationKind::Circle => "Circle",
        ClassificationKind::AngenentOval => "AngenentOval",
        ClassificationKind::Unknown => "Unknown",
    };
    let doc = serde_json::json!({
        "kind": kind,
        "lambda": c.params.map(|p| p.lambda()),
        "gamma": c.params.map(|p| p.gamma()),
        "residual": c.residual,
    });
    serde_json::to_string(&doc).expect("classification serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_solutions::{circle_pressure, oval_pressure, OvalParams};

    #[test]
    fn profile_csv_round_trip() {
        let g = AngleGrid::new(64).unwrap();
        let params = OvalParams::new(1.0, 0.3).unwrap();
        let p = oval_pressure(g, params, -1.0).unwrap();
        let text = profile_to_csv(&p);
        let q = profile_from_csv(&text, -1.0).unwrap();
        assert_eq!(p.values(), q.values());
    }

    #[test]
    fn profile_json_round_trip() {
        let g = AngleGrid::new(32).unwrap();
        let p = circle_pressure(g, -0.25).unwrap();
        let q = profile_from_json(&profile_to_json(&p)).unwrap();
        assert_eq!(p.values(), q.values());
        assert_eq!(q.time(), -0.25);
    }

    #[test]
    fn classification_json_shape() {
        let c = Classification {
            kind: ClassificationKind::Circle,
            params: None,
            residual: 1e-12,
        };
        let text = classification_to_json(&c);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "Circle");
        assert!(v["lambda"].is_null());
    }
}
