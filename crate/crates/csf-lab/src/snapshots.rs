//! Snapshot CSV format for the `classify` subcommand: rows of
//! `time,theta,p`, one block of rows per time stamp, thetas forming the
//! uniform periodic grid. A header line is skipped if present.

use csf_core::geometry::{AngleGrid, CurvatureProfile};

use crate::error::{LabError, Result};

pub fn parse_snapshots(text: &str) -> Result<Vec<CurvatureProfile>> {
    let mut blocks: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("time") || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',');
        let mut field = |name: &str| -> Result<f64> {
            parts
                .next()
                .ok_or_else(|| LabError::config(lineno, format!("missing {name} column")))?
                .trim()
                .parse()
                .map_err(|e| LabError::config(lineno, format!("bad {name}: {e}")))
        };
        let time = field("time")?;
        let theta = field("theta")?;
        let p = field("p")?;
        match blocks.last_mut() {
            Some((t, thetas, values)) if *t == time => {
                thetas.push(theta);
                values.push(p);
            }
            _ => blocks.push((time, vec![theta], vec![p])),
        }
    }
    let mut profiles = Vec::with_capacity(blocks.len());
    for (time, thetas, values) in blocks {
        let grid = AngleGrid::new(values.len())?;
        for (j, &theta) in thetas.iter().enumerate() {
            if (theta - grid.node(j)).abs() > 1e-9 {
                return Err(LabError::config(
                    0,
                    format!("snapshot at t = {time} is not on the uniform grid (node {j})"),
                ));
            }
        }
        profiles.push(CurvatureProfile::pressure(grid, values, time)?);
    }
    Ok(profiles)
}

/// Render profiles into the snapshot CSV format.
pub fn snapshots_to_csv(profiles: &[CurvatureProfile]) -> String {
    let mut out = String::from("time,theta,p\n");
    for profile in profiles {
        for (j, v) in profile.values().iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                profile.time(),
                profile.grid().node(j),
                v
            ));
        }
    }
    out
}
