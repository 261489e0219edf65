//! Flat `key = value` experiment configs with one `[section]` per experiment.
//!
//! ```text
//! # global defaults
//! out_dir = out
//!
//! [circle-verify]
//! grid_n = 256
//! t_start = -1
//! t_end = -0.1
//! control.c_cfl = 0.2
//! tol.l_inf_err = 1e-9
//! ```
//!
//! Every key is optional; unset fields come from the experiment registry's
//! defaults table (see `csf-lab list`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{LabError, Result};
use crate::experiments;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub grid_n: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub controls: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Registry defaults for `name`, or generic fallbacks when the name is
    /// not registered (the runner will reject it later with
    /// UnknownExperiment; parsing stays syntactic).
    pub fn defaulted(name: &str) -> Self {
        let mut config = ExperimentConfig {
            name: name.to_string(),
            grid_n: 256,
            t_start: -2.0,
            t_end: -0.2,
            controls: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            out_dir: PathBuf::from("out"),
        };
        if let Some(spec) = experiments::find(name) {
            config.grid_n = spec.defaults.grid_n;
            config.t_start = spec.defaults.t_start;
            config.t_end = spec.defaults.t_end;
            for (k, v) in spec.defaults.controls {
                config.controls.insert((*k).to_string(), *v);
            }
            for (k, v) in spec.defaults.tolerances {
                config.tolerances.insert((*k).to_string(), *v);
            }
        }
        config
    }

    pub fn control(&self, key: &str) -> Option<f64> {
        self.controls.get(key).copied()
    }

    pub fn tolerance(&self, key: &str) -> Option<f64> {
        self.tolerances.get(key).copied()
    }

    fn validate(&self, line: usize) -> Result<()> {
        if self.grid_n < 64 || !self.grid_n.is_multiple_of(2) {
            return Err(LabError::config(
                line,
                format!("grid_n = {} must be even and >= 64", self.grid_n),
            ));
        }
        if !(self.t_start < self.t_end) {
            return Err(LabError::config(
                line,
                format!(
                    "need t_start < t_end, got [{}, {}]",
                    self.t_start, self.t_end
                ),
            ));
        }
        Ok(())
    }
}

/// Parse a config that may define several experiments.
pub fn parse_configs(text: &str) -> Result<Vec<ExperimentConfig>> {
    let mut configs: Vec<(usize, ExperimentConfig)> = Vec::new();
    let mut global_out_dir: Option<PathBuf> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| LabError::config(lineno, "unterminated section header"))?
                .trim();
            if name.is_empty() {
                return Err(LabError::config(lineno, "empty experiment name"));
            }
            let mut config = ExperimentConfig::defaulted(name);
            if let Some(dir) = &global_out_dir {
                config.out_dir = dir.clone();
            }
            configs.push((lineno, config));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            LabError::config(lineno, format!("expected key = value, got '{line}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        match configs.last_mut() {
            None => {
                // global prelude
                if key == "out_dir" {
                    global_out_dir = Some(PathBuf::from(value));
                } else {
                    return Err(LabError::config(
                        lineno,
                        format!("key '{key}' must appear inside an experiment section"),
                    ));
                }
            }
            Some((_, config)) => apply_key(config, key, value, lineno)?,
        }
    }

    for (line, config) in &configs {
        config.validate(*line)?;
    }
    Ok(configs.into_iter().map(|(_, c)| c).collect())
}

/// Parse a config that must define exactly one experiment.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut configs = parse_configs(text)?;
    match configs.len() {
        1 => Ok(configs.pop().expect("len checked")),
        n => Err(LabError::config(
            0,
            format!("expected exactly one experiment section, found {n}"),
        )),
    }
}

fn apply_key(config: &mut ExperimentConfig, key: &str, value: &str, lineno: usize) -> Result<()> {
    let parse_f64 = |v: &str| -> Result<f64> {
        v.parse()
            .map_err(|e| LabError::config(lineno, format!("bad number '{v}' for '{key}': {e}")))
    };
    match key {
        "grid_n" => {
            config.grid_n = value
                .parse()
                .map_err(|e| LabError::config(lineno, format!("bad integer '{value}': {e}")))?;
        }
        "t_start" => config.t_start = parse_f64(value)?,
        "t_end" => config.t_end = parse_f64(value)?,
        "out_dir" => config.out_dir = PathBuf::from(value),
        _ => {
            if let Some(name) = key.strip_prefix("control.") {
                config.controls.insert(name.to_string(), parse_f64(value)?);
            } else if let Some(name) = key.strip_prefix("tol.") {
                config
                    .tolerances
                    .insert(name.to_string(), parse_f64(value)?);
            } else {
                return Err(LabError::config(lineno, format!("unknown key '{key}'")));
            }
        }
    }
    Ok(())
}
