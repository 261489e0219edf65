//! The experiment registry: named, config-driven runs that write CSV/JSON
//! artifacts and return machine-readable pass/fail summaries.
//!
//! Adding an experiment is a code change (a new entry in REGISTRY), not a
//! config feature. Every run is deterministic for a fixed config and
//! CSF_LAB_SEED; artifacts carry no timestamps and all maps iterate sorted.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use csf_core::asymptotics::{
    classify_ancient, extract_quadrupole, fit_backward_limit, fit_exponential_rate,
    ClassificationKind,
};
use csf_core::exact_solutions::{
    backward_limit_profile, circle_pressure, grim_reaper_curve, oval_pressure, OvalParams,
};
use csf_core::flow_arclength::{evolve_curve, ArcControls, ArcFlowState};
use csf_core::flow_theta::{
    evolve_normalized, evolve_pressure, geometric_output_times, harnack_margin, ThetaControls,
    ThetaFlowState,
};
use csf_core::functionals::{stability_i, FunctionalSeries};
use csf_core::geometry::{directed_hausdorff, AngleGrid, CurvatureProfile, PlanarCurve};
use csf_core::io;
use csf_core::trajectory::{FlowTrajectory, Timestamped};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const PI: f64 = std::f64::consts::PI;

pub struct ExperimentDefaults {
    pub grid_n: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub controls: &'static [(&'static str, f64)],
    pub tolerances: &'static [(&'static str, f64)],
}

pub struct ExperimentSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub defaults: ExperimentDefaults,
    run: fn(&ExperimentConfig, &mut ArtifactWriter) -> Result<Outcome>,
}

pub struct Outcome {
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            metrics: BTreeMap::new(),
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    /// Record a named bound check: metric plus pass &= (value <= bound).
    fn check_le(&mut self, key: &str, value: f64, bound: f64) {
        self.metric(key, value);
        if !(value <= bound) {
            self.pass = false;
        }
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.metric(key, if ok { 1.0 } else { 0.0 });
        if !ok {
            self.pass = false;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub name: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    pub files: Vec<String>,
}

/// Collects artifact files under one experiment directory.
pub struct ArtifactWriter {
    dir: PathBuf,
    files: Vec<String>,
}

impl ArtifactWriter {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ArtifactWriter {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::write(self.dir.join(name), content)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_series(&mut self, series: &FunctionalSeries) -> Result<()> {
        self.write(
            &format!("{}.csv", series.name()),
            &io::series_to_csv(series),
        )
    }

    /// Dump every recorded diagnostic of a trajectory as one CSV per name,
    /// plus a strided subset of the states through `dump_state`.
    fn write_trajectory<S: Timestamped>(
        &mut self,
        trajectory: &FlowTrajectory<S>,
        dump_state: impl Fn(&S) -> (String, String),
        max_states: usize,
    ) -> Result<()> {
        let names: Vec<String> = trajectory
            .diagnostics()
            .first()
            .map(|d| d.keys().cloned().collect())
            .unwrap_or_default();
        for name in names {
            if let Some(series) = trajectory.series(&name) {
                self.write_series(&series)?;
            }
        }
        let len = trajectory.len();
        let stride = len.div_ceil(max_states).max(1);
        for (idx, state) in trajectory.states().iter().enumerate() {
            if idx % stride == 0 || idx == len - 1 {
                let (stem, content) = dump_state(state);
                self.write(&format!("{stem}_{idx:04}.csv"), &content)?;
            }
        }
        Ok(())
    }
}

fn theta_state_dump(state: &ThetaFlowState) -> (String, String) {
    ("profile".to_string(), io::profile_to_csv(&state.profile))
}

fn arc_state_dump(state: &ArcFlowState) -> (String, String) {
    ("curve".to_string(), io::curve_to_csv(&state.curve))
}

pub fn registry() -> &'static [ExperimentSpec] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static ExperimentSpec> {
    REGISTRY.iter().find(|spec| spec.name == name)
}

/// Run one experiment: resolve it in the registry, execute, write artifacts
/// and the manifest, and return the summary. The CSF_LAB_SEED environment
/// variable seeds the perturbation experiments unless the config pins one.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let spec =
        find(&config.name).ok_or_else(|| LabError::UnknownExperiment(config.name.clone()))?;
    let mut config = config.clone();
    if let Ok(text) = std::env::var("CSF_LAB_SEED") {
        if let Ok(seed) = text.trim().parse::<f64>() {
            config.controls.entry("seed".to_string()).or_insert(seed);
        }
    }
    let dir = config.out_dir.join(&config.name);
    let mut writer = ArtifactWriter::new(&dir)?;
    let outcome = (spec.run)(&config, &mut writer).map_err(|e| match e {
        LabError::Core(source) => LabError::Solver {
            name: config.name.clone(),
            source,
        },
        other => other,
    })?;

    let manifest = serde_json::json!({
        "experiment": config.name,
        "grid_n": config.grid_n,
        "time_window": [config.t_start, config.t_end],
        "controls": config.controls,
        "tolerances": config.tolerances,
        "metrics": outcome.metrics,
        "pass": outcome.pass,
        "files": writer.files,
    });
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    let mut files = writer.files;
    files.push("manifest.json".to_string());
    Ok(ExperimentSummary {
        name: config.name.clone(),
        pass: outcome.pass,
        metrics: outcome.metrics,
        files,
    })
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Io(std::io::Error::other(e))
    }
}

// ---------------------------------------------------------------------------
// shared helpers

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn least_squares_slope(ts: &[f64], vs: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let vm = vs.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(vs).map(|(t, v)| (t - tm) * (v - vm)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
    sxy / sxx
}

fn polar_curve(n: usize, radius: impl Fn(f64) -> f64) -> Result<PlanarCurve> {
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|j| {
            let t = TWO_PI * j as f64 / n as f64;
            let r = radius(t);
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    Ok(PlanarCurve::closed(pts)?)
}

fn oval_params(config: &ExperimentConfig) -> Result<OvalParams> {
    let lambda = config.control("lambda").unwrap_or(1.0);
    let gamma = config.control("gamma").unwrap_or(0.0);
    Ok(OvalParams::new(lambda, gamma)?)
}

fn theta_controls(config: &ExperimentConfig) -> ThetaControls {
    let mut controls = ThetaControls::default();
    if let Some(v) = config.control("c_cfl") {
        controls.c_cfl = v;
    }
    if let Some(v) = config.control("dt_min") {
        controls.dt_min = v;
    }
    if let Some(v) = config.control("p_blowup") {
        controls.p_blowup = v;
    }
    if let Some(v) = config.control("outputs") {
        controls.outputs = v as usize;
    }
    controls
}

fn arc_controls(config: &ExperimentConfig) -> ArcControls {
    let mut controls = ArcControls::default();
    if let Some(v) = config.control("c_cfl") {
        controls.c_cfl = v;
    }
    if let Some(v) = config.control("outputs") {
        controls.outputs = v as usize;
    }
    if let Some(v) = config.control("kappa_blowup") {
        controls.kappa_blowup = v;
    }
    if let Some(v) = config.control("area_min") {
        controls.area_min = v;
    }
    controls
}

fn area_slope_check(outcome: &mut Outcome, traj: &FlowTrajectory<ArcFlowState>, rel_tol: f64) {
    if let Some(areas) = traj.series("area") {
        let slope = least_squares_slope(areas.times(), areas.values());
        outcome.metric("area_slope", slope);
        outcome.check(
            "area_slope_within_tol",
            ((slope + TWO_PI) / TWO_PI).abs() <= rel_tol,
        );
    } else {
        outcome.check("area_slope_within_tol", false);
    }
}

// ---------------------------------------------------------------------------
// experiments

/// Constant-profile evolution against p = 1/(-2t).
fn run_circle_verify(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let initial = ThetaFlowState::pressure(circle_pressure(grid, config.t_start)?);
    let traj = evolve_pressure(&initial, config.t_end, &theta_controls(config))?;
    let mut worst = 0.0f64;
    for state in traj.states() {
        let exact = circle_pressure(grid, state.profile.time())?;
        worst = worst.max(linf(state.profile.values(), exact.values()));
    }
    writer.write_trajectory(&traj, theta_state_dump, 9)?;
    let mut outcome = Outcome::new();
    outcome.check_le(
        "l_inf_err",
        worst,
        config.tolerance("l_inf_err").unwrap_or(1e-9),
    );
    Ok(outcome)
}

/// Oval evolution against the closed form.
fn run_oval_verify(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let params = oval_params(config)?;
    let initial = ThetaFlowState::pressure(oval_pressure(grid, params, config.t_start)?);
    let traj = evolve_pressure(&initial, config.t_end, &theta_controls(config))?;
    let mut worst = 0.0f64;
    for state in traj.states() {
        let exact = oval_pressure(grid, params, state.profile.time())?;
        worst = worst.max(linf(state.profile.values(), exact.values()));
    }
    writer.write_trajectory(&traj, theta_state_dump, 9)?;
    let mut outcome = Outcome::new();
    outcome.check_le(
        "l_inf_err",
        worst,
        config.tolerance("l_inf_err").unwrap_or(1e-6),
    );
    Ok(outcome)
}

/// J is negative, non-increasing, and its finite-difference slope matches the
/// instantaneous dissipation at every retained step.
fn run_lyapunov_monotone(
    config: &ExperimentConfig,
    writer: &mut ArtifactWriter,
) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let params = oval_params(config)?;
    let initial = ThetaFlowState::pressure(oval_pressure(grid, params, config.t_start)?);
    let mut controls = theta_controls(config);
    controls.output_times = Some(geometric_output_times(
        config.t_start,
        config.t_end,
        controls.outputs,
    )?);
    let traj = evolve_pressure(&initial, config.t_end, &controls)?;
    writer.write_trajectory(&traj, theta_state_dump, 9)?;

    let j = traj
        .series("J")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    let d = traj
        .series("J_dissipation")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    let mut outcome = Outcome::new();
    outcome.check_le(
        "max_increase_J",
        j.max_increase(),
        config.tolerance("monotone_slack").unwrap_or(1e-8),
    );
    let max_j = j.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome.metric("max_J", max_j);
    outcome.check("J_negative", max_j < 0.0);

    let ts = j.times();
    let js = j.values();
    let ds = d.values();
    let mut worst_rel = 0.0f64;
    for k in 0..ts.len() - 1 {
        let slope = (js[k + 1] - js[k]) / (ts[k + 1] - ts[k]);
        let rel = ((slope - ds[k]) / ds[k].abs().max(1e-12)).abs();
        worst_rel = worst_rel.max(rel);
    }
    outcome.check_le(
        "worst_rel_dissipation_err",
        worst_rel,
        config.tolerance("rel_dissipation").unwrap_or(0.01),
    );
    Ok(outcome)
}

/// The stability functional and its dissipation vanish identically on the
/// ancient families.
fn run_i_functional_zero(
    config: &ExperimentConfig,
    writer: &mut ArtifactWriter,
) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let times = [-10.0, -1.0, -0.1];
    let tol = config.tolerance("abs_i").unwrap_or(1e-10);
    let mut outcome = Outcome::new();
    let mut worst_i = 0.0f64;
    let mut worst_d = 0.0f64;
    let mut rows = String::from("family,time,I,I_dissipation\n");
    for &t in &times {
        let circle = circle_pressure(grid, t)?;
        let v = stability_i(&circle)?;
        worst_i = worst_i.max(v.value.abs());
        worst_d = worst_d.max(v.dissipation.abs());
        rows.push_str(&format!("circle,{t},{},{}\n", v.value, v.dissipation));
        for &gamma in &[0.0, 0.3] {
            let params = OvalParams::new(config.control("lambda").unwrap_or(1.0), gamma)?;
            let oval = oval_pressure(grid, params, t)?;
            let v = stability_i(&oval)?;
            worst_i = worst_i.max(v.value.abs());
            worst_d = worst_d.max(v.dissipation.abs());
            rows.push_str(&format!(
                "oval_g{gamma},{t},{},{}\n",
                v.value, v.dissipation
            ));
        }
    }
    writer.write("stability_values.csv", &rows)?;
    outcome.check_le("worst_abs_I", worst_i, tol);
    outcome.check_le("worst_abs_I_dissipation", worst_d, tol);
    Ok(outcome)
}

/// Linearized decay rates in the normalized frame: mode-2 and mode-3
/// perturbations of the circle decay at 2 - l².
fn run_normalized_rate(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let eps = config.control("eps").unwrap_or(0.05);
    let mut outcome = Outcome::new();

    let mut run_mode = |l: usize, fit_start: f64, fit_end: f64| -> Result<f64> {
        let k0 = CurvatureProfile::curvature(
            grid,
            (0..config.grid_n)
                .map(|j| 1.0 + eps * (l as f64 * TWO_PI * j as f64 / config.grid_n as f64).cos())
                .collect(),
            0.0,
        )?;
        let steps = 40;
        let outputs: Vec<f64> = (0..=steps)
            .map(|i| fit_start + (fit_end - fit_start) * i as f64 / steps as f64)
            .collect();
        let mut controls = theta_controls(config);
        controls.output_times = Some(outputs);
        let traj = evolve_normalized(&ThetaFlowState::normalized(k0), fit_end, &controls)?;
        let amp = traj
            .series(&format!("mode{l}_amplitude"))
            .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
        writer.write(&format!("mode{l}_amplitude.csv"), &io::series_to_csv(&amp))?;
        let fit = fit_exponential_rate(&amp)?;
        Ok(fit.rate)
    };

    let rate2 = run_mode(
        2,
        config.control("fit2_start").unwrap_or(0.25),
        config.control("fit2_end").unwrap_or(1.75),
    )?;
    outcome.metric("rate2", rate2);
    outcome.check(
        "rate2_in_band",
        (rate2 + 2.0).abs() <= config.tolerance("rate2_dev").unwrap_or(0.2),
    );

    let rate3 = run_mode(
        3,
        config.control("fit3_start").unwrap_or(0.1),
        config.control("fit3_end").unwrap_or(1.0),
    )?;
    outcome.metric("rate3", rate3);
    outcome.check(
        "rate3_in_band",
        (rate3 + 7.0).abs() <= config.tolerance("rate3_dev").unwrap_or(0.7),
    );
    Ok(outcome)
}

/// Backward-limit fitting on progressively older oval snapshots: parameters
/// lock onto (λ, γ) and the residual decays at log-slope 2λ.
fn run_backward_limit(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let lambda = config.control("lambda").unwrap_or(1.0);
    let times = [-15.0, -10.0, -5.0];
    let mut outcome = Outcome::new();
    let tol = config.tolerance("param_err").unwrap_or(1e-6);

    let mut rows = String::from("time,a,b,residual\n");
    let mut resids = Vec::new();
    let mut deep_a_err = f64::NAN;
    let mut deep_b_err = f64::NAN;
    for (idx, &t) in times.iter().enumerate() {
        let params = OvalParams::new(lambda, config.control("gamma").unwrap_or(0.0))?;
        let p = oval_pressure(grid, params, t)?;
        let fit = fit_backward_limit(&p)?;
        rows.push_str(&format!("{t},{},{},{}\n", fit.a, fit.b, fit.residual));
        resids.push(fit.residual);
        if idx == 0 {
            deep_a_err = (fit.a - lambda).abs();
            let d = (fit.b - params.gamma()).rem_euclid(PI);
            deep_b_err = d.min(PI - d);
        }
    }
    writer.write("backward_fits.csv", &rows)?;
    outcome.check_le("a_err", deep_a_err, tol);
    outcome.check_le("b_err", deep_b_err, tol);

    // the fitted phase of the quarter-turned oval lands at π/2
    let quarter = OvalParams::new(lambda, PI / 2.0)?;
    let fit = fit_backward_limit(&oval_pressure(grid, quarter, times[0])?)?;
    outcome.check_le("b_quarter_err", (fit.b - PI / 2.0).abs(), tol);

    let logs: Vec<f64> = resids.iter().map(|r| r.ln()).collect();
    let slope = least_squares_slope(&times, &logs);
    outcome.metric("residual_log_slope", slope);
    outcome.check(
        "slope_in_band",
        (slope - 2.0 * lambda).abs()
            <= 0.1 * 2.0 * lambda + config.tolerance("slope_dev").unwrap_or(0.0),
    );
    Ok(outcome)
}

/// Classifier sweep: circle, a 3×3 (λ, γ) oval grid, and a static mode-3
/// impostor.
fn run_classify(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let times = [
        config.t_start,
        0.5 * (config.t_start + config.t_end),
        config.t_end,
    ];
    let tol = config.tolerance("param_err").unwrap_or(1e-6);
    let mut outcome = Outcome::new();
    let mut lines = Vec::new();
    let mut passed = 0usize;
    let mut total = 0usize;
    let mut worst_lambda = 0.0f64;
    let mut worst_gamma = 0.0f64;

    {
        total += 1;
        let snaps: Vec<CurvatureProfile> = times
            .iter()
            .map(|&t| circle_pressure(grid, t))
            .collect::<csf_core::Result<_>>()?;
        let c = classify_ancient(&snaps)?;
        let ok = c.kind == ClassificationKind::Circle && c.residual < 1e-10;
        if ok {
            passed += 1;
        }
        lines.push(format!(
            "{{\"case\":\"circle\",\"verdict\":{}}}",
            io::classification_to_json(&c)
        ));
    }

    for &lambda in &[0.5, 1.0, 2.0] {
        for &gamma in &[0.0, 0.3, PI / 2.0] {
            total += 1;
            let params = OvalParams::new(lambda, gamma)?;
            let snaps: Vec<CurvatureProfile> = times
                .iter()
                .map(|&t| oval_pressure(grid, params, t))
                .collect::<csf_core::Result<_>>()?;
            let c = classify_ancient(&snaps)?;
            let ok = match (&c.kind, c.params) {
                (ClassificationKind::AngenentOval, Some(got)) => {
                    let le = (got.lambda() - lambda).abs();
                    let d = (got.gamma() - params.gamma()).rem_euclid(PI);
                    let ge = d.min(PI - d);
                    worst_lambda = worst_lambda.max(le);
                    worst_gamma = worst_gamma.max(ge);
                    le < tol && ge < tol
                }
                _ => false,
            };
            if ok {
                passed += 1;
            }
            lines.push(format!(
                "{{\"case\":\"oval_l{lambda}_g{gamma}\",\"verdict\":{}}}",
                io::classification_to_json(&c)
            ));
        }
    }

    {
        total += 1;
        let snaps: Vec<CurvatureProfile> = times
            .iter()
            .map(|&t| {
                Ok(CurvatureProfile::from_fn(grid, t, |th| {
                    1.0 + 0.1 * (3.0 * th).cos()
                }))
            })
            .collect::<csf_core::Result<_>>()?;
        let c = classify_ancient(&snaps)?;
        let ok = c.kind == ClassificationKind::Unknown;
        if ok {
            passed += 1;
        }
        lines.push(format!(
            "{{\"case\":\"mode3\",\"verdict\":{}}}",
            io::classification_to_json(&c)
        ));
    }

    writer.write("classifications.jsonl", &(lines.join("\n") + "\n"))?;
    outcome.metric("cases_total", total as f64);
    outcome.metric("cases_passed", passed as f64);
    outcome.metric("worst_lambda_err", worst_lambda);
    outcome.metric("worst_gamma_err", worst_gamma);
    outcome.check("all_cases", passed == total);
    Ok(outcome)
}

/// Nonconvex (dimpled limaçon) run: curvature zeros vanish strictly before
/// extinction, total absolute curvature never increases, area obeys the law.
fn run_grayson_convexify(
    config: &ExperimentConfig,
    writer: &mut ArtifactWriter,
) -> Result<Outcome> {
    let m = config.control("points").unwrap_or(512.0) as usize;
    let bump = config.control("bump").unwrap_or(0.7);
    let seed = config.control("seed").unwrap_or(0.0);
    let phase = (seed % 628.0) * 0.01;
    let curve = polar_curve(m, |t| 1.0 + bump * (t + phase).cos())?;
    let initial = ArcFlowState::new(curve, config.t_start);
    let traj = evolve_curve(&initial, config.t_end, &arc_controls(config))?;
    writer.write_trajectory(&traj, arc_state_dump, 9)?;

    let mut outcome = Outcome::new();
    let counts = traj
        .series("zero_count")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    outcome.metric("zero_count_first", counts.values()[0]);
    outcome.metric("zero_count_last", *counts.values().last().unwrap());
    outcome.check(
        "zero_count_nonincreasing",
        counts.values().windows(2).all(|w| w[1] <= w[0]),
    );
    outcome.check("convexified", *counts.values().last().unwrap() == 0.0);

    let tac = traj
        .series("tac_eps0")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    outcome.check_le(
        "tac_max_increase",
        tac.max_increase(),
        config.tolerance("tac_slack").unwrap_or(1e-4),
    );
    area_slope_check(
        &mut outcome,
        &traj,
        config.tolerance("area_slope_rel").unwrap_or(0.01),
    );
    Ok(outcome)
}

/// Oscillation counts: exact periodic heat decay as the oracle plus the
/// curvature zero series of a nonconvex flow run, both non-increasing.
fn run_sturm_monotone(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let mut outcome = Outcome::new();

    // u_t = u_θθ from sin θ + 0.3 sin 4θ solved exactly by mode decay
    let n = config.grid_n;
    let heat_times: [f64; 8] = [0.0, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3];
    let mut counts = Vec::new();
    let mut rows = String::from("time,zero_count\n");
    for &t in &heat_times {
        let samples: Vec<f64> = (0..n)
            .map(|j| {
                let th = TWO_PI * j as f64 / n as f64;
                (-t).exp() * th.sin() + 0.3 * (-16.0 * t).exp() * (4.0 * th).sin()
            })
            .collect();
        let c = csf_core::flow_arclength::sturm_zero_count(&samples, 0.0)?;
        counts.push(c);
        rows.push_str(&format!("{t},{c}\n"));
    }
    writer.write("heat_zero_counts.csv", &rows)?;
    outcome.metric("heat_first", counts[0] as f64);
    outcome.metric("heat_last", *counts.last().unwrap() as f64);
    outcome.check(
        "heat_nonincreasing",
        counts.windows(2).all(|w| w[1] <= w[0]),
    );

    // curvature zeros of a three-petal flower under the flow
    let m = config.control("points").unwrap_or(512.0) as usize;
    let bump = config.control("bump").unwrap_or(0.4);
    let curve = polar_curve(m, |t| 1.0 + bump * (3.0 * t).cos())?;
    let traj = evolve_curve(
        &ArcFlowState::new(curve, config.t_start),
        config.t_end,
        &arc_controls(config),
    )?;
    let zeros = traj
        .series("zero_count")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    writer.write("flow_zero_counts.csv", &io::series_to_csv(&zeros))?;
    outcome.metric("flow_first", zeros.values()[0]);
    outcome.metric("flow_last", *zeros.values().last().unwrap());
    outcome.check(
        "flow_nonincreasing",
        zeros.values().windows(2).all(|w| w[1] <= w[0]),
    );
    outcome.check("flow_reaches_zero", *zeros.values().last().unwrap() == 0.0);
    Ok(outcome)
}

/// ε-regularized total absolute curvature is non-increasing for each
/// ε ∈ {0, 0.1, 1} along an ellipse run.
fn run_tac_monotone(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let m = config.control("points").unwrap_or(512.0) as usize;
    let pts: Vec<[f64; 2]> = (0..m)
        .map(|j| {
            let t = TWO_PI * j as f64 / m as f64;
            [2.0 * t.cos(), t.sin()]
        })
        .collect();
    let curve = PlanarCurve::closed(pts)?;
    let traj = evolve_curve(
        &ArcFlowState::new(curve, config.t_start),
        config.t_end,
        &arc_controls(config),
    )?;
    writer.write_trajectory(&traj, arc_state_dump, 9)?;

    let mut outcome = Outcome::new();
    let slack = config.tolerance("tac_slack").unwrap_or(1e-4);
    for key in ["tac_eps0", "tac_eps01", "tac_eps1"] {
        let series = traj
            .series(key)
            .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
        outcome.check_le(&format!("{key}_max_increase"), series.max_increase(), slack);
    }
    let iso = traj
        .series("isoperimetric_ratio")
        .ok_or(LabError::Core(csf_core::Error::EmptyTrajectory))?;
    outcome.check("isoperimetric_decreasing", iso.max_increase() < 1e-6);
    area_slope_check(
        &mut outcome,
        &traj,
        config.tolerance("area_slope_rel").unwrap_or(0.01),
    );
    Ok(outcome)
}

/// The grim reaper translates: evolve it and compare against the shifted
/// closed form on a central window (the arc ends slide inward under pure
/// normal motion, so they are excluded from the comparison).
fn run_grim_reaper_soliton(
    config: &ExperimentConfig,
    writer: &mut ArtifactWriter,
) -> Result<Outcome> {
    let m = config.control("points").unwrap_or(257.0) as usize;
    let half_width = config.control("half_width").unwrap_or(1.0);
    let dt = config.t_end - config.t_start;
    let reaper = grim_reaper_curve(config.t_start, half_width, m)?;
    let traj = evolve_curve(
        &ArcFlowState::new(reaper, config.t_start),
        config.t_end,
        &arc_controls(config),
    )?;
    let evolved = &traj.last()?.curve;
    writer.write("evolved_curve.csv", &io::curve_to_csv(evolved))?;

    // the endpoint boundary layer diffuses inward a distance ~√Δt, so the
    // comparison stays on the central half of the arc
    let translated = grim_reaper_curve(config.t_start + dt, (half_width * 1.3).min(1.55), 4097)?;
    let central: Vec<[f64; 2]> = evolved
        .points()
        .iter()
        .filter(|p| p[0].abs() <= 0.5 * half_width)
        .cloned()
        .collect();
    let fwd = directed_hausdorff(&PlanarCurve::open(central)?, &translated);
    let narrow: Vec<[f64; 2]> = translated
        .points()
        .iter()
        .filter(|p| p[0].abs() <= 0.4 * half_width)
        .cloned()
        .collect();
    let rev = directed_hausdorff(&PlanarCurve::open(narrow)?, evolved);

    let mut outcome = Outcome::new();
    outcome.check_le(
        "hausdorff",
        fwd.max(rev),
        config.tolerance("hausdorff").unwrap_or(1e-3),
    );
    Ok(outcome)
}

/// Harnack margin scan plus quadrupole extraction and backward-limit steady
/// states, bundled as a profile-diagnostics experiment.
fn run_harnack_scan(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let mut outcome = Outcome::new();
    let mut rows = String::from("family,time,margin\n");
    let mut worst_ancient = f64::INFINITY;
    let samples = 25;
    for i in 0..samples {
        let t = config.t_start + (config.t_end - config.t_start) * i as f64 / (samples - 1) as f64;
        let m_circle = harnack_margin(&circle_pressure(grid, t)?)?;
        worst_ancient = worst_ancient.min(m_circle);
        rows.push_str(&format!("circle,{t},{m_circle}\n"));
        let params = OvalParams::new(config.control("lambda").unwrap_or(1.0), 0.0)?;
        let m_oval = harnack_margin(&oval_pressure(grid, params, t)?)?;
        worst_ancient = worst_ancient.min(m_oval);
        rows.push_str(&format!("oval,{t},{m_oval}\n"));
    }
    writer.write("harnack_margins.csv", &rows)?;
    outcome.metric("worst_ancient_margin", worst_ancient);
    outcome.check("ancient_margins_nonnegative", worst_ancient >= 0.0);

    // a steep mode-3 profile violates the inequality
    let steep = CurvatureProfile::from_fn(grid, -1.0, |t| 1.0 + 0.9 * (3.0 * t).cos());
    let steep_margin = harnack_margin(&steep)?;
    outcome.metric("steep_mode3_margin", steep_margin);
    outcome.check("steep_profile_fails", steep_margin < 0.0);
    // the tame mode-1 profile cannot: its margin is (1-a)(2-a) > 0
    let tame = CurvatureProfile::from_fn(grid, -1.0, |t| 1.0 + 0.9 * t.cos());
    outcome.metric("tame_mode1_margin", harnack_margin(&tame)?);

    let steady = backward_limit_profile(grid, 1.0, 0.3)?;
    outcome.check_le(
        "steady_state_residual",
        csf_core::functionals::steady_state_residual(&steady),
        1e-8,
    );
    Ok(outcome)
}

/// Quadrupole coefficients of a normalized run settle to a limit.
fn run_quadrupole(config: &ExperimentConfig, writer: &mut ArtifactWriter) -> Result<Outcome> {
    let grid = AngleGrid::new(config.grid_n)?;
    let eps = config.control("eps").unwrap_or(0.01);
    let k0 = CurvatureProfile::curvature(
        grid,
        (0..config.grid_n)
            .map(|j| 1.0 + eps * (2.0 * TWO_PI * j as f64 / config.grid_n as f64).cos())
            .collect(),
        config.t_start,
    )?;
    let mut controls = theta_controls(config);
    let steps = 20;
    controls.output_times = Some(
        (1..=steps)
            .map(|i| config.t_start + (config.t_end - config.t_start) * i as f64 / steps as f64)
            .collect(),
    );
    let traj = evolve_normalized(&ThetaFlowState::normalized(k0), config.t_end, &controls)?;
    let (a, b) = extract_quadrupole(&traj)?;
    writer.write_series(&a)?;
    writer.write_series(&b)?;
    let vals = a.values();
    let last = vals[vals.len() - 1];
    let prev = vals[vals.len() - 6];
    let mut outcome = Outcome::new();
    outcome.metric("quadrupole_a_limit", last);
    outcome.check(
        "quadrupole_settles",
        (last - prev).abs() <= 0.02 * last.abs().max(1e-12),
    );
    Ok(outcome)
}

static REGISTRY: &[ExperimentSpec] = &[
    ExperimentSpec {
        name: "circle-verify",
        summary: "constant-pressure evolution against the contracting-circle law",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -1.0,
            t_end: -0.1,
            controls: &[],
            tolerances: &[("l_inf_err", 1e-9)],
        },
        run: run_circle_verify,
    },
    ExperimentSpec {
        name: "oval-verify",
        summary: "pressure evolution against the closed-form oval",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -2.0,
            t_end: -0.2,
            controls: &[("lambda", 1.0), ("gamma", 0.0)],
            tolerances: &[("l_inf_err", 1e-6)],
        },
        run: run_oval_verify,
    },
    ExperimentSpec {
        name: "lyapunov-monotone",
        summary: "J < 0, non-increasing, dissipation identity to 1%",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -2.0,
            t_end: -0.2,
            controls: &[("lambda", 1.0), ("gamma", 0.0), ("outputs", 463.0)],
            tolerances: &[("rel_dissipation", 0.01), ("monotone_slack", 1e-8)],
        },
        run: run_lyapunov_monotone,
    },
    ExperimentSpec {
        name: "I-functional-zero",
        summary: "stability functional vanishes on circles and ovals",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -10.0,
            t_end: -0.1,
            controls: &[("lambda", 1.0)],
            tolerances: &[("abs_i", 1e-10)],
        },
        run: run_i_functional_zero,
    },
    ExperimentSpec {
        name: "normalized-rate",
        summary: "mode-2 and mode-3 decay rates against the spectrum 2 - l²",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: 0.0,
            t_end: 1.75,
            controls: &[
                ("eps", 0.05),
                ("fit2_start", 0.25),
                ("fit2_end", 1.75),
                ("fit3_start", 0.1),
                ("fit3_end", 1.0),
            ],
            tolerances: &[("rate2_dev", 0.2), ("rate3_dev", 0.7)],
        },
        run: run_normalized_rate,
    },
    ExperimentSpec {
        name: "backward-limit",
        summary: "backward-limit fits on deep-past ovals with rate 2λ",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -15.0,
            t_end: -5.0,
            controls: &[("lambda", 1.0), ("gamma", 0.0)],
            tolerances: &[("param_err", 1e-6), ("slope_dev", 0.0)],
        },
        run: run_backward_limit,
    },
    ExperimentSpec {
        name: "classify",
        summary: "classifier sweep: circle, 3×3 oval grid, mode-3 impostor",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -3.0,
            t_end: -1.0,
            controls: &[],
            tolerances: &[("param_err", 1e-6)],
        },
        run: run_classify,
    },
    ExperimentSpec {
        name: "grayson-convexify",
        summary: "nonconvex limaçon convexifies before extinction",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: 0.0,
            t_end: 0.45,
            controls: &[("points", 512.0), ("bump", 0.7)],
            tolerances: &[("tac_slack", 1e-4), ("area_slope_rel", 0.01)],
        },
        run: run_grayson_convexify,
    },
    ExperimentSpec {
        name: "sturm-monotone",
        summary: "zero counts non-increasing: exact heat oracle and flow run",
        defaults: ExperimentDefaults {
            grid_n: 512,
            t_start: 0.0,
            t_end: 0.25,
            controls: &[("points", 512.0), ("bump", 0.4)],
            tolerances: &[],
        },
        run: run_sturm_monotone,
    },
    ExperimentSpec {
        name: "tac-monotone",
        summary: "ε-regularized total absolute curvature monotone on an ellipse run",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: 0.0,
            t_end: 0.4,
            controls: &[("points", 512.0)],
            tolerances: &[("tac_slack", 1e-4), ("area_slope_rel", 0.01)],
        },
        run: run_tac_monotone,
    },
    ExperimentSpec {
        name: "grim-reaper-soliton",
        summary: "the grim reaper translates under the arclength solver",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: 0.0,
            t_end: 0.1,
            controls: &[("points", 257.0), ("half_width", 1.0)],
            tolerances: &[("hausdorff", 1e-3)],
        },
        run: run_grim_reaper_soliton,
    },
    ExperimentSpec {
        name: "harnack-scan",
        summary: "Harnack margins on ancient families and a failing steep profile",
        defaults: ExperimentDefaults {
            grid_n: 256,
            t_start: -10.0,
            t_end: -0.1,
            controls: &[("lambda", 1.0)],
            tolerances: &[],
        },
        run: run_harnack_scan,
    },
    ExperimentSpec {
        name: "quadrupole",
        summary: "quadrupole coefficients of a normalized run settle",
        defaults: ExperimentDefaults {
            grid_n: 128,
            t_start: 0.0,
            t_end: 2.0,
            controls: &[("eps", 0.01)],
            tolerances: &[],
        },
        run: run_quadrupole,
    },
];
