use std::collections::VecDeque;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use csf_lab::config::{parse_configs, ExperimentConfig};
use csf_lab::experiments::{registry, run_experiment, ExperimentSummary};
use csf_lab::snapshots::parse_snapshots;

#[derive(Parser)]
#[command(
    name = "csf-lab",
    about = "Curve shortening flow laboratory: batch experiments and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config file; exit 0 only if all pass.
    Run {
        /// Path to a key = value config with one [section] per experiment
        config: PathBuf,
        /// Run independent experiments concurrently
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Override the output directory for all experiments
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered experiments and their defaults.
    List,
    /// Classify pressure snapshots (CSV rows: time,theta,p).
    Classify { snapshots: PathBuf },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, jobs, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut configs = parse_configs(&text)?;
            if let Some(dir) = out {
                for c in &mut configs {
                    c.out_dir = dir.clone();
                }
            }
            let summaries = run_all(configs, jobs.max(1))?;
            let mut all_pass = true;
            for s in &summaries {
                print_summary(s);
                all_pass &= s.pass;
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::List => {
            for spec in registry() {
                println!("{:<22} {}", spec.name, spec.summary);
                println!(
                    "{:<22}   defaults: grid_n = {}, window = [{}, {}]",
                    "", spec.defaults.grid_n, spec.defaults.t_start, spec.defaults.t_end
                );
                for (k, v) in spec.defaults.controls {
                    println!("{:<22}   control.{k} = {v}", "");
                }
                for (k, v) in spec.defaults.tolerances {
                    println!("{:<22}   tol.{k} = {v}", "");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { snapshots } => {
            let text = std::fs::read_to_string(&snapshots)?;
            let profiles = parse_snapshots(&text)?;
            let verdict = csf_core::asymptotics::classify_ancient(&profiles)?;
            println!("{}", csf_core::io::classification_to_json(&verdict));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_all(
    configs: Vec<ExperimentConfig>,
    jobs: usize,
) -> Result<Vec<ExperimentSummary>, csf_lab::LabError> {
    if jobs <= 1 || configs.len() <= 1 {
        return configs.iter().map(run_experiment).collect();
    }
    // simple shared worklist; each experiment owns its output subdirectory
    let queue: Mutex<VecDeque<(usize, ExperimentConfig)>> =
        Mutex::new(configs.into_iter().enumerate().collect());
    let results: Mutex<Vec<(usize, Result<ExperimentSummary, csf_lab::LabError>)>> =
        Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop_front();
                let Some((idx, config)) = next else { break };
                let result = run_experiment(&config);
                results.lock().unwrap().push((idx, result));
            });
        }
    });
    let mut collected = results.into_inner().unwrap();
    collected.sort_by_key(|(idx, _)| *idx);
    collected.into_iter().map(|(_, r)| r).collect()
}

fn print_summary(s: &ExperimentSummary) {
    let status = if s.pass { "PASS" } else { "FAIL" };
    let metrics: Vec<String> = s.metrics.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!(
        "experiment {:<22} {status}  ({})",
        s.name,
        metrics.join(", ")
    );
}
