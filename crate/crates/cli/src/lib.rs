//! Library side of the `riesz-ned` command: configuration, the suites each
//! subcommand runs, and report rendering.

pub mod output;
pub mod suites;

use std::path::PathBuf;

use riesz_ned::{generate_random_instance, Ar1Scenario, Instance};

pub use output::{Format, Row, RunReport};
pub use suites::{run_suite, Context, Suite, SuiteOutcome};

/// Atoms and partitions of the instance used when `--instance` is absent.
pub const DEFAULT_ATOMS: usize = 6;
pub const DEFAULT_PARTITIONS: usize = 3;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub suites: Vec<Suite>,
    pub instance_path: Option<PathBuf>,
    pub scenario_path: Option<PathBuf>,
    pub seed: u64,
    pub cap: usize,
    pub window: Option<usize>,
}

fn load_context(config: &RunConfig) -> Result<Context, String> {
    let (name, instance) = match &config.instance_path {
        Some(path) => {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            (name, Instance::load(path).map_err(|e| e.to_string())?)
        }
        None => (
            format!("generated-{}", config.seed),
            generate_random_instance(config.seed, DEFAULT_ATOMS, DEFAULT_PARTITIONS).map_err(|e| e.to_string())?,
        ),
    };
    let scenario = match &config.scenario_path {
        Some(path) => Some(Ar1Scenario::load(path).map_err(|e| format!("scenario: {e}"))?),
        None => None,
    };
    Ok(Context {
        name,
        instance,
        seed: config.seed,
        cap: config.cap,
        window: config.window,
        scenario,
    })
}

/// Runs every requested suite. Loading failures become one failing outcome
/// per suite; an empty suite list is itself a failure.
pub fn execute(config: &RunConfig) -> RunReport {
    let instance_label = config
        .instance_path
        .as_ref()
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("generated-{}", config.seed));
    let suites: Vec<SuiteOutcome> = match load_context(config) {
        Ok(ctx) => config.suites.iter().map(|&s| run_suite(s, &ctx)).collect(),
        Err(e) => config.suites.iter().map(|&s| SuiteOutcome::failed(s, e.clone())).collect(),
    };
    RunReport {
        command: config.command.clone(),
        instance: instance_label,
        seed: config.seed,
        cap: config.cap,
        window: config.window,
        pass: !suites.is_empty() && suites.iter().all(|s| s.pass),
        suites,
    }
}
