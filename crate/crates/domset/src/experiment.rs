//! Batch experiment runner: build or load instances, run the algorithm,
//! consult the oracles, evaluate every applicable bound, and stream report
//! rows to a sink as they complete.

use std::io;
use std::path::PathBuf;
use std::time::Instant;

use num::rational::Ratio;
use thiserror::Error;

use crate::generators::{self, GeneratorError};
use crate::graph::{Graph, GraphError};
use crate::oracle::{exact_min_domset_guarded, greedy_domset, DomSetCertificate, EXACT_GUARD};
use crate::params::{ParamOverrides, Params, ParamsError, TMode};
use crate::phases::{run_full, Mode};
use crate::report::{build_report, ReportInputs, RunReport};
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: GraphError,
    },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error("writing report row: {0}")]
    Sink(#[source] io::Error),
}

/// One instance source. Random instances run once per configured seed; the
/// other families ignore the seed list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceSpec {
    File(PathBuf),
    Grid { w: u32, h: u32 },
    TriangulatedGrid { w: u32, h: u32 },
    Counterexample { gamma: u32, m: u32 },
    TwinStars { d: u32, copies: u32 },
    RandomSparse { n: u32, d: Ratio<u64> },
}

impl InstanceSpec {
    pub fn family(&self) -> String {
        match self {
            InstanceSpec::File(path) => format!("file:{}", path.display()),
            InstanceSpec::Grid { w, h } => format!("grid-{w}x{h}"),
            InstanceSpec::TriangulatedGrid { w, h } => format!("tri-grid-{w}x{h}"),
            InstanceSpec::Counterexample { gamma, m } => format!("counterexample-{gamma}x{m}"),
            InstanceSpec::TwinStars { d, copies } => format!("twin-stars-{d}x{copies}"),
            InstanceSpec::RandomSparse { n, d } => format!("random-{n}-d{d}"),
        }
    }

    pub fn uses_seed(&self) -> bool {
        matches!(self, InstanceSpec::RandomSparse { .. })
    }

    pub fn build(&self, seed: u64) -> Result<Graph, ExperimentError> {
        match self {
            InstanceSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
                    path: path.clone(),
                    source,
                })?;
                Graph::parse_edge_list(&text).map_err(|source| ExperimentError::Parse {
                    path: path.clone(),
                    source,
                })
            }
            InstanceSpec::Grid { w, h } => Ok(generators::grid(*w, *h)),
            InstanceSpec::TriangulatedGrid { w, h } => Ok(generators::triangulated_grid(*w, *h)),
            InstanceSpec::Counterexample { gamma, m } => {
                Ok(generators::counterexample(*gamma, *m))
            }
            InstanceSpec::TwinStars { d, copies } => Ok(generators::twin_stars(*d, *copies)),
            InstanceSpec::RandomSparse { n, d } => {
                Ok(generators::random_sparse(*n, *d, seed)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleChoice {
    /// Exact inside the guard; records the greedy bound past it.
    Auto,
    /// Same fallback behavior, but intent is recorded for the reader.
    Exact,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub density_bound: Ratio<i64>,
    pub t_mode: TMode,
    pub overrides: ParamOverrides,
    pub mode: Mode,
    pub oracle: OracleChoice,
    pub oracle_guard: usize,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec, density_bound: Ratio<i64>) -> Self {
        ExperimentConfig {
            instance,
            density_bound,
            t_mode: TMode::Exact,
            overrides: ParamOverrides::default(),
            mode: Mode::Both,
            oracle: OracleChoice::Auto,
            oracle_guard: EXACT_GUARD,
            seeds: vec![0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExperimentSummary {
    pub reports: usize,
    pub failed_checks: usize,
}

impl ExperimentSummary {
    pub fn all_passed(&self) -> bool {
        self.failed_checks == 0
    }
}

fn choose_oracle(g: &Graph, choice: OracleChoice, guard: usize) -> Option<DomSetCertificate> {
    if g.vertex_count() == 0 {
        return None;
    }
    match choice {
        OracleChoice::Greedy => Some(greedy_domset(g)),
        OracleChoice::Auto | OracleChoice::Exact => {
            exact_min_domset_guarded(g, guard).ok().or_else(|| Some(greedy_domset(g)))
        }
    }
}

/// Runs one configuration (one instance, or one per seed for random
/// families), pushing each report into the sink as soon as it is complete.
pub fn run_experiment<F>(
    config: &ExperimentConfig,
    sink: &mut F,
) -> Result<ExperimentSummary, ExperimentError>
where
    F: FnMut(&RunReport) -> io::Result<()>,
{
    let seeds: Vec<Option<u64>> = if config.instance.uses_seed() {
        config.seeds.iter().map(|&s| Some(s)).collect()
    } else {
        vec![None]
    };
    let mut summary = ExperimentSummary::default();
    for seed in seeds {
        let report = run_single(config, seed)?;
        summary.reports += 1;
        if report.checks.any_failure() {
            summary.failed_checks += 1;
        }
        sink(&report).map_err(ExperimentError::Sink)?;
    }
    Ok(summary)
}

fn run_single(
    config: &ExperimentConfig,
    seed: Option<u64>,
) -> Result<RunReport, ExperimentError> {
    let started = Instant::now();
    let g = config.instance.build(seed.unwrap_or(0))?;
    let params = Params::for_graph(
        &g,
        config.density_bound,
        config.t_mode,
        config.overrides.clone(),
    )?;
    let outcome = run_full(&g, &params, config.mode)?;
    let oracle = choose_oracle(&g, config.oracle, config.oracle_guard);
    let wall_ms = started.elapsed().as_millis() as u64;
    Ok(build_report(ReportInputs {
        g: &g,
        params: &params,
        outcome: &outcome,
        mode: config.mode,
        family: config.instance.family(),
        seed,
        oracle: oracle.as_ref(),
        wall_ms,
    }))
}
