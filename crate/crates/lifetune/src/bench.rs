//! Experiment harness: runs strategy x repetition grids over shuffled workload
//! orders, persists one JSON run record per cell, and renders the report
//! tables (effectiveness, speedup, ablations, alpha sensitivity) as CSV and
//! markdown. Reports are pure functions of the persisted records.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{make_strategy, RetentionPool, StrategyId, StrategyOptions};
use crate::core::{PerformanceObjective, WorkloadId};
use crate::distill::PreservedSet;
use crate::oracle::{CyberTwin, LoadSummary, OracleError};
use crate::planner::{derive_run_seed, lifelong_run, PlannerParams, RunRecord};
use crate::stats::{
    a12, a12_non_trivial, scott_knott, speedup, summarize, wilcoxon_rank_sum, SampleSet, SkGroup,
    Speedup, SplitAcceptance, StatsError,
};

/// Environment variable consulted for the output root when the config omits it.
pub const OUTPUT_DIR_ENV: &str = "LIFETUNE_OUT_DIR";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error(transparent)]
    Dataset(#[from] OracleError),
    #[error("corrupt run record {path}: {reason}")]
    CorruptRecord { path: PathBuf, reason: String },
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{failed} of {total} grid cells failed; first error: {first}")]
    PartialFailure {
        failed: usize,
        total: usize,
        first: String,
    },
    #[error("records are unusable: {0}")]
    BadRecords(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl BenchError {
    /// Process exit code for the CLI: 1 usage/config, 2 dataset, 3 grid failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Dataset(_) => 2,
            BenchError::PartialFailure { .. } => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetPaths {
    pub descriptor: PathBuf,
    pub data: PathBuf,
}

/// Everything one experiment needs, loaded from a JSON file. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetPaths,
    pub strategies: Vec<StrategyId>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default)]
    pub params: PlannerParams,
    /// Trigger thresholds to sweep; used by the alpha-sweep command.
    #[serde(default)]
    pub alpha_sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// When set, every strategy sees the same workload permutation for a given
    /// run index, isolating the strategy variable; disable for fully
    /// independent per-strategy shuffles.
    #[serde(default = "default_true")]
    pub paired_orders: bool,
    #[serde(default)]
    pub preserved_set: PreservedSet,
    #[serde(default)]
    pub dsoga_pool: RetentionPool,
    #[serde(default = "default_coin")]
    pub dlisa_ii_trigger_probability: f64,
    #[serde(default)]
    pub scott_knott_split: SplitAcceptance,
}

fn default_runs() -> u32 {
    100
}
fn default_parallelism() -> usize {
    1
}
fn default_true() -> bool {
    true
}
fn default_coin() -> f64 {
    0.5
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| BenchError::Config {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        config.validate(path)?;
        Ok(config)
    }

    fn validate(&self, path: &Path) -> Result<(), BenchError> {
        let fail = |reason: String| {
            Err(BenchError::Config {
                path: path.to_path_buf(),
                reason,
            })
        };
        if self.strategies.is_empty() {
            return fail("no strategies listed".into());
        }
        if self.runs < 1 {
            return fail("runs must be at least 1".into());
        }
        if self.params.population_size < 2 || !self.params.population_size.is_multiple_of(2) {
            return fail("population_size must be even and at least 2".into());
        }
        if !(0.0..=1.0).contains(&self.params.alpha) {
            return fail("alpha must lie in [0, 1]".into());
        }
        if let Some(values) = &self.alpha_sweep {
            if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return fail("alpha_sweep values must lie in [0, 1]".into());
            }
        }
        if self.parallelism == 0 {
            return fail("parallelism must be at least 1".into());
        }
        Ok(())
    }

    pub fn strategy_options(&self) -> StrategyOptions {
        StrategyOptions {
            preserved: self.preserved_set,
            retention_pool: self.dsoga_pool,
            coin_trigger_probability: self.dlisa_ii_trigger_probability,
        }
    }

    /// Output root: explicit config value, then the environment, then `runs/`.
    pub fn resolve_output_dir(&self) -> PathBuf {
        if let Some(dir) = &self.output_dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        PathBuf::from("runs")
    }
}

/// Outcome counts of one grid execution.
#[derive(Debug, Clone, Serialize)]
pub struct GridOutcome {
    pub output_dir: PathBuf,
    pub executed: usize,
    pub skipped: usize,
}

/// Record file name for a grid cell; resume-by-skip keys on this.
pub fn record_file_name(strategy: StrategyId, alpha: f64, run: u32) -> String {
    format!("{}__alpha{:.2}__run{:04}.json", strategy, alpha, run)
}

/// Execute the full strategy x run grid and persist one record per cell.
///
/// Cells whose record file already exists are validated and skipped, so a
/// partially completed grid resumes where it stopped.
pub fn run_experiment(config: &ExperimentConfig) -> Result<GridOutcome, BenchError> {
    let (twin, _) = CyberTwin::load(&config.dataset.descriptor, &config.dataset.data)?;
    let output_dir = config.resolve_output_dir();
    let cells: Vec<(StrategyId, f64, u32)> = config
        .strategies
        .iter()
        .flat_map(|&s| (0..config.runs).map(move |r| (s, r)))
        .map(|(s, r)| (s, config.params.alpha, r))
        .collect();
    run_cells(config, &twin, &output_dir, &cells)
}

fn run_cells(
    config: &ExperimentConfig,
    twin: &CyberTwin,
    output_dir: &Path,
    cells: &[(StrategyId, f64, u32)],
) -> Result<GridOutcome, BenchError> {
    fs::create_dir_all(output_dir).map_err(|source| BenchError::Io {
        path: output_dir.to_path_buf(),
        source,
    })?;

    let executed = Mutex::new(0usize);
    let skipped = Mutex::new(0usize);
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());

    let work = |&(strategy_id, alpha, run): &(StrategyId, f64, u32)| {
        let path = output_dir.join(record_file_name(strategy_id, alpha, run));
        if path.exists() {
            match read_record(&path) {
                Ok(_) => {
                    *skipped.lock().unwrap() += 1;
                    return;
                }
                Err(e) => {
                    failures.lock().unwrap().push(e.to_string());
                    return;
                }
            }
        }
        match execute_cell(config, twin, strategy_id, alpha, run) {
            Ok(record) => match write_record(&path, &record) {
                Ok(()) => *executed.lock().unwrap() += 1,
                Err(e) => failures.lock().unwrap().push(e.to_string()),
            },
            Err(e) => failures.lock().unwrap().push(e),
        }
    };

    if config.parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallelism)
            .build()
            .map_err(|e| BenchError::BadRecords(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            cells.par_iter().for_each(work);
        });
    } else {
        cells.iter().for_each(work);
    }

    let mut failures = failures.into_inner().unwrap();
    if !failures.is_empty() {
        failures.sort();
        return Err(BenchError::PartialFailure {
            failed: failures.len(),
            total: cells.len(),
            first: failures[0].clone(),
        });
    }
    Ok(GridOutcome {
        output_dir: output_dir.to_path_buf(),
        executed: executed.into_inner().unwrap(),
        skipped: skipped.into_inner().unwrap(),
    })
}

fn execute_cell(
    config: &ExperimentConfig,
    twin: &CyberTwin,
    strategy_id: StrategyId,
    alpha: f64,
    run: u32,
) -> Result<RunRecord, String> {
    let mut params = config.params.clone();
    params.alpha = alpha;
    // Paired mode shares the seed (and thus the shuffle) across strategies for
    // a run index; unpaired mode folds the strategy and alpha into the stream.
    let stream = if config.paired_orders {
        u64::from(run)
    } else {
        let tag = strategy_tag(strategy_id) ^ (alpha.to_bits().rotate_left(17));
        u64::from(run) ^ tag
    };
    let run_seed = derive_run_seed(params.master_seed, stream);
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut order: Vec<WorkloadId> = twin.workloads().to_vec();
    order.shuffle(&mut rng);
    let strategy = make_strategy(strategy_id, config.strategy_options());
    Ok(lifelong_run(
        twin,
        &order,
        &params,
        strategy.as_ref(),
        &mut rng,
        run,
        run_seed,
    ))
}

fn strategy_tag(id: StrategyId) -> u64 {
    // stable per-strategy stream offset for unpaired mode
    (StrategyId::ALL.iter().position(|s| *s == id).unwrap() as u64 + 1) << 32
}

pub fn write_record(path: &Path, record: &RunRecord) -> Result<(), BenchError> {
    let json = serde_json::to_string_pretty(record).expect("run records always serialize");
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, &json).map_err(|source| BenchError::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_record(path: &Path) -> Result<RunRecord, BenchError> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| BenchError::CorruptRecord {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Load every `*.json` run record under `dir`, sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let entries = fs::read_dir(dir).map_err(|source| BenchError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(BenchError::BadRecords(format!(
            "no run records found in {}",
            dir.display()
        )));
    }
    paths.iter().map(|p| read_record(p)).collect()
}

type FinalsByGroup = BTreeMap<(WorkloadId, String), Vec<f64>>;

/// Final performances grouped per (workload, strategy label), in first-seen
/// workload order of the records.
fn group_finals(records: &[RunRecord]) -> (Vec<WorkloadId>, FinalsByGroup) {
    let mut workloads: Vec<WorkloadId> = Vec::new();
    let mut groups: BTreeMap<(WorkloadId, String), Vec<f64>> = BTreeMap::new();
    for record in records {
        for episode in &record.episodes {
            if !workloads.contains(&episode.workload) {
                workloads.push(episode.workload.clone());
            }
            groups
                .entry((episode.workload.clone(), record.strategy.clone()))
                .or_default()
                .push(episode.final_performance);
        }
    }
    workloads.sort();
    (workloads, groups)
}

fn strategies_in(records: &[RunRecord]) -> Vec<String> {
    let mut names: Vec<String> = records
        .iter()
        .map(|r| r.strategy.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    names.sort();
    names
}

fn shared_objective(records: &[RunRecord]) -> Result<PerformanceObjective, BenchError> {
    let first = records
        .first()
        .ok_or_else(|| BenchError::BadRecords("no records".into()))?;
    for r in records {
        if r.objective != first.objective {
            return Err(BenchError::BadRecords(
                "records mix different objectives".into(),
            ));
        }
    }
    Ok(first.objective.clone())
}

/// One row of the effectiveness table.
#[derive(Debug, Clone, Serialize)]
pub struct Rq1Cell {
    pub workload: WorkloadId,
    pub strategy: String,
    pub mean: f64,
    pub std: f64,
    pub rank: u32,
    pub best_mean: bool,
}

/// Mean/std and Scott-Knott rank per (workload, strategy), plus rank-1 tallies.
#[derive(Debug, Clone, Serialize)]
pub struct Rq1Report {
    pub cells: Vec<Rq1Cell>,
    /// Number of workloads on which each strategy holds rank 1.
    pub rank_one_counts: BTreeMap<String, u32>,
}

pub fn report_rq1(
    records: &[RunRecord],
    acceptance: SplitAcceptance,
) -> Result<Rq1Report, BenchError> {
    let objective = shared_objective(records)?;
    let (workloads, groups) = group_finals(records);
    let strategies = strategies_in(records);
    let mut cells = Vec::new();
    let mut rank_one_counts: BTreeMap<String, u32> =
        strategies.iter().map(|s| (s.clone(), 0)).collect();
    for workload in &workloads {
        let samples: Vec<SampleSet> = strategies
            .iter()
            .filter_map(|s| {
                groups
                    .get(&(workload.clone(), s.clone()))
                    .map(|values| SampleSet::new(s.clone(), values.clone()))
            })
            .collect();
        if samples.is_empty() {
            continue;
        }
        let groups_ranked = scott_knott(&samples, &objective, acceptance)?;
        let rank_of = |label: &str| -> u32 {
            groups_ranked
                .iter()
                .find(|g| g.labels.iter().any(|l| l == label))
                .map(|g| g.rank)
                .unwrap_or(0)
        };
        let best_mean = samples
            .iter()
            .map(|s| s.mean())
            .reduce(|best, m| {
                if objective.is_improvement(m, best) {
                    m
                } else {
                    best
                }
            })
            .expect("non-empty samples");
        for sample in &samples {
            let summary = summarize(&sample.values);
            let rank = rank_of(&sample.label);
            if rank == 1 {
                *rank_one_counts.get_mut(&sample.label).unwrap() += 1;
            }
            cells.push(Rq1Cell {
                workload: workload.clone(),
                strategy: sample.label.clone(),
                mean: summary.mean,
                std: summary.std,
                rank,
                best_mean: summary.mean == best_mean,
            });
        }
    }
    Ok(Rq1Report {
        cells,
        rank_one_counts,
    })
}

/// Speedup cells of one counterpart strategy against the reference.
#[derive(Debug, Clone, Serialize)]
pub struct Rq2Row {
    pub counterpart: String,
    pub per_workload: Vec<(WorkloadId, Speedup)>,
    pub faster: u32,
    pub even: u32,
    pub slower: u32,
    pub not_reached: u32,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Rq2Report {
    pub reference: String,
    pub rows: Vec<Rq2Row>,
}

/// Speedup of the reference strategy (the distilled one by default) over each
/// counterpart, per workload, with the paper-style tally columns.
pub fn report_rq2(records: &[RunRecord], reference: &str) -> Result<Rq2Report, BenchError> {
    let objective = shared_objective(records)?;
    let budget = records[0].params.budget;
    if records.iter().any(|r| r.params.budget != budget) {
        return Err(BenchError::BadRecords(
            "records mix different measurement budgets".into(),
        ));
    }
    let strategies = strategies_in(records);
    if !strategies.iter().any(|s| s == reference) {
        return Err(BenchError::BadRecords(format!(
            "reference strategy '{reference}' not present in the records"
        )));
    }
    // trajectories and penalty fallbacks per (workload, strategy)
    let mut trajectories: BTreeMap<(WorkloadId, String), Vec<Vec<crate::core::TrajectoryPoint>>> =
        BTreeMap::new();
    let mut penalties: BTreeMap<WorkloadId, f64> = BTreeMap::new();
    let mut workloads: Vec<WorkloadId> = Vec::new();
    for record in records {
        for episode in &record.episodes {
            if !workloads.contains(&episode.workload) {
                workloads.push(episode.workload.clone());
            }
            penalties.insert(episode.workload.clone(), episode.penalty);
            trajectories
                .entry((episode.workload.clone(), record.strategy.clone()))
                .or_default()
                .push(episode.trajectory.clone());
        }
    }
    workloads.sort();
    let mut rows = Vec::new();
    for counterpart in strategies.iter().filter(|s| *s != reference) {
        let mut per_workload = Vec::new();
        let mut faster = 0;
        let mut even = 0;
        let mut slower = 0;
        let mut not_reached = 0;
        let mut ratios: Vec<f64> = Vec::new();
        for workload in &workloads {
            let base = trajectories
                .get(&(workload.clone(), counterpart.clone()))
                .ok_or_else(|| {
                    BenchError::BadRecords(format!(
                        "no trajectories for {counterpart} on {workload}"
                    ))
                })?;
            let cand = trajectories
                .get(&(workload.clone(), reference.to_string()))
                .ok_or_else(|| {
                    BenchError::BadRecords(format!("no trajectories for {reference} on {workload}"))
                })?;
            let fallback = penalties[workload];
            let s = speedup(base, cand, &objective, budget, fallback, fallback)?;
            match s {
                Speedup::Ratio(r) => {
                    ratios.push(r);
                    if r > 1.0 {
                        faster += 1;
                    } else if r == 1.0 {
                        even += 1;
                    } else {
                        slower += 1;
                    }
                }
                Speedup::NotReached => not_reached += 1,
            }
            per_workload.push((workload.clone(), s));
        }
        rows.push(Rq2Row {
            counterpart: counterpart.clone(),
            per_workload,
            faster,
            even,
            slower,
            not_reached,
            min_ratio: ratios.iter().copied().reduce(f64::min),
            max_ratio: ratios.iter().copied().reduce(f64::max),
        });
    }
    Ok(Rq2Report {
        reference: reference.to_string(),
        rows,
    })
}

/// Outcome of one pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairwiseOutcome {
    Better,
    Similar,
    Worse,
}

impl PairwiseOutcome {
    pub fn symbol(&self) -> &'static str {
        match self {
            PairwiseOutcome::Better => "+",
            PairwiseOutcome::Similar => "=",
            PairwiseOutcome::Worse => "-",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rq3Cell {
    pub workload: WorkloadId,
    pub variant: String,
    pub p_value: f64,
    pub effect: f64,
    pub outcome: PairwiseOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct Rq3Report {
    pub reference: String,
    pub cells: Vec<Rq3Cell>,
    /// (better, similar, worse) tallies per variant.
    pub tallies: BTreeMap<String, (u32, u32, u32)>,
}

/// Wilcoxon + A12 classification of the reference strategy against each other
/// strategy in the records, per workload: significantly better, similar, or
/// worse (p < 0.05 and a non-trivial effect).
pub fn report_rq3(records: &[RunRecord], reference: &str) -> Result<Rq3Report, BenchError> {
    let objective = shared_objective(records)?;
    let (workloads, groups) = group_finals(records);
    let strategies = strategies_in(records);
    if !strategies.iter().any(|s| s == reference) {
        return Err(BenchError::BadRecords(format!(
            "reference strategy '{reference}' not present in the records"
        )));
    }
    let mut cells = Vec::new();
    let mut tallies: BTreeMap<String, (u32, u32, u32)> = BTreeMap::new();
    for variant in strategies.iter().filter(|s| *s != reference) {
        let tally = tallies.entry(variant.clone()).or_insert((0, 0, 0));
        for workload in &workloads {
            let (Some(ref_values), Some(var_values)) = (
                groups.get(&(workload.clone(), reference.to_string())),
                groups.get(&(workload.clone(), variant.clone())),
            ) else {
                continue;
            };
            let p_value = wilcoxon_rank_sum(ref_values, var_values)?;
            let effect = a12(ref_values, var_values);
            let significant = p_value < 0.05 && a12_non_trivial(effect);
            let outcome = if !significant {
                PairwiseOutcome::Similar
            } else {
                // A12 > 0.5 means reference values tend larger; whether that is
                // better depends on the objective direction.
                let reference_larger_is_better =
                    objective.direction == crate::core::Direction::Maximize;
                if (effect >= 0.56) == reference_larger_is_better {
                    PairwiseOutcome::Better
                } else {
                    PairwiseOutcome::Worse
                }
            };
            match outcome {
                PairwiseOutcome::Better => tally.0 += 1,
                PairwiseOutcome::Similar => tally.1 += 1,
                PairwiseOutcome::Worse => tally.2 += 1,
            }
            cells.push(Rq3Cell {
                workload: workload.clone(),
                variant: variant.clone(),
                p_value,
                effect,
                outcome,
            });
        }
    }
    Ok(Rq3Report {
        reference: reference.to_string(),
        cells,
    tallies,
    })
}

/// One row of the alpha sweep: the Scott-Knott rank of a sweep value on one
/// workload case.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub workload: WorkloadId,
    pub rank: u32,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
}

/// Run the distilled strategy once per sweep value (sharing run seeds across
/// values) and rank the values per workload with Scott-Knott.
pub fn sweep_alpha(config: &ExperimentConfig, values: &[f64]) -> Result<SweepReport, BenchError> {
    let (twin, _) = CyberTwin::load(&config.dataset.descriptor, &config.dataset.data)?;
    let output_dir = config.resolve_output_dir();
    let cells: Vec<(StrategyId, f64, u32)> = values
        .iter()
        .flat_map(|&alpha| (0..config.runs).map(move |r| (StrategyId::Dlisa, alpha, r)))
        .collect();
    run_cells(config, &twin, &output_dir, &cells)?;

    // regroup per alpha: label samples by the sweep value
    let records = load_records(&output_dir)?;
    let objective = shared_objective(&records)?;
    let mut workloads: Vec<WorkloadId> = Vec::new();
    let mut groups: BTreeMap<(WorkloadId, String), Vec<f64>> = BTreeMap::new();
    for record in &records {
        if record.strategy != StrategyId::Dlisa.as_str() {
            continue;
        }
        let label = format!("{:.2}", record.params.alpha);
        for episode in &record.episodes {
            if !workloads.contains(&episode.workload) {
                workloads.push(episode.workload.clone());
            }
            groups
                .entry((episode.workload.clone(), label.clone()))
                .or_default()
                .push(episode.final_performance);
        }
    }
    workloads.sort();
    let labels: Vec<String> = values.iter().map(|v| format!("{v:.2}")).collect();
    let mut cells = Vec::new();
    for workload in &workloads {
        let samples: Vec<SampleSet> = labels
            .iter()
            .filter_map(|label| {
                groups
                    .get(&(workload.clone(), label.clone()))
                    .map(|v| SampleSet::new(label.clone(), v.clone()))
            })
            .collect();
        if samples.len() < 2 {
            continue;
        }
        let ranked = scott_knott(&samples, &objective, config.scott_knott_split)?;
        for (label, alpha) in labels.iter().zip(values) {
            let Some(sample) = samples.iter().find(|s| &s.label == label) else {
                continue;
            };
            let rank = rank_in(&ranked, label);
            let summary = summarize(&sample.values);
            cells.push(SweepCell {
                alpha: *alpha,
                workload: workload.clone(),
                rank,
                mean: summary.mean,
                std: summary.std,
            });
        }
    }
    Ok(SweepReport { cells })
}

fn rank_in(groups: &[SkGroup], label: &str) -> u32 {
    groups
        .iter()
        .find(|g| g.labels.iter().any(|l| l == label))
        .map(|g| g.rank)
        .unwrap_or(0)
}

/// Load and validate a dataset, returning the per-workload row counts.
pub fn validate_dataset(descriptor: &Path, data: &Path) -> Result<LoadSummary, BenchError> {
    let (_, summary) = CyberTwin::load(descriptor, data)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// renderers
// ---------------------------------------------------------------------------

pub fn rq1_to_csv(report: &Rq1Report) -> String {
    let mut out = String::from("workload,strategy,mean,std,rank,best_mean\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.workload, c.strategy, c.mean, c.std, c.rank, c.best_mean
        ));
    }
    out
}

pub fn rq1_to_markdown(report: &Rq1Report) -> String {
    let mut out = String::from("| Workload | Strategy | Mean (Std) | Rank |\n|---|---|---|---|\n");
    for c in &report.cells {
        let mark = if c.best_mean { " **best**" } else { "" };
        out.push_str(&format!(
            "| {} | {} | {:.4} ({:.4}){} | {} |\n",
            c.workload, c.strategy, c.mean, c.std, mark, c.rank
        ));
    }
    out.push_str("\nRank-1 counts: ");
    let summary: Vec<String> = report
        .rank_one_counts
        .iter()
        .map(|(s, n)| format!("{s}={n}"))
        .collect();
    out.push_str(&summary.join(", "));
    out.push('\n');
    out
}

pub fn rq2_to_csv(report: &Rq2Report) -> String {
    let mut out = String::from("counterpart,workload,speedup\n");
    for row in &report.rows {
        for (workload, s) in &row.per_workload {
            let cell = match s {
                Speedup::Ratio(r) => format!("{r}"),
                Speedup::NotReached => "N/A".to_string(),
            };
            out.push_str(&format!("{},{},{}\n", row.counterpart, workload, cell));
        }
    }
    out
}

pub fn rq2_to_markdown(report: &Rq2Report) -> String {
    let mut out = format!(
        "Speedup of `{}` per counterpart\n\n| Counterpart | s>1 | s=1 | 0<s<1 | N/A | Range |\n|---|---|---|---|---|---|\n",
        report.reference
    );
    for row in &report.rows {
        let range = match (row.min_ratio, row.max_ratio) {
            (Some(lo), Some(hi)) => format!("[{lo:.2}, {hi:.2}]"),
            _ => "-".to_string(),
        };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            row.counterpart, row.faster, row.even, row.slower, row.not_reached, range
        ));
    }
    out
}

pub fn rq3_to_csv(report: &Rq3Report) -> String {
    let mut out = String::from("variant,workload,p_value,a12,outcome\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.variant,
            c.workload,
            c.p_value,
            c.effect,
            c.outcome.symbol()
        ));
    }
    out
}

pub fn rq3_to_markdown(report: &Rq3Report) -> String {
    let mut out = format!(
        "`{}` against each variant (per-workload +/=/-)\n\n| Variant | + | = | - |\n|---|---|---|---|\n",
        report.reference
    );
    for (variant, (better, similar, worse)) in &report.tallies {
        out.push_str(&format!(
            "| {variant} | {better} | {similar} | {worse} |\n"
        ));
    }
    out
}

pub fn sweep_to_csv(report: &SweepReport) -> String {
    let mut out = String::from("alpha,workload,rank,mean,std\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.alpha, c.workload, c.rank, c.mean, c.std
        ));
    }
    out
}
