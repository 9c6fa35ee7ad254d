//! Evolutionary planning and the lifelong loop.
//!
//! Each workload gets one planning episode: an elitist genetic algorithm over
//! the configuration space, started from a population produced by a pluggable
//! [`SeedingStrategy`] and driven through the oracle's budget meter. Episodes
//! append to the knowledge base so later workloads can reuse what was learned.
//!
//! RNG discipline: one master seed yields one per-run seed (see
//! [`derive_run_seed`]); every stochastic choice of a run (workload shuffle,
//! seeding draws, tournament, crossover, mutation) draws from that single
//! stream in a fixed order, which makes run records bit-reproducible.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core::{
    Configuration, Episode, KnowledgeBase, OptionKind, OptionValue, TrajectoryPoint, WorkloadId,
};
use crate::distill::SimilarityReport;
use crate::oracle::{BudgetMeter, CyberTwin};

/// Search parameters shared by every strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerParams {
    #[serde(default = "default_population")]
    pub population_size: usize,
    #[serde(default = "default_crossover")]
    pub crossover_rate: f64,
    #[serde(default = "default_mutation")]
    pub mutation_rate: f64,
    /// R_t: distinct in-table measurements allowed per episode.
    #[serde(default = "default_budget")]
    pub budget: u32,
    /// Seeding trigger threshold on the average workload similarity.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub master_seed: u64,
    /// Safety valve for sparse tables where offspring rarely land on valid
    /// rows and the budget would otherwise never be spent.
    #[serde(default = "default_max_generations")]
    pub max_generations: u32,
    /// Sensitivity toggle: charge off-table (invalid) queries to the budget.
    #[serde(default)]
    pub invalid_consumes_budget: bool,
}

fn default_population() -> usize {
    20
}
fn default_crossover() -> f64 {
    0.9
}
fn default_mutation() -> f64 {
    0.1
}
fn default_budget() -> u32 {
    80
}
fn default_alpha() -> f64 {
    0.3
}
fn default_max_generations() -> u32 {
    1000
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            population_size: default_population(),
            crossover_rate: default_crossover(),
            mutation_rate: default_mutation(),
            budget: default_budget(),
            alpha: default_alpha(),
            master_seed: 0,
            max_generations: default_max_generations(),
            invalid_consumes_budget: false,
        }
    }
}

/// Where a member of an initial population came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedOrigin {
    Seeded,
    Random,
}

#[derive(Debug, Clone)]
pub struct SeedMember {
    pub config: Configuration,
    pub origin: SeedOrigin,
}

/// Initial population for one episode, with provenance and the similarity
/// analysis that produced it (when the strategy ran one).
#[derive(Debug, Clone)]
pub struct SeededPopulation {
    pub members: Vec<SeedMember>,
    pub similarity: Option<SimilarityReport>,
}

/// Inputs available to a seeding strategy when a new workload arrives.
pub struct SeedingContext<'a> {
    pub twin: &'a CyberTwin,
    pub workload: &'a WorkloadId,
    pub kb: &'a KnowledgeBase,
    pub params: &'a PlannerParams,
}

/// Produces the initial population of each episode; implementations decide
/// whether and how to reuse the knowledge base.
pub trait SeedingStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation;
}

/// `count` distinct configurations drawn uniformly without replacement from
/// the twin's valid set for `workload`, skipping `exclude`. Shrinks with a
/// warning when fewer are available.
pub fn random_init(
    twin: &CyberTwin,
    workload: &WorkloadId,
    count: usize,
    exclude: &BTreeSet<Configuration>,
    rng: &mut ChaCha8Rng,
) -> Vec<Configuration> {
    let eligible: Vec<&Configuration> = twin
        .valid_configs(workload)
        .filter(|c| !exclude.contains(*c))
        .collect();
    let take = count.min(eligible.len());
    if take < count {
        eprintln!(
            "warning: workload '{workload}' has only {} distinct configurations left; \
             requested {count}",
            eligible.len()
        );
    }
    index::sample(rng, eligible.len(), take)
        .iter()
        .map(|i| eligible[i].clone())
        .collect()
}

/// Binary tournament: draw two members uniformly with replacement, return the
/// better; exact fitness ties break by a fair coin.
pub fn binary_tournament<'a>(
    population: &'a [(Configuration, f64)],
    twin: &CyberTwin,
    rng: &mut ChaCha8Rng,
) -> &'a Configuration {
    let a = &population[rng.random_range(0..population.len())];
    let b = &population[rng.random_range(0..population.len())];
    use crate::core::Comparison::*;
    match twin.space().objective().compare_unchecked(a.1, b.1) {
        Better => &a.0,
        Worse => &b.0,
        Equal => {
            if rng.random::<bool>() {
                &a.0
            } else {
                &b.0
            }
        }
    }
}

/// Single-point crossover: with probability `rate`, cut at a uniform interior
/// point and swap tails; otherwise copy the parents. One-option spaces have no
/// interior cut point, so crossover is the identity there.
pub fn single_point_crossover(
    a: &Configuration,
    b: &Configuration,
    rate: f64,
    rng: &mut ChaCha8Rng,
) -> (Configuration, Configuration) {
    let n = a.indices().len();
    if n < 2 || rng.random::<f64>() >= rate {
        return (a.clone(), b.clone());
    }
    let cut = rng.random_range(1..n);
    let mut child1 = a.clone();
    let mut child2 = b.clone();
    child1.indices_mut()[cut..].copy_from_slice(&b.indices()[cut..]);
    child2.indices_mut()[cut..].copy_from_slice(&a.indices()[cut..]);
    (child1, child2)
}

/// Boundary mutation: independently per option with probability `rate`,
/// integer options jump to their domain minimum or maximum (fair coin);
/// boolean and enumerated options are re-drawn uniformly from their domain,
/// since unordered domains have no boundary.
pub fn boundary_mutation(
    twin: &CyberTwin,
    config: &Configuration,
    rate: f64,
    rng: &mut ChaCha8Rng,
) -> Configuration {
    let mut mutated = config.clone();
    for (i, option) in twin.space().options().iter().enumerate() {
        if rng.random::<f64>() >= rate {
            continue;
        }
        let domain_len = option.domain.len() as u16;
        mutated.indices_mut()[i] = match option.kind {
            OptionKind::Integer => {
                if rng.random::<bool>() {
                    domain_len - 1
                } else {
                    0
                }
            }
            OptionKind::Boolean | OptionKind::Enumerated => rng.random_range(0..domain_len),
        };
    }
    mutated
}

/// Run one elitist GA episode under a single workload.
///
/// Seeds are measured first; each generation then breeds `N` offspring via
/// tournament selection, crossover and mutation, measures them through the
/// budget meter (duplicates free, off-table penalized), merges parents and
/// offspring and keeps the best `N`. The episode stops when the budget is
/// exhausted, every valid configuration of the workload has been measured, or
/// the generation cap is hit; a budget signal mid-generation finishes
/// bookkeeping for what was already measured and stops cleanly.
pub fn evolve_episode(
    twin: &CyberTwin,
    workload: &WorkloadId,
    seeds: &[Configuration],
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Episode {
    let objective = twin.space().objective().clone();
    let mut meter = if params.invalid_consumes_budget {
        BudgetMeter::charging_invalid(params.budget)
    } else {
        BudgetMeter::new(params.budget)
    };
    let mut trajectory: Vec<TrajectoryPoint> = Vec::new();
    let mut best_so_far: Option<f64> = None;

    let record = |m: &crate::core::Measurement,
                      meter: &BudgetMeter,
                      best_so_far: &mut Option<f64>,
                      trajectory: &mut Vec<TrajectoryPoint>| {
        if !m.valid {
            return;
        }
        let improved = best_so_far.is_none_or(|b| objective.is_improvement(m.performance, b));
        if improved {
            *best_so_far = Some(m.performance);
        }
        // one point per consumed budget unit
        if trajectory.last().map(|p| p.measurements) != Some(meter.consumed()) {
            trajectory.push(TrajectoryPoint {
                measurements: meter.consumed(),
                best: best_so_far.unwrap(),
            });
        }
    };

    let mut population: Vec<(Configuration, f64)> = Vec::with_capacity(params.population_size);
    let mut budget_hit = false;
    for config in seeds {
        match twin.measure(workload, config, &mut meter) {
            Ok(m) => {
                record(&m, &meter, &mut best_so_far, &mut trajectory);
                if !population.iter().any(|(c, _)| c == config) {
                    population.push((config.clone(), m.performance));
                }
            }
            Err(_) => {
                budget_hit = true;
                break;
            }
        }
    }

    let valid_universe = twin.valid_count(workload);
    let mut generations = 0;
    while !budget_hit && generations < params.max_generations {
        if meter.exhausted() {
            break;
        }
        let measured_valid = meter.cache().values().filter(|m| m.valid).count();
        if measured_valid >= valid_universe {
            break;
        }
        if population.is_empty() {
            break;
        }
        generations += 1;

        let mut offspring = Vec::with_capacity(params.population_size);
        while offspring.len() < params.population_size {
            let p1 = binary_tournament(&population, twin, rng).clone();
            let p2 = binary_tournament(&population, twin, rng).clone();
            let (c1, c2) = single_point_crossover(&p1, &p2, params.crossover_rate, rng);
            offspring.push(boundary_mutation(twin, &c1, params.mutation_rate, rng));
            if offspring.len() < params.population_size {
                offspring.push(boundary_mutation(twin, &c2, params.mutation_rate, rng));
            }
        }

        let mut pool = population.clone();
        for child in &offspring {
            match twin.measure(workload, child, &mut meter) {
                Ok(m) => {
                    record(&m, &meter, &mut best_so_far, &mut trajectory);
                    if !pool.iter().any(|(c, _)| c == child) {
                        pool.push((child.clone(), m.performance));
                    }
                }
                Err(_) => {
                    budget_hit = true;
                    break;
                }
            }
        }

        pool.sort_by(|(ca, pa), (cb, pb)| {
            objective
                .rank_key(*pa)
                .partial_cmp(&objective.rank_key(*pb))
                .expect("finite performance")
                .then_with(|| ca.cmp(cb))
        });
        pool.truncate(params.population_size);
        population = pool;
    }

    finalize_episode(twin, workload, meter, trajectory, params.population_size)
}

fn finalize_episode(
    twin: &CyberTwin,
    workload: &WorkloadId,
    meter: BudgetMeter,
    trajectory: Vec<TrajectoryPoint>,
    population_size: usize,
) -> Episode {
    let objective = twin.space().objective().clone();
    let evaluated = meter.into_cache();
    let mut valid: Vec<(Configuration, f64)> = evaluated
        .values()
        .filter(|m| m.valid)
        .map(|m| (m.config.clone(), m.performance))
        .collect();
    valid.sort_by(|(ca, pa), (cb, pb)| {
        objective
            .rank_key(*pa)
            .partial_cmp(&objective.rank_key(*pb))
            .expect("finite performance")
            .then_with(|| ca.cmp(cb))
    });
    let best = valid.first().map(|(c, _)| c.clone());
    let elite: Vec<Configuration> = valid
        .into_iter()
        .take(population_size)
        .map(|(c, _)| c)
        .collect();
    Episode {
        workload: workload.clone(),
        evaluated,
        elite,
        best,
        trajectory,
    }
}

/// One seed of an initial population as persisted in a run record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub values: Vec<OptionValue>,
    pub origin: SeedOrigin,
}

/// Per-episode slice of a run record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub workload: WorkloadId,
    pub similarity: Option<SimilarityReport>,
    pub seeds: Vec<SeedRecord>,
    pub best: Option<Vec<OptionValue>>,
    pub best_performance: Option<f64>,
    /// Best performance, or the workload penalty when nothing valid was
    /// measured; always present so reports stay pure functions of records.
    pub final_performance: f64,
    pub penalty: f64,
    pub measurements_used: u32,
    pub evaluated_count: u32,
    pub trajectory: Vec<TrajectoryPoint>,
}

/// Everything persisted about one lifelong run: one JSON document per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u32,
    pub strategy: String,
    pub system: String,
    pub objective: crate::core::PerformanceObjective,
    pub params: PlannerParams,
    pub run_seed: u64,
    pub workload_order: Vec<WorkloadId>,
    pub episodes: Vec<EpisodeRecord>,
}

/// Drive the lifelong loop: for each workload in order, seed an initial
/// population from the strategy, evolve one episode, fold it into the
/// knowledge base, and record the adapted best configuration.
pub fn lifelong_run(
    twin: &CyberTwin,
    workload_order: &[WorkloadId],
    params: &PlannerParams,
    strategy: &dyn SeedingStrategy,
    rng: &mut ChaCha8Rng,
    run_id: u32,
    run_seed: u64,
) -> RunRecord {
    let mut kb = KnowledgeBase::new();
    let mut episodes = Vec::with_capacity(workload_order.len());
    for workload in workload_order {
        let ctx = SeedingContext {
            twin,
            workload,
            kb: &kb,
            params,
        };
        let seeded = strategy.seed(&ctx, rng);
        let seed_configs: Vec<Configuration> =
            seeded.members.iter().map(|m| m.config.clone()).collect();
        let episode = evolve_episode(twin, workload, &seed_configs, params, rng);
        let penalty = twin
            .penalty(workload)
            .expect("workload exists in the twin");
        episodes.push(EpisodeRecord {
            workload: workload.clone(),
            similarity: seeded.similarity.clone(),
            seeds: seeded
                .members
                .iter()
                .map(|m| SeedRecord {
                    values: m.config.values(twin.space()),
                    origin: m.origin,
                })
                .collect(),
            best: episode.best.as_ref().map(|c| c.values(twin.space())),
            best_performance: episode.best_performance(),
            final_performance: episode.best_performance().unwrap_or(penalty),
            penalty,
            measurements_used: episode
                .trajectory
                .last()
                .map(|p| p.measurements)
                .unwrap_or(0),
            evaluated_count: episode.evaluated.len() as u32,
            trajectory: episode.trajectory.clone(),
        });
        kb.push(episode);
    }
    RunRecord {
        run_id,
        strategy: strategy.name().to_string(),
        system: twin.system().to_string(),
        objective: twin.space().objective().clone(),
        params: params.clone(),
        run_seed,
        workload_order: workload_order.to_vec(),
        episodes,
    }
}

/// Derive the per-run seed from the master seed and the run index
/// (splitmix-style), so runs are independent yet reproducible.
pub fn derive_run_seed(master_seed: u64, stream: u64) -> u64 {
    let mut z = master_seed
        .wrapping_add(splitmix64(stream))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
