//! Budget-constrained lifelong configuration tuning for systems whose
//! workload changes over time.
//!
//! When the workload of a configurable system shifts, the best configuration
//! usually shifts with it. This crate plans the next configuration with an
//! elitist genetic algorithm over a dataset-backed measurement table (a
//! "Cyber-Twin"), under a hard per-workload measurement budget, and reuses
//! what earlier workloads taught it: a ranked workload similarity analysis
//! decides *when* seeding past configurations is likely to help, and a
//! quality-weighted selection decides *what* to seed. Restart-from-scratch
//! and carry-over baselines, two ablations, nonparametric statistics and an
//! experiment harness round out the toolkit.
//!
//! ## Modules
//!
//! - [`core`] — configuration spaces, configurations, objectives, episodes,
//!   the knowledge base.
//! - [`oracle`] — dataset loading, the Cyber-Twin lookup table, penalties for
//!   off-table configurations, budget metering.
//! - [`distill`] — workload similarity (pairwise ranking loss), local-stage
//!   filtering, quality weights, weighted seed sampling.
//! - [`planner`] — GA operators, episode evolution, the lifelong loop, run
//!   records.
//! - [`baselines`] — alternative seeding strategies and the strategy registry.
//! - [`stats`] — Wilcoxon rank-sum, A12 effect size, Scott-Knott ranking,
//!   budget-axis speedup, summaries.
//! - [`mod@bench`] — experiment grids, record persistence, report tables.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── quickstart.rs           # one lifelong run on a synthetic twin
//! ├── dataset_loading.rs      # descriptor + CSV loading and validation
//! ├── workload_similarity.rs  # ranking loss, pair scores, the trigger
//! ├── weighted_seeding.rs     # local stage, quality weights, sampling
//! ├── strategy_faceoff.rs     # all six strategies compared statistically
//! ├── statistics.rs           # the stats toolkit on constructed data
//! ├── full_experiment.rs      # grid -> records -> report tables
//! └── alpha_sweep.rs          # sensitivity of the trigger threshold
//! ```
//!
//! ```bash
//! cargo run -p lifetune --example quickstart
//! cargo run -p lifetune --example full_experiment
//! ```
//!
//! The `lifetune` binary wraps the harness for shell use:
//!
//! ```bash
//! lifetune validate-dataset --descriptor demo.json --data demo.csv
//! lifetune run experiment.json
//! lifetune report --rq1 runs/
//! lifetune sweep-alpha experiment.json
//! ```
//!
//! ## A minimal run
//!
//! ```
//! use lifetune::core::{ConfigSpace, Configuration, Direction, OptionDef,
//!                      PerformanceObjective, WorkloadId};
//! use lifetune::distill::DlisaSeeding;
//! use lifetune::oracle::CyberTwin;
//! use lifetune::planner::{lifelong_run, PlannerParams};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let space = ConfigSpace::new(
//!     vec![OptionDef::integer("threads", [1, 2, 4, 8])],
//!     PerformanceObjective::new(Direction::Minimize, "runtime_s"),
//! )?;
//! let workloads = vec![WorkloadId::new("w1"), WorkloadId::new("w2")];
//! let mut rows = Vec::new();
//! for w in &workloads {
//!     for i in 0..4u16 {
//!         let config = Configuration::from_indices(&space, vec![i])?;
//!         rows.push((config, w.clone(), 8.0 - i as f64 * 1.5));
//!     }
//! }
//! let twin = CyberTwin::from_rows("tiny", space, workloads.clone(), rows)?;
//!
//! let params = PlannerParams { budget: 10, master_seed: 1, ..Default::default() };
//! let mut rng = ChaCha8Rng::seed_from_u64(1);
//! let record = lifelong_run(&twin, &workloads, &params,
//!                           &DlisaSeeding::default(), &mut rng, 0, 1);
//! assert_eq!(record.episodes.len(), 2);
//! assert_eq!(record.episodes[0].best_performance, Some(3.5));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod baselines;
pub mod bench;
pub mod core;
pub mod distill;
pub mod oracle;
pub mod planner;
pub mod stats;
