//! Alternative seeding strategies sharing the same episode engine: a
//! restart-from-scratch baseline, two carry-over policies, and two ablations
//! of the distilled strategy (uniform seeding, coin-flip trigger).

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::Configuration;
use crate::distill::{
    average_similarity, local_stage, quality_weights, weighted_sample, DlisaSeeding, PreservedSet,
};
use crate::planner::{
    random_init, SeedMember, SeedOrigin, SeededPopulation, SeedingContext, SeedingStrategy,
};

/// The strategies the harness can run, selected by name in experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyId {
    Dlisa,
    Femosaa,
    SeedEa,
    DSoga,
    DlisaI,
    DlisaIi,
}

impl StrategyId {
    pub const ALL: [StrategyId; 6] = [
        StrategyId::Dlisa,
        StrategyId::Femosaa,
        StrategyId::SeedEa,
        StrategyId::DSoga,
        StrategyId::DlisaI,
        StrategyId::DlisaIi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyId::Dlisa => "dlisa",
            StrategyId::Femosaa => "femosaa",
            StrategyId::SeedEa => "seed_ea",
            StrategyId::DSoga => "d_soga",
            StrategyId::DlisaI => "dlisa_i",
            StrategyId::DlisaIi => "dlisa_ii",
        }
    }
}

impl std::fmt::Display for StrategyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown strategy '{0}'")]
pub struct UnknownStrategy(pub String);

impl std::str::FromStr for StrategyId {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyId::ALL
            .iter()
            .find(|id| id.as_str() == s)
            .copied()
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

/// Which past configurations the mixed-retention strategy may carry over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetentionPool {
    /// The previous episode's elite population.
    #[default]
    Elite,
    /// Every valid configuration evaluated in the previous episode.
    EvaluatedValid,
}

/// Knobs for constructing strategies from an experiment config.
#[derive(Debug, Clone, Copy)]
pub struct StrategyOptions {
    pub preserved: PreservedSet,
    pub retention_pool: RetentionPool,
    pub coin_trigger_probability: f64,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        Self {
            preserved: PreservedSet::default(),
            retention_pool: RetentionPool::default(),
            coin_trigger_probability: 0.5,
        }
    }
}

/// Instantiate a strategy by id.
pub fn make_strategy(id: StrategyId, options: StrategyOptions) -> Box<dyn SeedingStrategy> {
    match id {
        StrategyId::Dlisa => Box::new(DlisaSeeding {
            preserved: options.preserved,
        }),
        StrategyId::Femosaa => Box::new(FemosaaSeeding),
        StrategyId::SeedEa => Box::new(SeedEaSeeding),
        StrategyId::DSoga => Box::new(DsogaSeeding {
            pool: options.retention_pool,
        }),
        StrategyId::DlisaI => Box::new(DlisaUniformSeeding {
            preserved: options.preserved,
        }),
        StrategyId::DlisaIi => Box::new(DlisaCoinSeeding {
            preserved: options.preserved,
            trigger_probability: options.coin_trigger_probability,
        }),
    }
}

/// Stationary adaptation: every workload change restarts the search from
/// randomly initialized configurations, ignoring the knowledge base.
#[derive(Debug, Clone, Default)]
pub struct FemosaaSeeding;

impl SeedingStrategy for FemosaaSeeding {
    fn name(&self) -> &'static str {
        "femosaa"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        let members = random_init(
            ctx.twin,
            ctx.workload,
            ctx.params.population_size,
            &BTreeSet::new(),
            rng,
        )
        .into_iter()
        .map(|config| SeedMember {
            config,
            origin: SeedOrigin::Random,
        })
        .collect();
        SeededPopulation {
            members,
            similarity: None,
        }
    }
}

/// Dynamic adaptation that always seeds everything preserved from the most
/// recent past workload: the previous episode's elite, verbatim, padded with
/// random configurations when the elite is short.
#[derive(Debug, Clone, Default)]
pub struct SeedEaSeeding;

impl SeedingStrategy for SeedEaSeeding {
    fn name(&self) -> &'static str {
        "seed_ea"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        let mut members: Vec<SeedMember> = match ctx.kb.last() {
            Some(previous) => previous
                .elite
                .iter()
                .take(ctx.params.population_size)
                .map(|config| SeedMember {
                    config: config.clone(),
                    origin: SeedOrigin::Seeded,
                })
                .collect(),
            None => Vec::new(),
        };
        crate::distill::pad_with_random(
            ctx.twin,
            ctx.workload,
            ctx.params.population_size,
            &mut members,
            rng,
        );
        SeededPopulation {
            members,
            similarity: None,
        }
    }
}

/// Mixed adaptation: retain 80% randomly chosen configurations from the most
/// recent past workload and top up with 20% fresh random ones.
#[derive(Debug, Clone, Default)]
pub struct DsogaSeeding {
    pub pool: RetentionPool,
}

impl SeedingStrategy for DsogaSeeding {
    fn name(&self) -> &'static str {
        "d_soga"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        let n = ctx.params.population_size;
        let mut members: Vec<SeedMember> = Vec::with_capacity(n);
        if let Some(previous) = ctx.kb.last() {
            let pool: Vec<Configuration> = match self.pool {
                RetentionPool::Elite => previous.elite.clone(),
                RetentionPool::EvaluatedValid => previous
                    .valid_measurements()
                    .map(|m| m.config.clone())
                    .collect(),
            };
            let retain = ((n as f64) * 0.8).round() as usize;
            let take = retain.min(pool.len());
            members.extend(
                index::sample(rng, pool.len(), take)
                    .iter()
                    .map(|i| SeedMember {
                        config: pool[i].clone(),
                        origin: SeedOrigin::Seeded,
                    }),
            );
        }
        crate::distill::pad_with_random(ctx.twin, ctx.workload, n, &mut members, rng);
        SeededPopulation {
            members,
            similarity: None,
        }
    }
}

/// Ablation of the distilled strategy: the similarity trigger is unchanged,
/// but triggered seeding samples the local-stage pool uniformly instead of
/// weight-proportionally.
#[derive(Debug, Clone, Default)]
pub struct DlisaUniformSeeding {
    pub preserved: PreservedSet,
}

impl SeedingStrategy for DlisaUniformSeeding {
    fn name(&self) -> &'static str {
        "dlisa_i"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        let n = ctx.params.population_size;
        let report = average_similarity(ctx.kb, ctx.params.alpha, rng);
        let mut members = Vec::with_capacity(n);
        if report.triggered {
            let pool = local_stage(ctx.kb, n, ctx.twin.space().objective());
            let take = n.min(pool.len());
            members.extend(index::sample(rng, pool.len(), take).iter().map(|i| {
                SeedMember {
                    config: pool[i].clone(),
                    origin: SeedOrigin::Seeded,
                }
            }));
        }
        crate::distill::pad_with_random(ctx.twin, ctx.workload, n, &mut members, rng);
        SeededPopulation {
            members,
            similarity: Some(report),
        }
    }
}

/// Ablation of the distilled strategy: the ranked similarity analysis is
/// disabled and seeding triggers on a coin flip instead (never on an empty
/// knowledge base); when triggered, the full weighted seeding applies.
#[derive(Debug, Clone)]
pub struct DlisaCoinSeeding {
    pub preserved: PreservedSet,
    pub trigger_probability: f64,
}

impl Default for DlisaCoinSeeding {
    fn default() -> Self {
        Self {
            preserved: PreservedSet::default(),
            trigger_probability: 0.5,
        }
    }
}

impl SeedingStrategy for DlisaCoinSeeding {
    fn name(&self) -> &'static str {
        "dlisa_ii"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        let n = ctx.params.population_size;
        let triggered = !ctx.kb.is_empty() && rng.random::<f64>() < self.trigger_probability;
        let mut members = Vec::with_capacity(n);
        if triggered {
            let pool = local_stage(ctx.kb, n, ctx.twin.space().objective());
            let candidates =
                quality_weights(&pool, ctx.kb, n, ctx.twin.space().objective(), self.preserved);
            members.extend(weighted_sample(&candidates, n, rng).into_iter().map(
                |config| SeedMember {
                    config,
                    origin: SeedOrigin::Seeded,
                },
            ));
        }
        crate::distill::pad_with_random(ctx.twin, ctx.workload, n, &mut members, rng);
        SeededPopulation {
            members,
            similarity: None,
        }
    }
}
