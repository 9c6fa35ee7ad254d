//! Knowledge distillation: decide *when* to seed a new planning episode via
//! ranked workload similarity, and *what* to seed via two-stage quality
//! weighting over configurations preserved under past workloads.
//!
//! Similarity between two adjacent workloads is the fraction of their common
//! configurations whose relative performance order is preserved (one minus a
//! normalized pairwise ranking loss), which makes it scale-free. When the
//! average adjacent similarity clears the trigger threshold, candidates are
//! pooled from the best half of each past episode, weighted by how often and
//! how recently they were preserved, and sampled proportionally to weight.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core::{Configuration, Episode, KnowledgeBase, PerformanceObjective, WorkloadId};
use crate::oracle::CyberTwin;
use crate::planner::{
    random_init, PlannerParams, SeedMember, SeedOrigin, SeededPopulation, SeedingContext,
    SeedingStrategy,
};

/// Which past appearances count as "preserved" when computing quality weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreservedSet {
    /// Membership in an episode's best-half (top N/2 valid configurations).
    #[default]
    TopHalf,
    /// Membership in an episode's raw evaluated set.
    Evaluated,
}

/// Similarity of one adjacent workload pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSimilarity {
    pub earlier: WorkloadId,
    pub later: WorkloadId,
    pub score: f64,
    pub common_count: usize,
    /// Set when fewer than two common configurations left no ranking evidence
    /// and the score was drawn uniformly below the trigger threshold.
    pub fallback: bool,
}

/// Outcome of the ranked workload similarity analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub pairwise: Vec<PairSimilarity>,
    /// Mean pairwise score; absent with fewer than two past episodes.
    pub average: Option<f64>,
    pub triggered: bool,
}

/// A pooled candidate with its robustness, timeliness and quality weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCandidate {
    pub config: Configuration,
    /// O_c: number of past workloads in which the configuration was preserved.
    pub occurrences: u32,
    /// S_c: 1-based index of the latest such workload.
    pub latest: u32,
    pub robustness: f64,
    pub timeliness: f64,
    pub weight: f64,
}

/// Configurations evaluated in both episodes, with both performance values.
///
/// Invalid (penalized) entries participate: they carry a consistent
/// worst-rank signal. Pair order follows the first episode's canonical
/// configuration order.
pub fn common_configs(a: &Episode, b: &Episode) -> Vec<(Configuration, f64, f64)> {
    a.evaluated
        .iter()
        .filter_map(|(config, ma)| {
            b.evaluated
                .get(config)
                .map(|mb| (config.clone(), ma.performance, mb.performance))
        })
        .collect()
}

/// Number of misranked pairs between two performance vectors over the same
/// configurations: unordered pairs where exactly one side orders them strictly
/// upward, with ties evaluated literally through the XOR.
pub fn ranking_loss(pairs: &[(f64, f64)]) -> usize {
    let mut loss = 0;
    for j in 0..pairs.len() {
        for k in (j + 1)..pairs.len() {
            let (aj, bj) = pairs[j];
            let (ak, bk) = pairs[k];
            if (aj < ak) != (bj < bk) {
                loss += 1;
            }
        }
    }
    loss
}

/// Similarity of two episodes in [0, 1], plus whether the fallback fired.
///
/// With at least two common configurations the score is `1 - loss / C(n, 2)`.
/// A single common configuration yields no pairs, so it falls back like the
/// empty case: a uniform draw below `alpha`.
pub fn pair_similarity(
    a: &Episode,
    b: &Episode,
    alpha: f64,
    rng: &mut ChaCha8Rng,
) -> (f64, bool) {
    let commons = common_configs(a, b);
    pair_similarity_from_commons(&commons, alpha, rng)
}

fn pair_similarity_from_commons(
    commons: &[(Configuration, f64, f64)],
    alpha: f64,
    rng: &mut ChaCha8Rng,
) -> (f64, bool) {
    let n = commons.len();
    if n < 2 {
        let score = if alpha > 0.0 {
            rng.random_range(0.0..alpha)
        } else {
            0.0
        };
        return (score, true);
    }
    let pairs: Vec<(f64, f64)> = commons.iter().map(|(_, pa, pb)| (*pa, *pb)).collect();
    let loss = ranking_loss(&pairs);
    let n_pairs = n * (n - 1) / 2;
    (1.0 - loss as f64 / n_pairs as f64, false)
}

/// Ranked workload similarity over all adjacent episode pairs.
///
/// With no past episodes nothing triggers; with exactly one the trigger is on
/// unconditionally (the one-past-workload path: the best half of that episode
/// is seeded and the rest randomly initialized).
pub fn average_similarity(
    kb: &KnowledgeBase,
    alpha: f64,
    rng: &mut ChaCha8Rng,
) -> SimilarityReport {
    let episodes = kb.episodes();
    if episodes.is_empty() {
        return SimilarityReport {
            pairwise: Vec::new(),
            average: None,
            triggered: false,
        };
    }
    if episodes.len() == 1 {
        return SimilarityReport {
            pairwise: Vec::new(),
            average: None,
            triggered: true,
        };
    }
    let mut pairwise = Vec::with_capacity(episodes.len() - 1);
    let mut sum = 0.0;
    for window in episodes.windows(2) {
        let commons = common_configs(&window[0], &window[1]);
        let common_count = commons.len();
        let (score, fallback) = pair_similarity_from_commons(&commons, alpha, rng);
        sum += score;
        pairwise.push(PairSimilarity {
            earlier: window[0].workload.clone(),
            later: window[1].workload.clone(),
            score,
            common_count,
            fallback,
        });
    }
    let average = sum / pairwise.len() as f64;
    SimilarityReport {
        pairwise,
        average: Some(average),
        triggered: average >= alpha,
    }
}

/// The best `count` valid configurations of an episode, best-first, with
/// performance. Ties break on canonical configuration order.
fn top_valid(
    episode: &Episode,
    count: usize,
    objective: &PerformanceObjective,
) -> Vec<(Configuration, f64)> {
    let mut measured: Vec<(Configuration, f64)> = episode
        .valid_measurements()
        .map(|m| (m.config.clone(), m.performance))
        .collect();
    measured.sort_by(|(ca, pa), (cb, pb)| {
        objective
            .rank_key(*pa)
            .partial_cmp(&objective.rank_key(*pb))
            .expect("finite performance")
            .then_with(|| ca.cmp(cb))
    });
    measured.truncate(count);
    measured
}

/// Local-stage filter: pool the best half (N/2) of each past episode's valid
/// configurations, deduplicated, in chronological-then-rank order.
pub fn local_stage(
    kb: &KnowledgeBase,
    population_size: usize,
    objective: &PerformanceObjective,
) -> Vec<Configuration> {
    let keep = population_size / 2;
    let mut pool = Vec::new();
    for episode in kb.episodes() {
        for (config, _) in top_valid(episode, keep, objective) {
            if !pool.contains(&config) {
                pool.push(config);
            }
        }
    }
    pool
}

/// Quality weights for a pooled candidate set.
///
/// For each candidate: `occurrences` counts the past episodes in which it was
/// preserved, `latest` is the 1-based index of the most recent one, and the
/// weight is the sum of the robustness (`O_c / H`) and timeliness (`S_c / H`)
/// components.
pub fn quality_weights(
    pool: &[Configuration],
    kb: &KnowledgeBase,
    population_size: usize,
    objective: &PerformanceObjective,
    preserved: PreservedSet,
) -> Vec<WeightedCandidate> {
    let h = kb.len() as f64;
    let preserved_sets: Vec<Vec<Configuration>> = kb
        .episodes()
        .iter()
        .map(|episode| match preserved {
            PreservedSet::TopHalf => top_valid(episode, population_size / 2, objective)
                .into_iter()
                .map(|(c, _)| c)
                .collect(),
            PreservedSet::Evaluated => episode.evaluated.keys().cloned().collect(),
        })
        .collect();
    pool.iter()
        .map(|config| {
            let mut occurrences = 0u32;
            let mut latest = 0u32;
            for (idx, set) in preserved_sets.iter().enumerate() {
                if set.contains(config) {
                    occurrences += 1;
                    latest = idx as u32 + 1;
                }
            }
            let robustness = occurrences as f64 / h;
            let timeliness = latest as f64 / h;
            WeightedCandidate {
                config: config.clone(),
                occurrences,
                latest,
                robustness,
                timeliness,
                weight: robustness + timeliness,
            }
        })
        .collect()
}

/// Sample up to `count` candidates without replacement, each draw proportional
/// to the remaining candidates' weights. Returns the whole candidate set when
/// it is not larger than `count`.
pub fn weighted_sample(
    candidates: &[WeightedCandidate],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Configuration> {
    if candidates.len() <= count {
        return candidates.iter().map(|c| c.config.clone()).collect();
    }
    let mut remaining: Vec<(&Configuration, f64)> =
        candidates.iter().map(|c| (&c.config, c.weight)).collect();
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = remaining.iter().map(|(_, w)| w).sum();
        let target = rng.random_range(0.0..total);
        let mut cursor = 0.0;
        let mut chosen = remaining.len() - 1;
        for (i, (_, w)) in remaining.iter().enumerate() {
            cursor += w;
            if target < cursor {
                chosen = i;
                break;
            }
        }
        let (config, _) = remaining.remove(chosen);
        picked.push(config.clone());
    }
    picked
}

/// Build the initial population for the next episode by distilling the
/// knowledge base: all random when the trigger is off, otherwise weighted
/// seeds from the local-stage pool padded with random configurations. Always
/// duplicate-free; exactly `N` members whenever the twin has enough distinct
/// valid configurations.
pub fn distill(
    twin: &CyberTwin,
    workload: &WorkloadId,
    kb: &KnowledgeBase,
    params: &PlannerParams,
    preserved: PreservedSet,
    rng: &mut ChaCha8Rng,
) -> SeededPopulation {
    let report = average_similarity(kb, params.alpha, rng);
    let mut members = Vec::with_capacity(params.population_size);
    if report.triggered {
        let pool = local_stage(kb, params.population_size, twin.space().objective());
        let candidates = quality_weights(
            &pool,
            kb,
            params.population_size,
            twin.space().objective(),
            preserved,
        );
        for config in weighted_sample(&candidates, params.population_size, rng) {
            members.push(SeedMember {
                config,
                origin: SeedOrigin::Seeded,
            });
        }
    }
    pad_with_random(twin, workload, params.population_size, &mut members, rng);
    SeededPopulation {
        members,
        similarity: Some(report),
    }
}

/// Top members up with uniformly drawn valid configurations, avoiding duplicates.
pub(crate) fn pad_with_random(
    twin: &CyberTwin,
    workload: &WorkloadId,
    population_size: usize,
    members: &mut Vec<SeedMember>,
    rng: &mut ChaCha8Rng,
) {
    if members.len() >= population_size {
        return;
    }
    let exclude: std::collections::BTreeSet<Configuration> =
        members.iter().map(|m| m.config.clone()).collect();
    let padding = random_init(
        twin,
        workload,
        population_size - members.len(),
        &exclude,
        rng,
    );
    members.extend(padding.into_iter().map(|config| SeedMember {
        config,
        origin: SeedOrigin::Random,
    }));
}

/// The distilled seeding strategy: similarity-triggered, quality-weighted.
#[derive(Debug, Clone, Default)]
pub struct DlisaSeeding {
    pub preserved: PreservedSet,
}

impl SeedingStrategy for DlisaSeeding {
    fn name(&self) -> &'static str {
        "dlisa"
    }

    fn seed(&self, ctx: &SeedingContext<'_>, rng: &mut ChaCha8Rng) -> SeededPopulation {
        distill(
            ctx.twin,
            ctx.workload,
            ctx.kb,
            ctx.params,
            self.preserved,
            rng,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{
        ConfigSpace, Direction, Measurement, OptionDef, PerformanceObjective,
    };
    use rand::SeedableRng;
    use std::collections::BTreeMap;

    fn space() -> ConfigSpace {
        ConfigSpace::new(
            vec![OptionDef::integer("x", (0..50).collect::<Vec<_>>())],
            PerformanceObjective::new(Direction::Minimize, "runtime_s"),
        )
        .unwrap()
    }

    fn episode(workload: &str, perfs: &[(u16, f64)]) -> Episode {
        let space = space();
        let w = WorkloadId::new(workload);
        let mut evaluated = BTreeMap::new();
        for &(idx, perf) in perfs {
            let config = Configuration::from_indices(&space, vec![idx]).unwrap();
            evaluated.insert(
                config.clone(),
                Measurement {
                    config,
                    workload: w.clone(),
                    performance: perf,
                    valid: true,
                },
            );
        }
        let objective = space.objective().clone();
        let elite: Vec<Configuration> = {
            let mut v: Vec<(Configuration, f64)> = evaluated
                .values()
                .map(|m| (m.config.clone(), m.performance))
                .collect();
            v.sort_by(|a, b| {
                objective
                    .rank_key(a.1)
                    .partial_cmp(&objective.rank_key(b.1))
                    .unwrap()
            });
            v.into_iter().map(|(c, _)| c).collect()
        };
        let best = elite.first().cloned();
        Episode {
            workload: w,
            evaluated,
            elite,
            best,
            trajectory: Vec::new(),
        }
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn disjoint_episodes_share_nothing() {
        let a = episode("w1", &[(0, 1.0), (1, 2.0)]);
        let b = episode("w2", &[(2, 1.0), (3, 2.0)]);
        assert!(common_configs(&a, &b).is_empty());
    }

    #[test]
    fn partial_overlap_yields_the_shared_pairs() {
        let a = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0), (4, 5.0)]);
        let b = episode("w2", &[(0, 9.0), (1, 8.0), (2, 7.0)]);
        assert_eq!(common_configs(&a, &b).len(), 3);
    }

    #[test]
    fn loss_zero_for_identical_order() {
        assert_eq!(ranking_loss(&[(1.0, 10.0), (2.0, 20.0), (3.0, 30.0)]), 0);
    }

    #[test]
    fn loss_full_for_reversed_order() {
        assert_eq!(ranking_loss(&[(1.0, 30.0), (2.0, 20.0), (3.0, 10.0)]), 3);
    }

    #[test]
    fn loss_one_for_single_swap() {
        assert_eq!(ranking_loss(&[(1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]), 1);
    }

    #[test]
    fn similarity_from_loss_over_pairs() {
        let a = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let b = episode("w2", &[(0, 2.0), (1, 1.0), (2, 3.0)]);
        let (s, fallback) = pair_similarity(&a, &b, 0.3, &mut rng(1));
        assert!(!fallback);
        assert!((s - (1.0 - 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn identical_episodes_are_fully_similar() {
        let a = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let b = episode("w2", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let (s, fallback) = pair_similarity(&a, &b, 0.3, &mut rng(1));
        assert!(!fallback);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn no_commons_falls_back_below_alpha() {
        let a = episode("w1", &[(0, 1.0)]);
        let b = episode("w2", &[(1, 1.0)]);
        for seed in 0..50 {
            let (s, fallback) = pair_similarity(&a, &b, 0.3, &mut rng(seed));
            assert!(fallback);
            assert!((0.0..0.3).contains(&s));
        }
    }

    #[test]
    fn average_over_adjacent_pairs() {
        // Three episodes engineered for pair similarities 0.9 and 0.5 is hard
        // to hit exactly with tiny sets; use 1.0 and 1/3 instead and check the
        // arithmetic mean.
        let e1 = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let e2 = episode("w2", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let e3 = episode("w3", &[(0, 3.0), (1, 1.0), (2, 2.0)]);
        let mut kb = KnowledgeBase::new();
        kb.push(e1);
        kb.push(e2);
        kb.push(e3);
        let report = average_similarity(&kb, 0.3, &mut rng(1));
        let expected = (1.0 + (1.0 - 2.0 / 3.0)) / 2.0;
        assert!((report.average.unwrap() - expected).abs() < 1e-12);
        assert!(report.triggered);
    }

    #[test]
    fn empty_kb_never_triggers() {
        let kb = KnowledgeBase::new();
        let report = average_similarity(&kb, 0.3, &mut rng(1));
        assert!(!report.triggered);
        assert!(report.average.is_none());
    }

    #[test]
    fn single_episode_triggers_the_half_seeding_path() {
        let mut kb = KnowledgeBase::new();
        kb.push(episode("w1", &[(0, 1.0), (1, 2.0)]));
        let report = average_similarity(&kb, 0.3, &mut rng(1));
        assert!(report.triggered);
        assert!(report.pairwise.is_empty());
    }

    #[test]
    fn low_average_does_not_trigger() {
        let e1 = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let e2 = episode("w2", &[(0, 3.0), (1, 2.0), (2, 1.0)]);
        let mut kb = KnowledgeBase::new();
        kb.push(e1);
        kb.push(e2);
        let report = average_similarity(&kb, 0.3, &mut rng(1));
        assert_eq!(report.average.unwrap(), 0.0);
        assert!(!report.triggered);
    }

    #[test]
    fn full_threshold_needs_perfect_pairs() {
        // at the maximum threshold a fallback pair (always below 1) keeps the
        // average short; only uniformly perfect rankings can trigger
        let e1 = episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0)]);
        let e2 = episode("w2", &[(0, 1.5), (1, 2.5), (2, 3.5)]);
        let e3 = episode("w3", &[(10, 1.0)]);
        let mut kb = KnowledgeBase::new();
        kb.push(e1);
        kb.push(e2);
        let report = average_similarity(&kb, 1.0, &mut rng(1));
        assert_eq!(report.average, Some(1.0));
        assert!(report.triggered);
        kb.push(e3);
        let report = average_similarity(&kb, 1.0, &mut rng(1));
        assert!(report.pairwise[1].fallback);
        assert!(report.average.unwrap() < 1.0);
        assert!(!report.triggered);
    }

    #[test]
    fn local_stage_keeps_the_best_half() {
        let perfs: Vec<(u16, f64)> = (0..40).map(|i| (i as u16, i as f64)).collect();
        let mut kb = KnowledgeBase::new();
        kb.push(episode("w1", &perfs));
        let pool = local_stage(&kb, 20, space().objective());
        assert_eq!(pool.len(), 10);
        let space = space();
        for config in &pool {
            // best half of a minimize landscape 0..40 is x in 0..10
            assert!(config.indices()[0] < 10, "{}", config.label(&space));
        }
    }

    #[test]
    fn local_stage_clamps_small_episodes() {
        let mut kb = KnowledgeBase::new();
        kb.push(episode("w1", &[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0)]));
        let pool = local_stage(&kb, 20, space().objective());
        assert_eq!(pool.len(), 4);
    }

    #[test]
    fn local_stage_deduplicates_shared_tops() {
        let mut kb = KnowledgeBase::new();
        kb.push(episode("w1", &[(0, 1.0), (1, 2.0)]));
        kb.push(episode("w2", &[(0, 1.5), (2, 2.5)]));
        let pool = local_stage(&kb, 4, space().objective());
        // top-2 of each episode, config 0 shared
        assert_eq!(pool.len(), 3);
    }

    #[test]
    fn quality_weights_match_direct_arithmetic() {
        // H = 4; config 0 preserved in episodes 1 and 3.
        let mut kb = KnowledgeBase::new();
        kb.push(episode("w1", &[(0, 1.0), (9, 9.0)]));
        kb.push(episode("w2", &[(5, 1.0), (9, 9.0)]));
        kb.push(episode("w3", &[(0, 1.0), (9, 9.0)]));
        kb.push(episode("w4", &[(6, 1.0), (9, 9.0)]));
        let space = space();
        let target = Configuration::from_indices(&space, vec![0]).unwrap();
        let weights = quality_weights(
            &[target],
            &kb,
            2,
            space.objective(),
            PreservedSet::TopHalf,
        );
        assert_eq!(weights[0].occurrences, 2);
        assert_eq!(weights[0].latest, 3);
        assert_eq!(weights[0].robustness, 0.5);
        assert_eq!(weights[0].timeliness, 0.75);
        assert_eq!(weights[0].weight, 1.25);
    }

    #[test]
    fn maximal_weight_for_always_recent() {
        let mut kb = KnowledgeBase::new();
        for w in ["w1", "w2", "w3"] {
            kb.push(episode(w, &[(0, 1.0), (9, 9.0)]));
        }
        let space = space();
        let target = Configuration::from_indices(&space, vec![0]).unwrap();
        let weights =
            quality_weights(&[target], &kb, 2, space.objective(), PreservedSet::TopHalf);
        assert_eq!(weights[0].weight, 2.0);
    }

    #[test]
    fn evaluated_toggle_counts_raw_membership() {
        // config 1 is evaluated in both episodes but only top-half in the
        // first; the toggle decides whether the second episode counts
        let e1 = episode("w1", &[(1, 1.0), (9, 9.0)]);
        let e2 = episode("w2", &[(0, 1.0), (1, 8.0), (9, 9.0), (5, 2.0)]);
        let mut kb = KnowledgeBase::new();
        kb.push(e1);
        kb.push(e2);
        let space = space();
        let target = Configuration::from_indices(&space, vec![1]).unwrap();
        let top = quality_weights(
            std::slice::from_ref(&target),
            &kb,
            4,
            space.objective(),
            PreservedSet::TopHalf,
        );
        assert_eq!(top[0].occurrences, 1);
        assert_eq!(top[0].latest, 1);
        let raw = quality_weights(
            std::slice::from_ref(&target),
            &kb,
            4,
            space.objective(),
            PreservedSet::Evaluated,
        );
        assert_eq!(raw[0].occurrences, 2);
        assert_eq!(raw[0].latest, 2);
    }

    #[test]
    fn heavy_candidate_dominates_sampling() {
        let space = space();
        let heavy = Configuration::from_indices(&space, vec![0]).unwrap();
        let light = Configuration::from_indices(&space, vec![1]).unwrap();
        let candidates = vec![
            WeightedCandidate {
                config: heavy.clone(),
                occurrences: 1,
                latest: 1,
                robustness: 1.0,
                timeliness: 1.0,
                weight: 2.0,
            },
            WeightedCandidate {
                config: light,
                occurrences: 1,
                latest: 1,
                robustness: 0.0005,
                timeliness: 0.0005,
                weight: 0.001,
            },
        ];
        let mut hits = 0;
        let mut r = rng(7);
        let draws = 100_000;
        for _ in 0..draws {
            if weighted_sample(&candidates, 1, &mut r)[0] == heavy {
                hits += 1;
            }
        }
        let p = 2.0 / 2.001;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((hits as f64 - draws as f64 * p).abs() < 3.0 * sigma);
    }

    #[test]
    fn sample_returns_everything_when_small() {
        let space = space();
        let candidates: Vec<WeightedCandidate> = (0..3)
            .map(|i| WeightedCandidate {
                config: Configuration::from_indices(&space, vec![i]).unwrap(),
                occurrences: 1,
                latest: 1,
                robustness: 0.5,
                timeliness: 0.5,
                weight: 1.0,
            })
            .collect();
        let picked = weighted_sample(&candidates, 3, &mut rng(1));
        assert_eq!(picked.len(), 3);
    }

    #[test]
    fn equal_weights_sample_uniformly() {
        let space = space();
        let candidates: Vec<WeightedCandidate> = (0..5)
            .map(|i| WeightedCandidate {
                config: Configuration::from_indices(&space, vec![i]).unwrap(),
                occurrences: 1,
                latest: 1,
                robustness: 0.5,
                timeliness: 0.5,
                weight: 1.0,
            })
            .collect();
        let mut counts = [0u64; 5];
        let mut r = rng(11);
        let draws = 100_000;
        for _ in 0..draws {
            let picked = weighted_sample(&candidates, 1, &mut r);
            counts[picked[0].indices()[0] as usize] += 1;
        }
        let expected = draws as f64 / 5.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        let p = crate::stats::chi_square_sf(chi2, 4.0);
        assert!(p > 0.01, "chi2 = {chi2}, p = {p}");
    }

    proptest::proptest! {
        #[test]
        fn common_sets_commute(
            a_idx in proptest::collection::btree_set(0u16..20, 1..10),
            b_idx in proptest::collection::btree_set(0u16..20, 1..10),
        ) {
            let a: Vec<(u16, f64)> = a_idx.iter().map(|&i| (i, i as f64)).collect();
            let b: Vec<(u16, f64)> = b_idx.iter().map(|&i| (i, 20.0 - i as f64)).collect();
            let ea = episode("w1", &a);
            let eb = episode("w2", &b);
            let fwd: std::collections::BTreeSet<Configuration> =
                common_configs(&ea, &eb).into_iter().map(|(c, _, _)| c).collect();
            let rev: std::collections::BTreeSet<Configuration> =
                common_configs(&eb, &ea).into_iter().map(|(c, _, _)| c).collect();
            proptest::prop_assert_eq!(fwd, rev);
        }

        #[test]
        fn similarity_is_scale_free(
            perfs in proptest::collection::vec((0.1f64..100.0, 0.1f64..100.0), 2..12),
            scale in 0.1f64..10.0,
            shift in 0.0f64..50.0,
        ) {
            // strictly increasing transform on one side leaves the score unchanged
            let base: Vec<(u16, f64)> = perfs.iter().enumerate()
                .map(|(i, (p, _))| (i as u16, *p)).collect();
            let other: Vec<(u16, f64)> = perfs.iter().enumerate()
                .map(|(i, (_, q))| (i as u16, *q)).collect();
            let transformed: Vec<(u16, f64)> = other.iter()
                .map(|&(i, q)| (i, q * scale + shift)).collect();
            let ea = episode("w1", &base);
            let eb = episode("w2", &other);
            let ec = episode("w2", &transformed);
            let (s1, f1) = pair_similarity(&ea, &eb, 0.3, &mut rng(3));
            let (s2, f2) = pair_similarity(&ea, &ec, 0.3, &mut rng(3));
            proptest::prop_assert_eq!(f1, f2);
            proptest::prop_assert_eq!(s1, s2);
        }

        #[test]
        fn weight_is_monotone_in_both_components(h in 2u32..10, o in 1u32..9, s in 1u32..9) {
            let h = h.max(o + 1).max(s + 1);
            let w = |oc: u32, sc: u32| oc as f64 / h as f64 + sc as f64 / h as f64;
            proptest::prop_assert!(w(o + 1, s) > w(o, s));
            proptest::prop_assert!(w(o, s + 1) > w(o, s));
        }
    }
}
