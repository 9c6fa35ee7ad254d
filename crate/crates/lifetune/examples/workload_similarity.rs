//! Ranked workload similarity from the ground up: pairwise ranking loss,
//! per-pair scores, the fallback draw, and the seeding trigger.
//!
//! ```bash
//! cargo run -p lifetune --example workload_similarity
//! ```

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lifetune::core::{
    ConfigSpace, Configuration, Direction, Episode, KnowledgeBase, Measurement, OptionDef,
    PerformanceObjective, WorkloadId,
};
use lifetune::distill::{average_similarity, common_configs, pair_similarity, ranking_loss};

fn episode(space: &ConfigSpace, workload: &str, perfs: &[(u16, f64)]) -> Episode {
    let w = WorkloadId::new(workload);
    let mut evaluated = BTreeMap::new();
    for &(idx, performance) in perfs {
        let config = Configuration::from_indices(space, vec![idx]).unwrap();
        evaluated.insert(
            config.clone(),
            Measurement {
                config,
                workload: w.clone(),
                performance,
                valid: true,
            },
        );
    }
    let best = evaluated
        .values()
        .min_by(|a, b| a.performance.partial_cmp(&b.performance).unwrap())
        .map(|m| m.config.clone());
    Episode {
        workload: w,
        elite: best.clone().into_iter().collect(),
        best,
        evaluated,
        trajectory: Vec::new(),
    }
}

fn main() {
    let space = ConfigSpace::new(
        vec![OptionDef::integer("x", (0..10).collect::<Vec<_>>())],
        PerformanceObjective::new(Direction::Minimize, "runtime_s"),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // the loss counts unordered pairs whose relative order flips
    let pairs = [(1.0, 2.0), (2.0, 1.0), (3.0, 3.0)];
    println!("ranking loss of {pairs:?} = {}", ranking_loss(&pairs));

    let base = episode(&space, "w1", &[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0)]);
    let same = episode(&space, "w2", &[(0, 10.0), (1, 20.0), (2, 30.0), (3, 40.0)]);
    let flipped = episode(&space, "w3", &[(0, 40.0), (1, 30.0), (2, 20.0), (3, 10.0)]);
    let disjoint = episode(&space, "w4", &[(7, 1.0), (8, 2.0)]);

    println!("common configurations with 'same': {}", common_configs(&base, &same).len());
    let (s, _) = pair_similarity(&base, &same, 0.3, &mut rng);
    println!("order-preserving twin        -> similarity {s}");
    let (s, _) = pair_similarity(&base, &flipped, 0.3, &mut rng);
    println!("rank-reversed twin           -> similarity {s}");
    let (s, fallback) = pair_similarity(&base, &disjoint, 0.3, &mut rng);
    println!("no common configurations     -> similarity {s:.3} (fallback: {fallback})");

    // the trigger averages over adjacent episode pairs
    let mut kb = KnowledgeBase::new();
    kb.push(base);
    kb.push(same);
    kb.push(flipped);
    let report = average_similarity(&kb, 0.3, &mut rng);
    println!("\nadjacent pair scores:");
    for pair in &report.pairwise {
        println!(
            "  {} -> {}: {:.3} over {} commons{}",
            pair.earlier,
            pair.later,
            pair.score,
            pair.common_count,
            if pair.fallback { " (fallback)" } else { "" }
        );
    }
    println!(
        "average {:.3} -> seeding {}",
        report.average.unwrap(),
        if report.triggered { "TRIGGERED" } else { "off" }
    );
}
