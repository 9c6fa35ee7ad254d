//! What gets seeded once the trigger fires: the local-stage pool, per-candidate
//! quality weights, and the weight-proportional sample.
//!
//! ```bash
//! cargo run -p lifetune --example weighted_seeding
//! ```

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lifetune::core::{
    ConfigSpace, Configuration, Direction, KnowledgeBase, OptionDef, PerformanceObjective,
    WorkloadId,
};
use lifetune::distill::{local_stage, quality_weights, weighted_sample, PreservedSet};
use lifetune::oracle::CyberTwin;
use lifetune::planner::{evolve_episode, random_init, PlannerParams};

fn main() {
    // identical landscapes so the same strong configurations recur
    let space = ConfigSpace::new(
        vec![
            OptionDef::integer("x", (0..10).collect::<Vec<_>>()),
            OptionDef::integer("y", (0..20).collect::<Vec<_>>()),
        ],
        PerformanceObjective::new(Direction::Minimize, "runtime_s"),
    )
    .unwrap();
    let workloads: Vec<WorkloadId> = (1..=4).map(|i| WorkloadId::new(format!("w{i}"))).collect();
    let mut rows = Vec::new();
    for w in &workloads {
        for x in 0..10u16 {
            for y in 0..20u16 {
                let value = 10.0 + ((x as f64 * 61.0 + y as f64 * 17.0) * 131.0) % 90.0;
                rows.push((
                    Configuration::from_indices(&space, vec![x, y]).unwrap(),
                    w.clone(),
                    value,
                ));
            }
        }
    }
    let twin = CyberTwin::from_rows("demo", space, workloads.clone(), rows).unwrap();

    // accumulate three past episodes
    let params = PlannerParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut kb = KnowledgeBase::new();
    for w in &workloads[..3] {
        let seeds = random_init(&twin, w, params.population_size, &BTreeSet::new(), &mut rng);
        kb.push(evolve_episode(&twin, w, &seeds, &params, &mut rng));
    }

    let pool = local_stage(&kb, params.population_size, twin.space().objective());
    println!(
        "local stage kept the best half of each of {} episodes -> pool of {}",
        kb.len(),
        pool.len()
    );

    let candidates = quality_weights(
        &pool,
        &kb,
        params.population_size,
        twin.space().objective(),
        PreservedSet::TopHalf,
    );
    let mut ranked = candidates.clone();
    ranked.sort_by(|a, b| b.weight.partial_cmp(&a.weight).unwrap());
    println!("\n  configuration        O_c  S_c   w_r    w_t    w");
    for cand in ranked.iter().take(8) {
        println!(
            "  {:<20} {:>3} {:>4} {:>6.3} {:>6.3} {:>6.3}",
            cand.config.label(twin.space()),
            cand.occurrences,
            cand.latest,
            cand.robustness,
            cand.timeliness,
            cand.weight
        );
    }

    let seeds = weighted_sample(&candidates, params.population_size, &mut rng);
    println!(
        "\nsampled {} seeds without replacement, weight-proportionally:",
        seeds.len()
    );
    for seed in seeds.iter().take(6) {
        println!("  {}", seed.label(twin.space()));
    }
    println!("  ...");
}
