//! Every seeding strategy on the same twin, compared with the nonparametric
//! toolkit: means, Wilcoxon p-values and A12 effect sizes against the
//! distilled strategy.
//!
//! ```bash
//! cargo run -p lifetune --example strategy_faceoff
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lifetune::baselines::{make_strategy, StrategyId, StrategyOptions};
use lifetune::core::{
    ConfigSpace, Configuration, Direction, OptionDef, PerformanceObjective, WorkloadId,
};
use lifetune::oracle::CyberTwin;
use lifetune::planner::{derive_run_seed, lifelong_run, PlannerParams};
use lifetune::stats::{a12, summarize, wilcoxon_rank_sum};

fn main() {
    // three identical workloads: later episodes reward exploiting the history
    let space = ConfigSpace::new(
        vec![
            OptionDef::integer("x", (0..10).collect::<Vec<_>>()),
            OptionDef::integer("y", (0..20).collect::<Vec<_>>()),
        ],
        PerformanceObjective::new(Direction::Minimize, "runtime_s"),
    )
    .unwrap();
    let workloads: Vec<WorkloadId> = ["w1", "w2", "w3"]
        .iter()
        .map(|w| WorkloadId::new(*w))
        .collect();
    let mut rows = Vec::new();
    for w in &workloads {
        for x in 0..10u16 {
            for y in 0..20u16 {
                // two deep optima over a mediocre plateau: losing track of an
                // optimum between workloads is expensive
                let cell = (x as u64 * 20 + y as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                let unit = (cell >> 11) as f64 / (1u64 << 53) as f64;
                let value = match (x, y) {
                    (3, 7) => 1.0 + unit,
                    (8, 14) => 2.0 + unit,
                    _ => 50.0 + unit * 50.0,
                };
                rows.push((
                    Configuration::from_indices(&space, vec![x, y]).unwrap(),
                    w.clone(),
                    value,
                ));
            }
        }
    }
    let twin = CyberTwin::from_rows("demo", space, workloads.clone(), rows).unwrap();

    let params = PlannerParams {
        master_seed: 5,
        ..Default::default()
    };
    let runs = 15;

    // final performances on the seeded workloads (2 and 3), pooled over runs
    let finals_for = |id: StrategyId| -> Vec<f64> {
        let strategy = make_strategy(id, StrategyOptions::default());
        (0..runs)
            .flat_map(|r| {
                let seed = derive_run_seed(params.master_seed, u64::from(r));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let record =
                    lifelong_run(&twin, &workloads, &params, strategy.as_ref(), &mut rng, r, seed);
                record.episodes[1..]
                    .iter()
                    .map(|e| e.final_performance)
                    .collect::<Vec<_>>()
            })
            .collect()
    };

    let reference = finals_for(StrategyId::Dlisa);
    let ref_summary = summarize(&reference);
    println!(
        "{} runs x 2 seeded workloads, budget {} each\n",
        runs, params.budget
    );
    println!("  strategy   mean (std)          p vs dlisa   A12 vs dlisa");
    println!(
        "  {:<9} {:>7.3} ({:.3})",
        "dlisa", ref_summary.mean, ref_summary.std
    );
    for id in StrategyId::ALL.into_iter().filter(|&id| id != StrategyId::Dlisa) {
        let finals = finals_for(id);
        let summary = summarize(&finals);
        let p = wilcoxon_rank_sum(&reference, &finals).unwrap();
        let effect = a12(&reference, &finals);
        println!(
            "  {:<9} {:>7.3} ({:.3})   {:>9.4}   {:>7.3}",
            id.as_str(),
            summary.mean,
            summary.std,
            p,
            effect
        );
    }
    println!("\nminimizing: lower means win; A12 < 0.5 means dlisa's values sit lower");
}
