//! One lifelong run on a small synthetic twin: three workloads with the same
//! performance landscape, planned by the distilled seeding strategy.
//!
//! ```bash
//! cargo run -p lifetune --example quickstart
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lifetune::core::{
    ConfigSpace, Configuration, Direction, OptionDef, PerformanceObjective, WorkloadId,
};
use lifetune::distill::DlisaSeeding;
use lifetune::oracle::CyberTwin;
use lifetune::planner::{lifelong_run, PlannerParams, SeedOrigin};

fn main() {
    // a rugged 10 x 20 table, identical under each workload
    let space = ConfigSpace::new(
        vec![
            OptionDef::integer("x", (0..10).collect::<Vec<_>>()),
            OptionDef::integer("y", (0..20).collect::<Vec<_>>()),
        ],
        PerformanceObjective::new(Direction::Minimize, "runtime_s"),
    )
    .unwrap();
    let workloads: Vec<WorkloadId> = ["morning", "midday", "evening"]
        .iter()
        .map(|w| WorkloadId::new(*w))
        .collect();
    let mut rows = Vec::new();
    for w in &workloads {
        for x in 0..10u16 {
            for y in 0..20u16 {
                // collision-free rugged surface
                let cell = (x as u64 * 20 + y as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                let value = 10.0 + (cell >> 11) as f64 / (1u64 << 53) as f64 * 90.0;
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
        master_seed: 42,
        ..Default::default()
    };
    let strategy = DlisaSeeding::default();
    let mut rng = ChaCha8Rng::seed_from_u64(params.master_seed);
    let record = lifelong_run(&twin, &workloads, &params, &strategy, &mut rng, 0, 42);

    println!("system: {} (budget {} per workload)\n", record.system, params.budget);
    for episode in &record.episodes {
        let seeded = episode
            .seeds
            .iter()
            .filter(|s| s.origin == SeedOrigin::Seeded)
            .count();
        let random = episode.seeds.len() - seeded;
        let similarity = episode
            .similarity
            .as_ref()
            .and_then(|r| r.average)
            .map(|a| format!("{a:.3}"))
            .unwrap_or_else(|| "n/a".into());
        let best_at = episode
            .trajectory
            .iter()
            .find(|p| p.best == episode.final_performance)
            .map(|p| p.measurements)
            .unwrap_or(0);
        println!(
            "workload {:<8} seeds {seeded:>2} carried + {random:>2} random | avg similarity {similarity:>5} | best {:.3} reached at measurement {best_at:>2} of {}",
            episode.workload.as_str(),
            episode.final_performance,
            episode.measurements_used,
        );
    }
    println!(
        "\nseeded workloads reach the incumbent best within their first few measurements"
    );
}
