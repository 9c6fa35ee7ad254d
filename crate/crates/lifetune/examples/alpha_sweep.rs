//! Sensitivity of the seeding trigger threshold: run the distilled strategy
//! across several alpha values on the bundled dataset and rank them per
//! workload.
//!
//! ```bash
//! cargo run -p lifetune --example alpha_sweep
//! ```

use std::error::Error;
use std::path::Path;

use lifetune::baselines::StrategyId;
use lifetune::bench::{sweep_alpha, sweep_to_csv, DatasetPaths, ExperimentConfig};
use lifetune::planner::PlannerParams;

fn main() -> Result<(), Box<dyn Error>> {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let out = tempfile::tempdir()?;
    let config = ExperimentConfig {
        dataset: DatasetPaths {
            descriptor: data_dir.join("demo-descriptor.json"),
            data: data_dir.join("demo-data.csv"),
        },
        strategies: vec![StrategyId::Dlisa],
        runs: 10,
        params: PlannerParams {
            budget: 40,
            master_seed: 99,
            ..Default::default()
        },
        alpha_sweep: Some(vec![0.0, 0.3, 0.6, 0.9]),
        output_dir: Some(out.path().to_path_buf()),
        parallelism: 2,
        paired_orders: true,
        preserved_set: Default::default(),
        dsoga_pool: Default::default(),
        dlisa_ii_trigger_probability: 0.5,
        scott_knott_split: Default::default(),
    };

    let values = config.alpha_sweep.clone().unwrap();
    let report = sweep_alpha(&config, &values)?;
    println!("{}", sweep_to_csv(&report));

    // which alpha holds rank 1 most often across the workload cases?
    let mut wins: Vec<(f64, usize)> = values
        .iter()
        .map(|&alpha| {
            let count = report
                .cells
                .iter()
                .filter(|c| c.alpha == alpha && c.rank == 1)
                .count();
            (alpha, count)
        })
        .collect();
    wins.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    println!("rank-1 cases per alpha:");
    for (alpha, count) in wins {
        println!("  alpha {alpha:.1} -> {count}");
    }
    Ok(())
}
