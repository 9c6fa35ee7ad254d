//! A complete miniature experiment on the bundled dataset: run the strategy
//! grid, persist one JSON record per run, and render the report tables from
//! the records alone.
//!
//! ```bash
//! cargo run -p lifetune --example full_experiment
//! ```

use std::error::Error;
use std::path::Path;

use lifetune::baselines::StrategyId;
use lifetune::bench::{
    load_records, report_rq1, report_rq2, report_rq3, rq1_to_markdown, rq2_to_markdown,
    rq3_to_markdown, run_experiment, DatasetPaths, ExperimentConfig,
};
use lifetune::planner::PlannerParams;

fn main() -> Result<(), Box<dyn Error>> {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let out = tempfile::tempdir()?;
    let config = ExperimentConfig {
        dataset: DatasetPaths {
            descriptor: data_dir.join("demo-descriptor.json"),
            data: data_dir.join("demo-data.csv"),
        },
        strategies: vec![
            StrategyId::Dlisa,
            StrategyId::Femosaa,
            StrategyId::SeedEa,
            StrategyId::DSoga,
            StrategyId::DlisaI,
            StrategyId::DlisaIi,
        ],
        runs: 10,
        params: PlannerParams {
            budget: 40,
            master_seed: 2024,
            ..Default::default()
        },
        alpha_sweep: None,
        output_dir: Some(out.path().to_path_buf()),
        parallelism: 2,
        paired_orders: true,
        preserved_set: Default::default(),
        dsoga_pool: Default::default(),
        dlisa_ii_trigger_probability: 0.5,
        scott_knott_split: Default::default(),
    };

    let outcome = run_experiment(&config)?;
    println!(
        "executed {} runs into {}\n",
        outcome.executed,
        outcome.output_dir.display()
    );

    let records = load_records(out.path())?;
    println!("== effectiveness (mean, std, Scott-Knott rank) ==\n");
    println!("{}", rq1_to_markdown(&report_rq1(&records, Default::default())?));
    println!("== speedup over each counterpart ==\n");
    println!("{}", rq2_to_markdown(&report_rq2(&records, "dlisa")?));
    println!("== win/tie/loss against each counterpart ==\n");
    println!("{}", rq3_to_markdown(&report_rq3(&records, "dlisa")?));
    Ok(())
}
