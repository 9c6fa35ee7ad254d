//! Load the bundled demo dataset (JSON descriptor + CSV measurements) and
//! inspect what the measurement oracle knows about it.
//!
//! ```bash
//! cargo run -p lifetune --example dataset_loading
//! ```

use std::error::Error;
use std::path::Path;

use lifetune::oracle::{BudgetMeter, CyberTwin};

fn main() -> Result<(), Box<dyn Error>> {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let (twin, summary) = CyberTwin::load(
        &data_dir.join("demo-descriptor.json"),
        &data_dir.join("demo-data.csv"),
    )?;

    println!("system: {}", summary.system);
    println!(
        "objective: {} ({:?})",
        twin.space().objective().metric,
        twin.space().objective().direction
    );
    println!("options:");
    for option in twin.space().options() {
        println!("  {:<12} {:?} with {} values", option.name, option.kind, option.domain.len());
    }
    println!("rows per workload:");
    for (workload, count) in &summary.rows_per_workload {
        let (best, worst) = twin.extrema(workload)?;
        let penalty = twin.penalty(workload)?;
        println!(
            "  {workload:<8} {count} rows | best {best:.3} worst {worst:.3} | off-table penalty {penalty:.3}"
        );
    }

    // metered measurement: duplicates are free, off-table queries are penalized
    let workload = &twin.workloads()[0];
    let config = twin.valid_configs(workload).next().unwrap().clone();
    let mut meter = BudgetMeter::new(5);
    let first = twin.measure(workload, &config, &mut meter)?;
    let again = twin.measure(workload, &config, &mut meter)?;
    assert_eq!(first, again);
    println!(
        "\nmeasured [{}] twice under '{workload}': {:.3}, consumed {} of {}",
        config.label(twin.space()),
        first.performance,
        meter.consumed(),
        meter.limit()
    );
    Ok(())
}
