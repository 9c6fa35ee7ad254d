//! Thin CLI over the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lifetune::bench::{
    self, load_records, report_rq1, report_rq2, report_rq3, rq1_to_csv, rq1_to_markdown,
    rq2_to_csv, rq2_to_markdown, rq3_to_csv, rq3_to_markdown, sweep_alpha, sweep_to_csv,
    BenchError, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "lifetune", version, about = "Lifelong configuration tuning harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the strategy x run grid described by an experiment config.
    Run {
        /// Path to the experiment config (JSON).
        config: PathBuf,
    },
    /// Render report tables from a directory of run records.
    Report(ReportArgs),
    /// Run the distilled strategy across trigger thresholds and rank them.
    SweepAlpha {
        /// Path to the experiment config (JSON).
        config: PathBuf,
        /// Thresholds to sweep; falls back to the config's `alpha_sweep`.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Load a dataset and print per-workload row counts.
    ValidateDataset {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding the run records.
    records: PathBuf,
    /// Mean/std and Scott-Knott ranks per workload.
    #[arg(long)]
    rq1: bool,
    /// Speedup of the reference strategy over each counterpart.
    #[arg(long)]
    rq2: bool,
    /// Win/tie/loss classification against each other strategy.
    #[arg(long)]
    rq3: bool,
    /// Reference strategy for rq2/rq3.
    #[arg(long, default_value = "dlisa")]
    reference: String,
    /// Where to write the CSV/markdown files (defaults to the records dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run { config } => {
            let config = ExperimentConfig::load(&config)?;
            let outcome = bench::run_experiment(&config)?;
            println!(
                "wrote {} record(s) to {} ({} already present)",
                outcome.executed,
                outcome.output_dir.display(),
                outcome.skipped
            );
            Ok(())
        }
        Command::Report(args) => report(args),
        Command::SweepAlpha { config, values } => {
            let config = ExperimentConfig::load(&config)?;
            let values = values
                .or_else(|| config.alpha_sweep.clone())
                .ok_or_else(|| BenchError::BadRecords(
                    "no sweep values: pass --values or set alpha_sweep in the config".into(),
                ))?;
            let report = sweep_alpha(&config, &values)?;
            let out = config.resolve_output_dir().join("sweep_alpha.csv");
            write_output(&out, &sweep_to_csv(&report))?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::ValidateDataset { descriptor, data } => {
            let summary = bench::validate_dataset(&descriptor, &data)?;
            println!("system: {}", summary.system);
            println!("rows: {}", summary.total_rows);
            for (workload, count) in &summary.rows_per_workload {
                println!("  {workload}: {count}");
            }
            Ok(())
        }
    }
}

fn report(args: ReportArgs) -> Result<(), BenchError> {
    if !(args.rq1 || args.rq2 || args.rq3) {
        return Err(BenchError::BadRecords(
            "pick at least one of --rq1, --rq2, --rq3".into(),
        ));
    }
    let records = load_records(&args.records)?;
    let out_dir = args.out.clone().unwrap_or_else(|| args.records.clone());
    if args.rq1 {
        let config_split = Default::default();
        let table = report_rq1(&records, config_split)?;
        write_output(&out_dir.join("rq1.csv"), &rq1_to_csv(&table))?;
        write_output(&out_dir.join("rq1.md"), &rq1_to_markdown(&table))?;
        println!("{}", rq1_to_markdown(&table));
    }
    if args.rq2 {
        let table = report_rq2(&records, &args.reference)?;
        write_output(&out_dir.join("rq2.csv"), &rq2_to_csv(&table))?;
        write_output(&out_dir.join("rq2.md"), &rq2_to_markdown(&table))?;
        println!("{}", rq2_to_markdown(&table));
    }
    if args.rq3 {
        let table = report_rq3(&records, &args.reference)?;
        write_output(&out_dir.join("rq3.csv"), &rq3_to_csv(&table))?;
        write_output(&out_dir.join("rq3.md"), &rq3_to_markdown(&table))?;
        println!("{}", rq3_to_markdown(&table));
    }
    Ok(())
}

fn write_output(path: &PathBuf, content: &str) -> Result<(), BenchError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| BenchError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, content).map_err(|source| BenchError::Io {
        path: path.clone(),
        source,
    })
}
