use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zsbc::problems::CATALOG;
use zsbc::solvers::Algorithm;
use zsbc_bench::{execute, load, resolve::describe, Options};

/// Run seeded experiments with the zeroth-order block coordinate solvers.
#[derive(Debug, Parser)]
#[command(name = "zsbc-bench", version)]
struct Cli {
    /// Experiment config (TOML).
    #[arg(long, required_unless_present_any = ["list_problems", "list_algos"])]
    config: Option<PathBuf>,
    /// Output directory [default: the config's output_dir, else ./out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the replication count.
    #[arg(long)]
    seeds: Option<usize>,
    /// Worker threads for replications.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Parse and derive schedules, print them, and stop.
    #[arg(long)]
    validate_only: bool,
    /// Exit with status 3 if a bound comparison or the call accounting fails.
    #[arg(long)]
    check: bool,
    /// Also write a gnuplot script, plot.gp, next to the CSVs.
    #[arg(long)]
    gnuplot_stub: bool,
    #[arg(long)]
    list_problems: bool,
    #[arg(long)]
    list_algos: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_problems || cli.list_algos {
        if cli.list_problems {
            CATALOG.iter().for_each(|p| println!("{p}"));
        }
        if cli.list_algos {
            Algorithm::ALL.iter().for_each(|a| println!("{}\t{}", a.name(), a.describe()));
        }
        return ExitCode::SUCCESS;
    }
    let config = cli.config.expect("clap enforces --config");
    let result = load(&config, cli.seeds).and_then(|r| {
        if cli.validate_only {
            print!("{}", describe(&r));
            return Ok(());
        }
        let opts = Options {
            out: cli.out,
            seeds: cli.seeds,
            jobs: cli.jobs,
            check: cli.check,
            gnuplot_stub: cli.gnuplot_stub,
        };
        let (dir, summary) = execute(&r, &opts)?;
        println!("{} of {} seeds finished; outputs in {}", summary.succeeded, summary.replications, dir.display());
        for b in &summary.bounds {
            match (b.pass, b.metric_bound, b.empirical_mean) {
                (Some(p), Some(v), Some(m)) => {
                    println!(
                        "{}: mean {} {} {m:e} vs bound {v:e}",
                        b.id,
                        b.metric.unwrap_or("?"),
                        if p { "<=" } else { ">" }
                    )
                }
                _ => println!("{}: {}", b.id, b.error.as_deref().unwrap_or("no comparable metric")),
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zsbc-bench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
