use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bax_core::harness::{emit_plot, execute_experiment, parse_config, write_results};

#[derive(Parser)]
#[command(
    name = "bax",
    version,
    about = "Bayesian algorithm execution experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Output directory for results.csv, run records and plots.
        #[arg(long, env = "BAX_OUT_DIR", default_value = "bax-results")]
        out: PathBuf,
        /// Overrides the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's number of trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Also writes `<METRIC>.svg` into the output directory.
        #[arg(long, value_name = "METRIC")]
        plot: Option<String>,
    },
}

fn run(
    config: PathBuf,
    out: PathBuf,
    seed: Option<u64>,
    trials: Option<usize>,
    plot: Option<String>,
) -> bax_core::Result<()> {
    let mut cfg = parse_config(&config)?;
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    let cfg = cfg.resolve()?;
    let table = execute_experiment(&cfg)?;
    let written = write_results(&table, Some(&cfg), &out)?;
    eprintln!("wrote {} files to {}", written.len(), out.display());
    for f in &table.failures {
        eprintln!("run failed: {} trial {}: {}", f.method, f.trial, f.error);
    }
    if let Some(metric) = plot {
        let p = out.join(format!("{metric}.svg"));
        emit_plot(&table, &metric, &p)?;
        eprintln!("plot: {}", p.display());
    }
    if let Some(metric) = table.metrics().first() {
        for method in table.methods() {
            if let Some(last) = table.summarize(&method, metric).last() {
                println!(
                    "{method:>14}  {metric} at {:>4}: {:.6} ± {:.6}",
                    last.iteration, last.mean, last.std_err
                );
            }
        }
    }
    if table.failures.is_empty() {
        Ok(())
    } else {
        Err(bax_core::BaxError::Config(format!(
            "{} run(s) aborted",
            table.failures.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            trials,
            plot,
        } => run(config, out, seed, trials, plot),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
