use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use share_sense::harness::{run_campaign, write_outputs, CargoConfig};
use share_sense::io::{load_instance, sensitivity_report, solve_report};
use share_sense::sensitivity::epsilon_table;
use share_sense::Error;

#[derive(Parser)]
#[command(name = "share-sense", version, about = "Resource sharing LPs and new-agent sensitivity bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the primal and dual solution as JSON.
    Solve {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print the confidence interval for one instance as JSON.
    Sensitivity {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1e-7)]
        beta: f64,
    },
    /// Write the bound table for sample size m as CSV.
    Bounds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        beta: f64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a cargo-loading campaign.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve { instance } => print_json(&solve_report(&load_instance(&instance)?)?),
        Command::Sensitivity { instance, beta } => print_json(&sensitivity_report(&load_instance(&instance)?, beta)?),
        Command::Bounds { m, beta, out } => {
            let table = epsilon_table(m, beta)?;
            match out {
                Some(path) => table.write_csv(std::fs::File::create(path)?)?,
                None => table.write_csv(std::io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Simulate { config, out_dir } => {
            let cfg = CargoConfig::from_json(&std::fs::read_to_string(config)?)?;
            let campaign = run_campaign(&cfg)?;
            write_outputs(&campaign, &out_dir)?;
            print_json(&campaign.summary)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SHARE_SENSE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
