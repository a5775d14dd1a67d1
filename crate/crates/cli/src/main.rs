use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leeyang_cli::commands::{cmd_correlate, cmd_evolve, cmd_reproduce, cmd_zeros, CliError};
use leeyang_cli::config::RunConfig;
use leeyang_cli::output::fmt_f64;
use leeyang_cli::presets::Figure;

/// Lee-Yang zeros of Ising spin baths, seen through a probe spin.
#[derive(Parser)]
#[command(name = "leeyang", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the partition-polynomial zeros and write zeros.csv.
    Zeros {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "zeros.csv")]
        out: PathBuf,
    },
    /// Sample the probe signal and write series.csv.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "series.csv")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Match detected probe zeros against predicted zero times and write report.json.
    ///
    /// Exits 0 only if every prediction is matched.
    Correlate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
        /// Use this series.csv instead of evolving the probe.
        #[arg(long)]
        series: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Write zeros, series and report files for every panel of a figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Grid intervals over [0, t_max].
    #[arg(long)]
    steps: Option<usize>,
    /// End of the time grid; defaults to one period.
    #[arg(long)]
    t_max: Option<f64>,
}

fn load(path: &Path, grid: Option<&GridArgs>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(g) = grid {
        if let Some(steps) = g.steps {
            cfg.set_steps(steps)?;
        }
        if let Some(t) = g.t_max {
            cfg.set_t_max(t)?;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Zeros { config, out } => {
            let cfg = load(&config, None)?;
            let zeros = cmd_zeros(&cfg, &out)?;
            println!("circle_deviation {}", fmt_f64(zeros.circle_deviation));
            println!("wrote {} zeros to {}", zeros.degree(), out.display());
        }
        Command::Evolve { config, out, grid } => {
            let cfg = load(&config, Some(&grid))?;
            let series = cmd_evolve(&cfg, &out)?;
            println!("wrote {} samples to {}", series.times().len(), out.display());
        }
        Command::Correlate { config, out, series, grid } => {
            let cfg = load(&config, Some(&grid))?;
            let r = cmd_correlate(&cfg, &out, series.as_deref())?;
            println!("circle_deviation {}", fmt_f64(r.circle_deviation));
            match r.max_deviation {
                Some(d) => println!("max_deviation {}", fmt_f64(d)),
                None => println!("max_deviation none"),
            }
            println!(
                "{} predicted, {} detected, {} matched; wrote {}",
                r.predicted.len(),
                r.detected.len(),
                r.matches.len(),
                out.display()
            );
            if !r.all_matched {
                eprintln!("unmatched predictions: {:?}", r.unmatched_predicted);
                return Ok(ExitCode::from(1));
            }
        }
        Command::Reproduce { figure, out_dir } => {
            let mut all = true;
            for p in cmd_reproduce(figure, &out_dir)? {
                let dev = p.report.max_deviation.map_or("none".to_string(), fmt_f64);
                println!(
                    "{} {:<9} zeros {:>2}  circle_deviation {}  max_deviation {}  {}",
                    p.label,
                    p.temperature,
                    p.zero_count,
                    fmt_f64(p.report.circle_deviation),
                    dev,
                    if p.report.all_matched { "matched" } else { "UNMATCHED" }
                );
                all &= p.report.all_matched;
            }
            println!("wrote {}", out_dir.join(figure.id()).display());
            if !all {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
