//! Command-line front end: verification, single-point decoding, sweeps,
//! correctability experiments, lattice export and threshold estimation.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tscc::io::{lattice_json, parse_config, read_jsonl, write_csv, write_jsonl};
use tscc::montecarlo::{sweep_with, Experiment, PointResult, StoppingRule, SweepConfig, TrialRunner};
use tscc::threshold::{estimate_threshold, DEFAULT_BOOTSTRAP};
use tscc::verify::verify;
use tscc::{Mode, TsccCode};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;

#[derive(Parser)]
#[command(
    name = "tscc",
    version,
    about = "Topological subsystem color codes under erasure noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every structural invariant and both measurement schedules.
    Verify {
        /// Code distance; repeat or comma-separate for several.
        #[arg(long = "d", value_delimiter = ',', default_value = "4")]
        d: Vec<usize>,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run one (d, eps) point of a decoder and print it as JSON.
    Decode {
        /// Code distance, a multiple of 4.
        #[arg(long = "d")]
        d: usize,
        /// partial or maximal.
        #[arg(long)]
        mode: Mode,
        /// Erasure probability per qubit.
        #[arg(long)]
        eps: f64,
        /// Maximum number of trials.
        #[arg(long, default_value_t = StoppingRule::default().max_trials)]
        trials: u64,
        /// Stop early once this many failures are seen; defaults to `--trials`.
        #[arg(long)]
        target_failures: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        workers: Workers,
    },
    /// Sweep a grid of distances and erasure rates.
    Sweep(SweepArgs),
    /// Count erasures that fail the rank test over a grid.
    Correctability {
        /// Code distances, comma-separated.
        #[arg(long = "d", value_delimiter = ',', default_values_t = [4, 8, 16])]
        d: Vec<usize>,
        /// Erasure rates in ascending order, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Trials per point; every trial is counted.
        #[arg(long, default_value_t = StoppingRule::default().max_trials)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        workers: Workers,
        #[command(flatten)]
        output: Output,
    },
    /// Dump the inflated lattice as JSON.
    ExportLattice {
        /// Code distance, a multiple of 4.
        #[arg(long = "d")]
        d: usize,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the threshold from a JSON-lines results file.
    Threshold {
        /// Output of `sweep` or `correctability`.
        results: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
        bootstrap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Workers {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long = "workers", env = "TSCC_WORKERS")]
    count: Option<usize>,
}

impl Workers {
    fn resolve(&self) -> usize {
        self.count
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Args)]
struct Output {
    /// JSON-lines results file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV mirror of the results.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file; flags given alongside it override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// partial, maximal or correctability.
    #[arg(long)]
    mode: Option<Experiment>,
    /// Code distances, comma-separated multiples of 4.
    #[arg(long = "d", value_delimiter = ',')]
    d: Vec<usize>,
    /// Erasure rates in ascending order, comma-separated.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Trials per point [default: 10000].
    #[arg(long)]
    max_trials: Option<u64>,
    /// Failures after which a point stops early [default: 2000].
    #[arg(long)]
    target_failures: Option<u64>,
    /// Base seed; trial t of every point uses substream (seed, t) [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    workers: Workers,
    #[command(flatten)]
    output: Output,
    /// Also estimate the threshold and print it to stderr.
    #[arg(long)]
    threshold: bool,
}

impl SweepArgs {
    fn into_config(self) -> Result<(SweepConfig, Output, bool)> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_config(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => SweepConfig {
                mode: self.mode.context("--mode is required without --config")?,
                distances: Vec::new(),
                eps_grid: Vec::new(),
                max_trials: StoppingRule::default().max_trials,
                target_failures: StoppingRule::default().target_failures,
                seed: 0,
                workers: 1,
            },
        };
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if !self.d.is_empty() {
            config.distances = self.d;
        }
        if !self.eps.is_empty() {
            config.eps_grid = self.eps;
        }
        if let Some(v) = self.max_trials {
            config.max_trials = v;
        }
        if let Some(v) = self.target_failures {
            config.target_failures = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if self.config.is_none() || self.workers.count.is_some() {
            config.workers = self.workers.resolve();
        }
        config.validate()?;
        Ok((config, self.output, self.threshold))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run_sweep(config: &SweepConfig, output: &Output, threshold: bool) -> Result<()> {
    let result = sweep_with(config, |p| {
        eprintln!(
            "d={} eps={} trials={} failures={} rate={:.4}",
            p.d, p.eps, p.trials, p.failures, p.rate
        );
    })?;
    match &output.out {
        Some(path) => write_jsonl(create(path)?, &result.points)?,
        None => write_jsonl(io::stdout().lock(), &result.points)?,
    }
    if let Some(path) = &output.csv {
        write_csv(create(path)?, &result.points)?;
    }
    eprintln!("{} points in {:.1}s", result.points.len(), result.wall_time_s);
    if threshold {
        let est = estimate_threshold(&result.points, DEFAULT_BOOTSTRAP, config.seed)?;
        eprintln!("{}", serde_json::to_string(&est)?);
    }
    Ok(())
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Verify { d, json } => {
            let reports: Vec<_> = d.iter().map(|&d| verify(d)).collect();
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                let mut out = io::stdout().lock();
                for r in &reports {
                    writeln!(out, "d = {}", r.d)?;
                    for e in &r.entries {
                        let tag = if e.passed { "PASS" } else { "FAIL" };
                        if e.detail.is_empty() {
                            writeln!(out, "  {tag} {}", e.name)?;
                        } else {
                            writeln!(out, "  {tag} {}: {}", e.name, e.detail)?;
                        }
                    }
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) {
                0
            } else {
                EXIT_VERIFY
            })
        }
        Command::Decode {
            d,
            mode,
            eps,
            trials,
            target_failures,
            seed,
            workers,
        } => {
            let code = TsccCode::new(d)?;
            let stopping = StoppingRule {
                max_trials: trials,
                target_failures: target_failures.unwrap_or(trials),
            };
            let experiment = Experiment::from(mode);
            let runner = TrialRunner::new(&code, experiment);
            let (t, f) = runner.run_with_workers(eps, stopping, seed, workers.resolve())?;
            println!(
                "{}",
                serde_json::to_string(&PointResult::new(d, eps, t, f, experiment, seed))?
            );
            Ok(0)
        }
        Command::Sweep(args) => {
            let (config, output, threshold) = args.into_config()?;
            run_sweep(&config, &output, threshold)?;
            Ok(0)
        }
        Command::Correctability {
            d,
            eps,
            trials,
            seed,
            workers,
            output,
        } => {
            let config = SweepConfig {
                mode: Experiment::Correctability,
                distances: d,
                eps_grid: eps,
                max_trials: trials,
                target_failures: trials,
                seed,
                workers: workers.resolve(),
            };
            run_sweep(&config, &output, false)?;
            Ok(0)
        }
        Command::ExportLattice { d, out } => {
            let json = lattice_json(d)?;
            match out {
                Some(path) => writeln!(create(&path)?, "{json}")?,
                None => println!("{json}"),
            }
            Ok(0)
        }
        Command::Threshold {
            results,
            bootstrap,
            seed,
        } => {
            let file = File::open(&results).with_context(|| format!("opening {}", results.display()))?;
            let points = read_jsonl(BufReader::new(file))?;
            let est = estimate_threshold(&points, bootstrap, seed)?;
            println!("{}", serde_json::to_string_pretty(&est)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
