//! Monte Carlo harness: per-point trial loops and full sweeps.
//!
//! Trial `t` of a point draws its erasure from the substream `(seed, t)`, so
//! the set of trials and their outcomes do not depend on how many workers
//! run them. Trials are evaluated in parallel batches and tallied in index
//! order; the first trial that reaches the failure target ends the point.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::TsccCode;
use crate::correctability::Correctability;
use crate::decoder::decode;
use crate::erasure::{check_probability, sample_erasure, RngStream};
use crate::error::{Error, Result};
use crate::lattice::check_distance;
use crate::schedule::Mode;

/// Trials evaluated per parallel batch.
const BATCH: u64 = 256;

/// What a trial counts as a failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Logical failure of the partial gauge-fixing decoder.
    Partial,
    /// Logical failure of the maximal gauge-fixing decoder.
    Maximal,
    /// The erasure fails the TSCC rank test.
    Correctability,
}

impl Experiment {
    pub fn decoder_mode(self) -> Option<Mode> {
        match self {
            Experiment::Partial => Some(Mode::Partial),
            Experiment::Maximal => Some(Mode::Maximal),
            Experiment::Correctability => None,
        }
    }
}

impl From<Mode> for Experiment {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Partial => Experiment::Partial,
            Mode::Maximal => Experiment::Maximal,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Partial => "partial",
            Experiment::Maximal => "maximal",
            Experiment::Correctability => "correctability",
        })
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial" => Ok(Experiment::Partial),
            "maximal" => Ok(Experiment::Maximal),
            "correctability" => Ok(Experiment::Correctability),
            other => Err(Error::Parse(format!(
                "unknown mode `{other}` (expected partial, maximal or correctability)"
            ))),
        }
    }
}

/// Stop a point at `max_trials` or as soon as `target_failures` is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_trials: u64,
    pub target_failures: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            max_trials: 10_000,
            target_failures: 2_000,
        }
    }
}

impl StoppingRule {
    pub fn validate(&self) -> Result<()> {
        if self.max_trials == 0 {
            return Err(Error::Config("max_trials must be at least 1".into()));
        }
        if self.target_failures == 0 {
            return Err(Error::Config("target_failures must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub mode: Experiment,
    pub distances: Vec<usize>,
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    #[serde(default = "default_target_failures")]
    pub target_failures: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_max_trials() -> u64 {
    StoppingRule::default().max_trials
}

fn default_target_failures() -> u64 {
    StoppingRule::default().target_failures
}

fn default_workers() -> usize {
    1
}

impl SweepConfig {
    pub fn stopping(&self) -> StoppingRule {
        StoppingRule {
            max_trials: self.max_trials,
            target_failures: self.target_failures,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances.is_empty() {
            return Err(Error::Config("no distances given".into()));
        }
        for &d in &self.distances {
            check_distance(d)?;
        }
        if self.eps_grid.is_empty() {
            return Err(Error::Config("empty eps grid".into()));
        }
        for &eps in &self.eps_grid {
            check_probability(eps)?;
        }
        if self.eps_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("eps grid must be strictly ascending".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.stopping().validate()
    }
}

/// Outcome of one `(d, eps)` point; also the JSON-lines record schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub d: usize,
    pub eps: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mode: Experiment,
    pub seed: u64,
}

impl PointResult {
    pub fn new(d: usize, eps: f64, trials: u64, failures: u64, mode: Experiment, seed: u64) -> Self {
        let (ci_lo, ci_hi) = wilson(failures, trials);
        Self {
            d,
            eps,
            trials,
            failures,
            rate: if trials == 0 {
                0.0
            } else {
                failures as f64 / trials as f64
            },
            ci_lo,
            ci_hi,
            mode,
            seed,
        }
    }

    /// Binomial standard error of the rate.
    pub fn std_err(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub points: Vec<PointResult>,
    pub wall_time_s: f64,
    pub version: String,
}

/// Wilson score interval at 95% confidence.
pub fn wilson(failures: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if failures == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Per-code state a trial needs, built once per distance.
pub struct TrialRunner<'a> {
    code: &'a TsccCode,
    experiment: Experiment,
    rank: Option<Correctability<'a>>,
}

impl<'a> TrialRunner<'a> {
    pub fn new(code: &'a TsccCode, experiment: Experiment) -> Self {
        let rank = (experiment == Experiment::Correctability).then(|| Correctability::new(code));
        Self { code, experiment, rank }
    }

    /// Whether trial `trial` of the point `(eps, seed)` fails.
    pub fn trial(&self, eps: f64, seed: u64, trial: u64) -> Result<bool> {
        let pattern = sample_erasure(self.code.n(), eps, &mut RngStream::new(seed, trial))?;
        match (self.experiment.decoder_mode(), &self.rank) {
            (Some(mode), _) => Ok(decode(self.code, mode, &pattern)?.failed),
            (None, Some(rank)) => Ok(!rank.tscc(pattern.erased())?.correctable),
            (None, None) => unreachable!("correctability runner without rank context"),
        }
    }

    /// Runs one point in the current rayon pool; returns `(trials, failures)`.
    pub fn run(&self, eps: f64, stopping: StoppingRule, seed: u64) -> Result<(u64, u64)> {
        check_probability(eps)?;
        stopping.validate()?;
        let (mut trials, mut failures) = (0u64, 0u64);
        let mut next = 0u64;
        while next < stopping.max_trials {
            let end = (next + BATCH).min(stopping.max_trials);
            let outcomes: Vec<bool> = (next..end)
                .into_par_iter()
                .map(|t| self.trial(eps, seed, t))
                .collect::<Result<_>>()?;
            for failed in outcomes {
                trials += 1;
                failures += u64::from(failed);
                if failures >= stopping.target_failures {
                    return Ok((trials, failures));
                }
            }
            next = end;
        }
        Ok((trials, failures))
    }

    /// Runs one point on a dedicated pool of `workers` threads.
    pub fn run_with_workers(&self, eps: f64, stopping: StoppingRule, seed: u64, workers: usize) -> Result<(u64, u64)> {
        if workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        pool(workers)?.install(|| self.run(eps, stopping, seed))
    }
}

pub fn run_point(
    code: &TsccCode,
    experiment: Experiment,
    eps: f64,
    stopping: StoppingRule,
    seed: u64,
) -> Result<(u64, u64)> {
    TrialRunner::new(code, experiment).run(eps, stopping, seed)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Runs every `(d, eps)` point of the config on `config.workers` threads.
/// `progress` sees each point as it completes.
pub fn sweep_with(config: &SweepConfig, mut progress: impl FnMut(&PointResult)) -> Result<SweepResult> {
    config.validate()?;
    let start = Instant::now();
    let pool = pool(config.workers)?;
    let mut points = Vec::new();
    for &d in &config.distances {
        let code = TsccCode::new(d)?;
        let runner = TrialRunner::new(&code, config.mode);
        for &eps in &config.eps_grid {
            let (trials, failures) = pool.install(|| runner.run(eps, config.stopping(), config.seed))?;
            let point = PointResult::new(d, eps, trials, failures, config.mode, config.seed);
            progress(&point);
            points.push(point);
        }
    }
    Ok(SweepResult {
        config: config.clone(),
        points,
        wall_time_s: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    sweep_with(config, |_| {})
}

/// Sweep that counts erasures failing the TSCC rank test.
pub fn correctability_sweep(
    distances: &[usize],
    eps_grid: &[f64],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SweepResult> {
    sweep(&SweepConfig {
        mode: Experiment::Correctability,
        distances: distances.to_vec(),
        eps_grid: eps_grid.to_vec(),
        max_trials: trials,
        target_failures: trials,
        seed,
        workers,
    })
}
