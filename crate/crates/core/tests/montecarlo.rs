use tscc::erasure::{sample_erasure, RngStream};
use tscc::montecarlo::{
    correctability_sweep, run_point, sweep, wilson, Experiment, PointResult, StoppingRule, SweepConfig, TrialRunner,
};
use tscc::{Pauli, TsccCode};

const ALL: [Experiment; 3] = [Experiment::Partial, Experiment::Maximal, Experiment::Correctability];

fn rule(max_trials: u64, target_failures: u64) -> StoppingRule {
    StoppingRule {
        max_trials,
        target_failures,
    }
}

fn point(code: &TsccCode, experiment: Experiment, eps: f64, trials: u64, seed: u64) -> PointResult {
    let (t, f) = run_point(code, experiment, eps, rule(trials, trials), seed).unwrap();
    PointResult::new(code.d(), eps, t, f, experiment, seed)
}

/// True if `a` is below `b` by more than three joint standard errors.
fn below_3_sigma(a: &PointResult, b: &PointResult) -> bool {
    let sigma = (a.std_err().powi(2) + b.std_err().powi(2)).sqrt();
    b.rate - a.rate > 3.0 * sigma
}

#[test]
fn no_erasure_never_fails() {
    let code = TsccCode::new(4).unwrap();
    for e in ALL {
        assert_eq!(run_point(&code, e, 0.0, rule(1000, 10), 3).unwrap(), (1000, 0), "{e}");
    }
}

#[test]
fn full_erasure_is_never_correctable() {
    let code = TsccCode::new(4).unwrap();
    assert_eq!(
        run_point(&code, Experiment::Correctability, 1.0, rule(500, 500), 3).unwrap(),
        (500, 500)
    );
}

#[test]
fn tally_matches_trial_by_trial_evaluation() {
    let code = TsccCode::new(8).unwrap();
    for e in ALL {
        let runner = TrialRunner::new(&code, e);
        let outcomes: Vec<bool> = (0..700).map(|t| runner.trial(0.2, 11, t).unwrap()).collect();
        let total = outcomes.iter().filter(|&&f| f).count() as u64;
        assert_eq!(runner.run(0.2, rule(700, 700), 11).unwrap(), (700, total), "{e}");

        // With a failure target the point stops at the trial that reaches it.
        let target = (total / 2).max(1);
        let stop = outcomes
            .iter()
            .scan(0u64, |acc, &f| {
                *acc += u64::from(f);
                Some(*acc)
            })
            .position(|acc| acc == target)
            .unwrap() as u64;
        assert_eq!(
            runner.run(0.2, rule(700, target), 11).unwrap(),
            (stop + 1, target),
            "{e}"
        );
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let code = TsccCode::new(8).unwrap();
    for e in ALL {
        let runner = TrialRunner::new(&code, e);
        let stopping = rule(2000, 150);
        let base = runner.run_with_workers(0.25, stopping, 9, 1).unwrap();
        for w in [2, 4, 7] {
            assert_eq!(
                runner.run_with_workers(0.25, stopping, 9, w).unwrap(),
                base,
                "{e} workers={w}"
            );
        }
    }
}

#[test]
fn sweeps_are_reproducible() {
    let config = SweepConfig {
        mode: Experiment::Maximal,
        distances: vec![4, 8],
        eps_grid: vec![0.2, 0.4],
        max_trials: 600,
        target_failures: 100,
        seed: 21,
        workers: 3,
    };
    let a = sweep(&config).unwrap();
    let b = sweep(&SweepConfig {
        workers: 1,
        ..config.clone()
    })
    .unwrap();
    assert_eq!(a.points, b.points);
    assert_eq!(a.points.len(), 4);
    assert_eq!(a.config, config);
    let other_seed = sweep(&SweepConfig { seed: 22, ..config }).unwrap();
    assert_ne!(a.points, other_seed.points);
}

#[test]
fn zero_workers_is_rejected() {
    let code = TsccCode::new(4).unwrap();
    let runner = TrialRunner::new(&code, Experiment::Partial);
    assert!(runner.run_with_workers(0.1, rule(10, 10), 0, 0).is_err());
    assert!(correctability_sweep(&[4], &[0.1], 10, 0, 0).is_err());
}

#[test]
fn invalid_points_are_rejected() {
    let code = TsccCode::new(4).unwrap();
    assert!(run_point(&code, Experiment::Partial, 1.5, rule(10, 10), 0).is_err());
    assert!(run_point(&code, Experiment::Partial, f64::NAN, rule(10, 10), 0).is_err());
    assert!(run_point(&code, Experiment::Partial, 0.1, rule(0, 10), 0).is_err());
    assert!(run_point(&code, Experiment::Partial, 0.1, rule(10, 0), 0).is_err());
}

#[test]
fn erasure_statistics_at_one_half() {
    let n = 3 * 8 * 8;
    let samples = 4000u64;
    let (mut erased, mut counts) = (0u64, [0u64; 4]);
    for t in 0..samples {
        let p = sample_erasure(n, 0.5, &mut RngStream::new(31, t)).unwrap();
        erased += p.len() as u64;
        for &q in p.erased() {
            counts[Pauli::ALL.iter().position(|&x| x == p.error().get(q)).unwrap()] += 1;
        }
    }
    let total = (samples * n as u64) as f64;
    let sigma = (total * 0.25).sqrt();
    assert!((erased as f64 - total / 2.0).abs() < 4.0 * sigma, "{erased} of {total}");
    for c in counts {
        let sigma = (erased as f64 * 0.25 * 0.75).sqrt();
        assert!((c as f64 - erased as f64 / 4.0).abs() < 4.0 * sigma, "{counts:?}");
    }
}

#[test]
fn wilson_interval_matches_closed_form() {
    for (f, n) in [(0u64, 10u64), (3, 10), (10, 10), (500, 10_000), (1, 1)] {
        let (p, nf, z) = (f as f64 / n as f64, n as f64, 1.96f64);
        let center = (p + z * z / (2.0 * nf)) / (1.0 + z * z / nf);
        let half = z / (1.0 + z * z / nf) * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt();
        let (lo, hi) = wilson(f, n);
        assert!((lo - (center - half).max(0.0)).abs() < 1e-4, "{f}/{n}");
        assert!((hi - (center + half).min(1.0)).abs() < 1e-4, "{f}/{n}");
        assert!(lo <= p && p <= hi);
    }
}

#[test]
fn partial_rate_grows_with_erasure_rate() {
    let code = TsccCode::new(8).unwrap();
    let low = point(&code, Experiment::Partial, 0.10, 10_000, 5);
    let high = point(&code, Experiment::Partial, 0.17, 10_000, 5);
    assert!(below_3_sigma(&low, &high), "{} vs {}", low.rate, high.rate);
}

#[test]
fn maximal_beats_partial_at_d4() {
    let code = TsccCode::new(4).unwrap();
    let maximal = point(&code, Experiment::Maximal, 0.30, 10_000, 5);
    let partial = point(&code, Experiment::Partial, 0.30, 10_000, 5);
    assert!(
        below_3_sigma(&maximal, &partial),
        "{} vs {}",
        maximal.rate,
        partial.rate
    );
}

#[test]
fn maximal_rates_agree_across_distances_at_44_percent() {
    let d4 = point(&TsccCode::new(4).unwrap(), Experiment::Maximal, 0.44, 10_000, 5);
    let d8 = point(&TsccCode::new(8).unwrap(), Experiment::Maximal, 0.44, 10_000, 5);
    let sigma = (d4.std_err().powi(2) + d8.std_err().powi(2)).sqrt();
    assert!(
        (d4.rate - d8.rate).abs() <= 3.0 * sigma,
        "d=4 {:.4} vs d=8 {:.4}, joint sigma {:.4}",
        d4.rate,
        d8.rate,
        sigma
    );
}
