//! Acceptance criteria. Each test prints one PASS/FAIL line to the real
//! stdout (not the captured test output) and then asserts the same verdict.

use std::io::Write;
use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::Rng;
use tscc::correctability::Correctability;
use tscc::decoder::{decode, decode_with, extract_syndrome, is_logical_failure, DecodeOptions};
use tscc::erasure::{sample_erasure, ErasurePattern, RngStream};
use tscc::gf2::BitMatrix;
use tscc::montecarlo::{run_point, sweep, Experiment, StoppingRule, SweepConfig, SweepResult, TrialRunner};
use tscc::schedule::{build_schedule, validate_schedule, Mode};
use tscc::threshold::{estimate_threshold, ThresholdEstimate, DEFAULT_BOOTSTRAP};
use tscc::verify::verify;
use tscc::{CheckType, Pauli, PauliOperator, TsccCode};

fn report(label: &str, passed: bool, detail: &str) {
    let line = format!("{label}: {} - {detail}\n", if passed { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

/// Prints the verdict for `label` and fails the test with the first problem.
fn conclude(label: &str, problems: &[String], summary: &str) {
    let detail = if problems.is_empty() {
        summary.to_string()
    } else {
        format!("{}; {summary}", problems.join("; "))
    };
    report(label, problems.is_empty(), &detail);
    assert!(problems.is_empty(), "{label}: {detail}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn code(d: usize) -> &'static TsccCode {
    static C4: OnceLock<TsccCode> = OnceLock::new();
    static C8: OnceLock<TsccCode> = OnceLock::new();
    match d {
        4 => C4.get_or_init(|| TsccCode::new(4).unwrap()),
        8 => C8.get_or_init(|| TsccCode::new(8).unwrap()),
        _ => unreachable!(),
    }
}

fn structural(d: usize) -> Vec<String> {
    let mut problems = Vec::new();
    let report = verify(d);
    problems.extend(report.failures().map(|e| format!("d={d} {}: {}", e.name, e.detail)));
    if !report.passed() {
        return problems;
    }
    let code = TsccCode::new(d).unwrap();
    let f = d * d / 2;
    let k = code.logicals.len() / 2;
    let s = code.stabilizers().rank();
    let gauge = code.gauge.rank();
    // 2r + s = rank(G) and n = k + r + s.
    let r = (gauge - s) / 2;
    let expect = [
        (code.n(), 3 * d * d),
        (k, 2),
        (r, 2 * d * d),
        (s, 2 * f - 2),
        (code.n(), k + r + s),
    ];
    for (i, (got, want)) in expect.iter().enumerate() {
        if got != want {
            problems.push(format!("d={d} parameter {i}: {got} != {want}"));
        }
    }
    problems
}

#[test]
fn criterion_1_structural_exactness() {
    let problems: Vec<String> = [4, 8].into_iter().flat_map(structural).collect();
    conclude(
        "criterion 1 [d=4,8]",
        &problems,
        "n=3d^2, k=2, r=2d^2, s=2|F|-2 by rank; dependencies and pairing exact",
    );
}

#[test]
fn criterion_1_smallest_distance() {
    conclude(
        "criterion 1 [d=2]",
        &structural(2),
        "d=2 must build and pass every structural check",
    );
}

#[test]
fn criterion_2_decomposition_exactness() {
    let mut problems = Vec::new();
    let mut recipes = 0;
    for d in [4, 8] {
        let code = code(d);
        for mode in [Mode::Partial, Mode::Maximal] {
            match build_schedule(code, mode).and_then(|s| validate_schedule(code, &s).map(|_| s)) {
                Ok(s) => recipes += s.recipes.len(),
                Err(e) => problems.push(format!("d={d} {mode}: {e}")),
            }
        }
        for face in 0..code.num_faces() {
            let x_stack = code.hg.faces[face].color.prev();
            let mut product = code.cc_stab(x_stack, face, CheckType::X).clone();
            product *= code.cc_stab(x_stack.next(), face, CheckType::Y);
            product *= code.cc_stab(x_stack.prev(), face, CheckType::Y);
            if product != code.w2[face] {
                problems.push(format!("d={d} hypercycle identity fails on face {face}"));
            }
        }
    }
    conclude(
        "criterion 2",
        &problems,
        &format!("{recipes} recipes exact and sequenced at d=4,8; hypercycle identity on every face"),
    );
}

#[test]
fn criterion_3_measurement_counts() {
    let mut problems = Vec::new();
    for d in [4, 8] {
        let code = code(d);
        let f = code.num_faces();
        for (mode, third) in [(Mode::Partial, 4 * f), (Mode::Maximal, 3 * f)] {
            let s = build_schedule(code, mode).unwrap();
            let sizes = s.rounds.each_ref().map(Vec::len);
            if sizes != [3 * f, 3 * f, third] {
                problems.push(format!("d={d} {mode} rounds {sizes:?}"));
            }
            if mode == Mode::Maximal && s.independent_checks(code) != 6 * f - 12 {
                problems.push(format!(
                    "d={d} maximal fixes {} independent checks",
                    s.independent_checks(code)
                ));
            }
        }
    }
    conclude(
        "criterion 3",
        &problems,
        "3|F| XX, 3|F| YY, 4|F| ZZ / 3|F| four-body; 6|F|-12 fixed checks at d=4,8",
    );
}

#[test]
fn criterion_4_rank_test_matches_oracle() {
    let code = code(4);
    let c = Correctability::new(code);
    let mut rng = RngStream::new(4, 0);
    let (mut agree, mut uncorrectable) = (0, 0);
    let mut problems = Vec::new();
    for _ in 0..10_000 {
        let size = rng.rng().random_range(0..=10);
        let mut e = sample(rng.rng(), code.n(), size).into_vec();
        e.sort_unstable();
        let rank = c.tscc(&e).unwrap().correctable;
        let oracle = c.brute_force(&e).unwrap();
        if rank == oracle {
            agree += 1;
        } else if problems.len() < 3 {
            problems.push(format!("{e:?}: rank {rank}, oracle {oracle}"));
        }
        uncorrectable += usize::from(!oracle);
    }
    conclude(
        "criterion 4",
        &problems,
        &format!("{agree}/10000 agree ({uncorrectable} uncorrectable)"),
    );
}

/// The partial grid brackets its crossing; the maximal grid extends it so
/// that every partial point has a maximal counterpart.
fn threshold_grid(mode: Experiment) -> Vec<f64> {
    let mut grid = vec![0.14, 0.16, 0.18, 0.19, 0.20, 0.21, 0.22, 0.23, 0.24, 0.26, 0.30];
    if mode == Experiment::Maximal {
        grid.extend([0.36, 0.40, 0.42, 0.44, 0.46, 0.48, 0.50, 0.52, 0.56]);
    }
    grid
}

fn decoder_sweep(mode: Experiment) -> &'static SweepResult {
    static PARTIAL: OnceLock<SweepResult> = OnceLock::new();
    static MAXIMAL: OnceLock<SweepResult> = OnceLock::new();
    let cell = if mode == Experiment::Partial {
        &PARTIAL
    } else {
        &MAXIMAL
    };
    cell.get_or_init(|| {
        let stopping = StoppingRule::default();
        sweep(&SweepConfig {
            mode,
            distances: vec![4, 8, 16],
            eps_grid: threshold_grid(mode),
            max_trials: stopping.max_trials,
            target_failures: stopping.target_failures,
            seed: 2024,
            workers: workers(),
        })
        .unwrap()
    })
}

fn threshold_problems(result: &SweepResult, center: f64, tol: f64, problems: &mut Vec<String>) -> String {
    match estimate_threshold(&result.points, DEFAULT_BOOTSTRAP, 1).unwrap() {
        ThresholdEstimate::Crossing {
            estimate,
            ci_lo,
            ci_hi,
            pairs,
        } => {
            let text = format!(
                "crossing {:.2}% (95% CI {:.2}-{:.2}%, pairs {}) vs {:.1} +/- {:.1}%",
                100.0 * estimate,
                100.0 * ci_lo,
                100.0 * ci_hi,
                pairs.len(),
                100.0 * center,
                100.0 * tol
            );
            if (estimate - center).abs() > tol {
                problems.push("estimate outside tolerance".into());
            }
            text
        }
        ThresholdEstimate::NoCrossing => {
            problems.push("no crossing in range".into());
            "no crossing".into()
        }
    }
}

#[test]
fn criterion_5_correctability_threshold() {
    let grid: Vec<f64> = (12..=20).map(|i| i as f64 / 100.0).chain([0.22]).collect();
    let result = tscc::montecarlo::correctability_sweep(&[4, 8, 16], &grid, 10_000, 2024, workers()).unwrap();
    let mut problems = Vec::new();
    let text = threshold_problems(&result, 0.165, 0.015, &mut problems);
    conclude("criterion 5", &problems, &text);
}

#[test]
fn criterion_6_partial_threshold() {
    let mut problems = Vec::new();
    let text = threshold_problems(decoder_sweep(Experiment::Partial), 0.177, 0.020, &mut problems);
    conclude("criterion 6", &problems, &text);
}

#[test]
fn criterion_7_maximal_threshold() {
    let mut problems = Vec::new();
    let maximal = decoder_sweep(Experiment::Maximal);
    let partial = decoder_sweep(Experiment::Partial);
    let text = threshold_problems(maximal, 0.44, 0.03, &mut problems);
    let mut compared = 0;
    for m in &maximal.points {
        let Some(p) = partial.points.iter().find(|p| p.d == m.d && p.eps == m.eps) else {
            continue;
        };
        compared += 1;
        let sigma = (m.std_err().powi(2) + p.std_err().powi(2)).sqrt();
        if m.rate > p.rate + 3.0 * sigma {
            problems.push(format!(
                "d={} eps={}: maximal {:.4} > partial {:.4} + 3 sigma",
                m.d, m.eps, m.rate, p.rate
            ));
        }
    }
    conclude(
        "criterion 7",
        &problems,
        &format!("{text}; maximal <= partial within 3 sigma at {compared} shared points"),
    );
}

#[test]
fn criterion_8_exhaustive_small_cases() {
    let code = code(4);
    let c = Correctability::new(code);
    let n = code.n();
    let mut problems = Vec::new();
    let (mut singles, mut pairs) = (0, 0);
    for q in 0..n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let pat = ErasurePattern::new(n, [q], PauliOperator::single(n, q, p)).unwrap();
            for mode in [Mode::Partial, Mode::Maximal] {
                singles += 1;
                if decode(code, mode, &pat).unwrap().failed {
                    problems.push(format!("{mode} fails on {p} at qubit {q}"));
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !c.tscc(&[a, b]).unwrap().correctable {
                continue;
            }
            for pa in [Pauli::X, Pauli::Y, Pauli::Z] {
                for pb in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let e = PauliOperator::from_paulis(n, [(a, pa), (b, pb)]);
                    let pat = ErasurePattern::new(n, [a, b], e).unwrap();
                    for mode in [Mode::Partial, Mode::Maximal] {
                        pairs += 1;
                        if decode(code, mode, &pat).unwrap().failed {
                            problems.push(format!("{mode} fails on {pa}{a} {pb}{b}"));
                        }
                    }
                }
            }
        }
    }
    problems.truncate(5);
    conclude(
        "criterion 8",
        &problems,
        &format!("{singles} single-qubit and {pairs} correctable weight-2 decodes succeed"),
    );
}

fn syndrome_linearity(problems: &mut Vec<String>) {
    let code = code(8);
    for t in 0..300 {
        let a = sample_erasure(code.n(), 0.3, &mut RngStream::new(91, t)).unwrap();
        let b = sample_erasure(code.n(), 0.3, &mut RngStream::new(92, t)).unwrap();
        for mode in [Mode::Partial, Mode::Maximal] {
            let sa = extract_syndrome(code, mode, a.error());
            let sb = extract_syndrome(code, mode, b.error());
            let sab = extract_syndrome(code, mode, &(a.error() * b.error()));
            let mut expect = sa.clone();
            for (x, y) in [(&mut expect.w1, &sb.w1), (&mut expect.w2, &sb.w2)] {
                x.xor_assign(y);
            }
            for c in 0..3 {
                expect.cc_x[c].xor_assign(&sb.cc_x[c]);
                expect.cc_z[c].xor_assign(&sb.cc_z[c]);
            }
            if expect != sab {
                problems.push(format!("syndrome not linear (trial {t}, {mode})"));
                return;
            }
        }
    }
}

fn gauge_degeneracy(problems: &mut Vec<String>) {
    let code = code(8);
    let space = code.gauge.row_space();
    let mut rng = RngStream::new(93, 0);
    for _ in 0..200 {
        let mut g = PauliOperator::identity(code.n());
        for (i, op) in code.gauge.iter().enumerate() {
            if rng.rng().random_bool(0.5) || i % 97 == 0 {
                g *= op;
            }
        }
        if is_logical_failure(code, &g) {
            problems.push("a gauge element counts as a logical failure".into());
            return;
        }
    }
    for t in 0..300 {
        let p = sample_erasure(code.n(), 0.2, &mut RngStream::new(94, t)).unwrap();
        for mode in [Mode::Partial, Mode::Maximal] {
            let out = decode(code, mode, &p).unwrap();
            let residual = p.error() * &out.estimate;
            if space.contains(&residual.symplectic()) && out.failed {
                problems.push(format!("gauge residual reported as failure (trial {t}, {mode})"));
                return;
            }
        }
    }
}

fn cluster_order(problems: &mut Vec<String>) {
    let code = code(8);
    for t in 0..300 {
        let p = sample_erasure(code.n(), 0.2, &mut RngStream::new(95, t)).unwrap();
        for mode in [Mode::Partial, Mode::Maximal] {
            let base = decode(code, mode, &p).unwrap().failed;
            let opts = [
                DecodeOptions {
                    reverse_clusters: true,
                    z_first: false,
                },
                DecodeOptions {
                    reverse_clusters: false,
                    z_first: mode == Mode::Maximal,
                },
            ];
            for o in opts {
                if decode_with(code, mode, &p, o).unwrap().failed != base {
                    problems.push(format!(
                        "verdict depends on processing order (trial {t}, {mode}, {o:?})"
                    ));
                    return;
                }
            }
        }
    }
}

fn rank_subadditivity(problems: &mut Vec<String>) {
    let mut rng = RngStream::new(96, 0);
    for _ in 0..300 {
        let (rows, cols) = (rng.rng().random_range(1..40), rng.rng().random_range(2..70));
        let bits: Vec<Vec<bool>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.rng().random_bool(0.3)).collect())
            .collect();
        let m = BitMatrix::from_bools(&bits);
        let split: Vec<bool> = (0..cols).map(|_| rng.rng().random_bool(0.5)).collect();
        let s: Vec<usize> = (0..cols).filter(|&c| split[c]).collect();
        let rest: Vec<usize> = (0..cols).filter(|&c| !split[c]).collect();
        let sum = m.column_submatrix(&s).unwrap().rank() + m.column_submatrix(&rest).unwrap().rank();
        if sum < m.rank() {
            problems.push("column-split ranks fall below the full rank".into());
            return;
        }
    }
}

fn correctability_monotone(problems: &mut Vec<String>) {
    let code = code(8);
    let c = Correctability::new(code);
    let mut rng = RngStream::new(97, 0);
    for _ in 0..300 {
        let size = rng.rng().random_range(0..60);
        let mut big = sample(rng.rng(), code.n(), size).into_vec();
        big.sort_unstable();
        let small: Vec<usize> = big.iter().copied().filter(|_| rng.rng().random_bool(0.7)).collect();
        if c.tscc(&big).unwrap().correctable && !c.tscc(&small).unwrap().correctable {
            problems.push("a subset of a correctable erasure is uncorrectable".into());
            return;
        }
    }
}

fn worker_independence(problems: &mut Vec<String>) {
    let code = code(8);
    for mode in [Experiment::Partial, Experiment::Maximal, Experiment::Correctability] {
        let runner = TrialRunner::new(code, mode);
        let stopping = StoppingRule {
            max_trials: 1500,
            target_failures: 300,
        };
        let outcomes: Vec<(u64, u64)> = [1, 2, 3, 8]
            .into_iter()
            .map(|w| runner.run_with_workers(0.2, stopping, 5, w).unwrap())
            .collect();
        if outcomes.windows(2).any(|w| w[0] != w[1]) {
            problems.push(format!("{mode} counts vary with worker count: {outcomes:?}"));
        }
        if run_point(code, mode, 0.2, stopping, 5).unwrap() != outcomes[0] {
            problems.push(format!("{mode} run_point differs from the pooled run"));
        }
    }
}

#[test]
fn criterion_9_property_suites() {
    let mut problems = Vec::new();
    syndrome_linearity(&mut problems);
    gauge_degeneracy(&mut problems);
    cluster_order(&mut problems);
    rank_subadditivity(&mut problems);
    correctability_monotone(&mut problems);
    worker_independence(&mut problems);
    conclude(
        "criterion 9",
        &problems,
        "syndrome linearity, gauge degeneracy, cluster order, rank sub-additivity, correctability monotonicity, worker-count independence",
    );
}
