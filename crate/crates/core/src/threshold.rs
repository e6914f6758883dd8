//! Threshold estimation from failure-rate curves.
//!
//! For each pair of distances the crossing is located where the log-odds
//! difference between the larger and the smaller code turns from negative
//! to positive. Around that bracket each curve gets a weighted straight-line
//! fit in log-odds versus eps, and the two lines are intersected. The
//! estimate is the mean over pairs; its interval comes from a parametric
//! bootstrap that redraws every point's failure count.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::PointResult;

pub const DEFAULT_BOOTSTRAP: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairCrossing {
    pub d_small: usize,
    pub d_large: usize,
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThresholdEstimate {
    Crossing {
        estimate: f64,
        ci_lo: f64,
        ci_hi: f64,
        pairs: Vec<PairCrossing>,
    },
    NoCrossing,
}

impl ThresholdEstimate {
    pub fn estimate(&self) -> Option<f64> {
        match self {
            ThresholdEstimate::Crossing { estimate, .. } => Some(*estimate),
            ThresholdEstimate::NoCrossing => None,
        }
    }
}

/// `(eps, trials, failures)` in eps order.
type Curve = Vec<(f64, u64, u64)>;

fn curves(points: &[PointResult]) -> BTreeMap<usize, Curve> {
    let mut out: BTreeMap<usize, Curve> = BTreeMap::new();
    for p in points {
        out.entry(p.d).or_default().push((p.eps, p.trials, p.failures));
    }
    for c in out.values_mut() {
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

/// Log-odds with a half-count correction, and its inverse-variance weight.
fn logit(trials: u64, failures: u64) -> (f64, f64) {
    let n = trials as f64 + 1.0;
    let p = (failures as f64 + 0.5) / n;
    ((p / (1.0 - p)).ln(), n * p * (1.0 - p))
}

/// Weighted least squares line through `(x, y, w)`; `None` if degenerate.
fn fit_line(pts: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    if pts.len() < 2 || sw <= 0.0 {
        return None;
    }
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}

/// Crossing of two curves sampled on the same eps grid.
fn pair_crossing(small: &[(f64, u64, u64)], large: &[(f64, u64, u64)]) -> Option<f64> {
    let ls: Vec<(f64, f64)> = small.iter().map(|&(_, n, f)| logit(n, f)).collect();
    let ll: Vec<(f64, f64)> = large.iter().map(|&(_, n, f)| logit(n, f)).collect();
    // Difference in units of its standard error.
    let z: Vec<f64> = (0..small.len())
        .map(|i| (ll[i].0 - ls[i].0) / (1.0 / ll[i].1 + 1.0 / ls[i].1).sqrt())
        .collect();
    // Consecutive points with a nonzero difference; points where the
    // curves coincide exactly sit inside the bracket.
    let nonzero: Vec<usize> = (0..z.len()).filter(|&i| z[i] != 0.0).collect();
    let (i, j) = nonzero
        .windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|&(i, j)| z[i] < 0.0 && z[j] > 0.0)
        .max_by(|a, b| (z[a.1] - z[a.0]).total_cmp(&(z[b.1] - z[b.0])))?;

    let lo = i.saturating_sub(1);
    let hi = (j + 1).min(small.len() - 1);
    let window =
        |l: &[(f64, f64)]| -> Vec<(f64, f64, f64)> { (lo..=hi).map(|k| (small[k].0, l[k].0, l[k].1)).collect() };
    let (e0, e1) = (small[i].0, small[j].0);
    if let (Some((a1, b1)), Some((a2, b2))) = (fit_line(&window(&ls)), fit_line(&window(&ll))) {
        if b2 != b1 {
            let x = (a1 - a2) / (b2 - b1);
            if x >= e0 && x <= e1 {
                return Some(x);
            }
        }
    }
    // Fall back to interpolating the log-odds difference inside the bracket.
    let d0 = ll[i].0 - ls[i].0;
    let d1 = ll[j].0 - ls[j].0;
    Some(e0 + (e1 - e0) * (-d0) / (d1 - d0))
}

fn pairs_of(curves: &BTreeMap<usize, Curve>) -> Result<Vec<PairCrossing>> {
    let ds: Vec<usize> = curves.keys().copied().collect();
    let mut out = Vec::new();
    for (i, &a) in ds.iter().enumerate() {
        for &b in &ds[i + 1..] {
            let (ca, cb) = (&curves[&a], &curves[&b]);
            let grid_a: Vec<f64> = ca.iter().map(|p| p.0).collect();
            let grid_b: Vec<f64> = cb.iter().map(|p| p.0).collect();
            if grid_a != grid_b {
                return Err(Error::Config(format!("distances {a} and {b} use different eps grids")));
            }
            if let Some(eps) = pair_crossing(ca, cb) {
                out.push(PairCrossing {
                    d_small: a,
                    d_large: b,
                    eps,
                });
            }
        }
    }
    Ok(out)
}

fn mean(pairs: &[PairCrossing]) -> f64 {
    pairs.iter().map(|p| p.eps).sum::<f64>() / pairs.len() as f64
}

/// Estimates the threshold with `bootstrap` parametric resamples.
pub fn estimate_threshold(points: &[PointResult], bootstrap: usize, seed: u64) -> Result<ThresholdEstimate> {
    let curves = curves(points);
    if curves.len() < 2 {
        return Err(Error::Config(
            "threshold estimation needs at least two distances".into(),
        ));
    }
    if curves.values().any(|c| c.len() < 3) {
        return Err(Error::Config(
            "threshold estimation needs at least three eps points per distance".into(),
        ));
    }
    let pairs = pairs_of(&curves)?;
    if pairs.is_empty() {
        return Ok(ThresholdEstimate::NoCrossing);
    }
    let estimate = mean(&pairs);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(bootstrap);
    for _ in 0..bootstrap {
        let mut resampled = curves.clone();
        for c in resampled.values_mut() {
            for p in c.iter_mut() {
                if p.1 > 0 {
                    let dist = Binomial::new(p.1, p.2 as f64 / p.1 as f64).expect("rate within [0, 1]");
                    p.2 = dist.sample(&mut rng);
                }
            }
        }
        let rep = pairs_of(&resampled)?;
        if !rep.is_empty() {
            samples.push(mean(&rep));
        }
    }
    let (ci_lo, ci_hi) = if samples.is_empty() {
        (estimate, estimate)
    } else {
        samples.sort_by(f64::total_cmp);
        let at = |q: f64| samples[((samples.len() - 1) as f64 * q).round() as usize];
        (at(0.025).min(estimate), at(0.975).max(estimate))
    };
    Ok(ThresholdEstimate::Crossing {
        estimate,
        ci_lo,
        ci_hi,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::Experiment;

    fn synthetic(ds: &[usize], grid: &[f64], rate: impl Fn(usize, f64) -> f64) -> Vec<PointResult> {
        let n = 100_000u64;
        let mut out = Vec::new();
        for &d in ds {
            for &eps in grid {
                let f = (rate(d, eps) * n as f64).round() as u64;
                out.push(PointResult::new(d, eps, n, f, Experiment::Partial, 0));
            }
        }
        out
    }

    fn sigmoid(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    #[test]
    fn recovers_an_exact_crossing() {
        let grid: Vec<f64> = (0..11).map(|i| 0.10 + 0.02 * i as f64).collect();
        let pts = synthetic(&[4, 8, 16], &grid, |d, e| sigmoid((e - 0.2) * 3.0 * d as f64));
        let est = estimate_threshold(&pts, 100, 1).unwrap();
        let ThresholdEstimate::Crossing {
            estimate,
            ci_lo,
            ci_hi,
            pairs,
        } = est
        else {
            panic!("expected a crossing");
        };
        assert_eq!(pairs.len(), 3);
        assert!((estimate - 0.2).abs() < 2e-3, "{estimate}");
        assert!(ci_lo <= estimate && estimate <= ci_hi);
        assert!(ci_hi - ci_lo < 0.02);
    }

    #[test]
    fn separated_curves_do_not_cross() {
        let grid = [0.1, 0.2, 0.3, 0.4];
        let pts = synthetic(&[4, 8], &grid, |d, e| sigmoid((e - 0.25) * 10.0) / d as f64);
        assert_eq!(estimate_threshold(&pts, 10, 1).unwrap(), ThresholdEstimate::NoCrossing);
    }

    #[test]
    fn rejects_thin_input() {
        let pts = synthetic(&[4], &[0.1, 0.2, 0.3], |_, e| e);
        assert!(estimate_threshold(&pts, 10, 1).is_err());
        let pts = synthetic(&[4, 8], &[0.1, 0.2], |_, e| e);
        assert!(estimate_threshold(&pts, 10, 1).is_err());
    }

    #[test]
    fn bootstrap_is_seeded() {
        let grid: Vec<f64> = (0..6).map(|i| 0.15 + 0.02 * i as f64).collect();
        let pts: Vec<PointResult> = synthetic(&[4, 8], &grid, |d, e| sigmoid((e - 0.2) * 4.0 * d as f64))
            .into_iter()
            .map(|mut p| {
                p.trials = 500;
                p.failures = (p.rate * 500.0).round() as u64;
                p
            })
            .collect();
        assert_eq!(
            estimate_threshold(&pts, 50, 7).unwrap(),
            estimate_threshold(&pts, 50, 7).unwrap()
        );
    }
}
