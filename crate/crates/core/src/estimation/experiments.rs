//! Monte Carlo harnesses checking estimators against exact values and bounds.
//!
//! Replica `r` of grid point `g` uses stream `(g << 32) | r` of the master seed;
//! results are reduced in replica order, so output does not depend on threads.

use serde::Serialize;

use crate::bounds::mad_bound_general;
use crate::chain::{stationary_distribution, StochasticMatrix};
use crate::error::{Error, Result};
use crate::estimation::{ChainSampler, MultiSkipCounter, StartMode};
use crate::mixing::{entropic_term, exact_beta, pair_matrix, t_sharp, PValue};
use crate::rng::{par_map, replica_rng};

/// Horizon used when an exact `t_sharp` is needed inside an experiment.
const T_CAP: usize = 1 << 20;

fn stream_id(grid: usize, replica: usize) -> u64 {
    ((grid as u64) << 32) | replica as u64
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One bound column of a MAD row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MadBound {
    pub p: PValue,
    /// Exact `B_p^(s)` at this `n`.
    pub bp: f64,
    /// Exact `J_p^(s)`.
    pub jp: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MadRow {
    pub n: usize,
    pub s: usize,
    pub beta: f64,
    pub mad: f64,
    pub mad_stderr: f64,
    /// Empty when `s >= n`, where the estimator is 0 and `mad = beta(s)`.
    pub bounds: Vec<MadBound>,
}

/// Empirical `E|beta_hat(s) - beta(s)|` over stationary trajectories of each length in `n_grid`.
pub fn mad_experiment(
    p: &StochasticMatrix,
    s: usize,
    n_grid: &[usize],
    replicas: usize,
    seed: u64,
    p_values: &[PValue],
) -> Result<Vec<MadRow>> {
    if s == 0 {
        return Err(Error::InvalidRange("skip must be >= 1".into()));
    }
    let pi = stationary_distribution(p)?;
    let horizon = n_grid.iter().copied().max().unwrap_or(1).max(s);
    let profile = exact_beta(p, &pi, horizon)?;
    let beta = profile.get(s).ok_or(Error::Unbounded { xi: 0.0, t_cap: horizon })?;
    let q = pair_matrix(p, &pi, s)?;
    let sampler = ChainSampler::new(p, &StartMode::Stationary)?;
    let size = p.size();
    let mut rows = Vec::with_capacity(n_grid.len());
    for (g, &n) in n_grid.iter().enumerate() {
        if s >= n {
            rows.push(MadRow { n, s, beta, mad: beta, mad_stderr: 0.0, bounds: Vec::new() });
            continue;
        }
        let errs = par_map(replicas, |r| {
            let mut rng = replica_rng(seed, stream_id(g, r));
            let mut counter = MultiSkipCounter::new(size, s);
            sampler.stream(n, &mut rng, |x| counter.push(x));
            (counter.beta_hat(s) - beta).abs()
        });
        let (mad, mad_stderr) = mean_and_stderr(&errs);
        let bounds = p_values
            .iter()
            .map(|&pv| {
                let bp = profile.b_p(pv, s, n)?;
                let jp = entropic_term(&q, pv);
                Ok(MadBound { p: pv, bp, jp, bound: mad_bound_general(bp, jp, s, n)? })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(MadRow { n, s, beta, mad, mad_stderr, bounds });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageResult {
    pub coverage: f64,
    /// `[t_sharp(xi(1+eps)), t_sharp(xi(1-eps))]`.
    pub window: (usize, usize),
    pub n: usize,
    pub replicas: usize,
    pub hits: usize,
    /// Replicas whose estimate exceeded the window's upper end.
    pub above: usize,
}

/// Fraction of stationary trajectories of length `n` with `t_hat(xi)` inside the exact window.
pub fn coverage_experiment(
    p: &StochasticMatrix,
    xi: f64,
    eps: f64,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<CoverageResult> {
    crate::estimation::check_band(xi, eps)?;
    if n < 2 {
        return Err(Error::InvalidRange(format!("n must be >= 2, got {n}")));
    }
    let pi = stationary_distribution(p)?;
    let lo = t_sharp(p, &pi, xi * (1.0 + eps), T_CAP)?;
    let hi = t_sharp(p, &pi, xi * (1.0 - eps), T_CAP)?;
    let sampler = ChainSampler::new(p, &StartMode::Stationary)?;
    let size = p.size();
    // Estimates above `hi` miss the window, so skips beyond it are never needed.
    let estimates = par_map(replicas, |r| {
        let mut rng = replica_rng(seed, stream_id(0, r));
        let mut counter = MultiSkipCounter::new(size, hi);
        sampler.stream(n, &mut rng, |x| counter.push(x));
        counter.first_below(xi)
    });
    let hits = estimates.iter().filter(|e| matches!(e, Some(t) if *t >= lo)).count();
    let above = estimates.iter().filter(|e| e.is_none()).count();
    Ok(CoverageResult { coverage: hits as f64 / replicas as f64, window: (lo, hi), n, replicas, hits, above })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationResult {
    pub n: usize,
    pub eps: f64,
    pub replicas: usize,
    /// Replicas with `(1/n) sum_t f(X_t) > eps`.
    pub exceed: usize,
    pub exceed_fraction: f64,
    pub mean: f64,
}

/// Upper-tail frequency of the empirical mean of `f` over trajectories of length `n`.
pub fn deviation_experiment(
    p: &StochasticMatrix,
    f: &[f64],
    start: &StartMode,
    eps: f64,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<DeviationResult> {
    if f.len() != p.size() {
        return Err(Error::DimensionMismatch { expected: p.size(), got: f.len() });
    }
    if n == 0 {
        return Err(Error::InvalidRange("n must be positive".into()));
    }
    let sampler = ChainSampler::new(p, start)?;
    let means = par_map(replicas, |r| {
        let mut rng = replica_rng(seed, stream_id(0, r));
        let mut total = 0.0;
        sampler.stream(n, &mut rng, |x| total += f[x as usize]);
        total / n as f64
    });
    let exceed = means.iter().filter(|m| **m > eps).count();
    Ok(DeviationResult {
        n,
        eps,
        replicas,
        exceed,
        exceed_fraction: exceed as f64 / replicas as f64,
        mean: means.iter().sum::<f64>() / replicas as f64,
    })
}

/// Sample mean and unbiased variance of `N_x = sum_{t=1}^{n-1} 1{X_t = x}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitVariance {
    pub n: usize,
    pub replicas: usize,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

pub fn visit_variance_experiment(p: &StochasticMatrix, n: usize, replicas: usize, seed: u64) -> Result<VisitVariance> {
    if n < 2 || replicas < 2 {
        return Err(Error::InvalidRange(format!("need n >= 2 and replicas >= 2, got n={n}, replicas={replicas}")));
    }
    let size = p.size();
    let sampler = ChainSampler::new(p, &StartMode::Stationary)?;
    let counts = par_map(replicas, |r| {
        let mut rng = replica_rng(seed, stream_id(0, r));
        let mut c = vec![0u64; size];
        sampler.stream(n - 1, &mut rng, |x| c[x as usize] += 1);
        c
    });
    let mut mean = vec![0.0; size];
    let mut variance = vec![0.0; size];
    for x in 0..size {
        let xs: Vec<f64> = counts.iter().map(|c| c[x] as f64).collect();
        let m = xs.iter().sum::<f64>() / replicas as f64;
        mean[x] = m;
        variance[x] = xs.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (replicas - 1) as f64;
    }
    Ok(VisitVariance { n, replicas, mean, variance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mad_rows_follow_convention_for_large_skip() {
        let p = StochasticMatrix::new(vec![vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
        let rows = mad_experiment(&p, 3, &[3, 50], 8, 1, &[PValue::Finite(2.0)]).unwrap();
        assert_eq!(rows[0].mad, rows[0].beta);
        assert!(rows[0].bounds.is_empty());
        assert_eq!(rows[1].bounds.len(), 1);
    }

    #[test]
    fn results_do_not_depend_on_replica_order() {
        let p = StochasticMatrix::new(vec![vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
        let a = deviation_experiment(&p, &[0.2, -0.8], &StartMode::Stationary, 0.05, 200, 16, 5).unwrap();
        let b = deviation_experiment(&p, &[0.2, -0.8], &StartMode::Stationary, 0.05, 200, 16, 5).unwrap();
        assert_eq!(a, b);
    }
}
