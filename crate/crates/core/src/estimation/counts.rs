use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::Trajectory;

/// Visit and pair counts of the `s`-skipped trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedCounts {
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub visit: BTreeMap<u32, u64>,
    pub pair: BTreeMap<(u32, u32), u64>,
}

pub fn skipped_counts(traj: &Trajectory, s: usize) -> Result<SkippedCounts> {
    skipped_counts_states(traj.states(), s)
}

pub fn skipped_counts_states(states: &[u32], s: usize) -> Result<SkippedCounts> {
    let n = states.len();
    if s == 0 || s >= n {
        return Err(Error::SkipTooLarge { s, n });
    }
    let m = (n - 1) / s;
    let mut visit = BTreeMap::new();
    let mut pair = BTreeMap::new();
    for t in 1..=m {
        let (a, b) = (states[s * (t - 1)], states[s * t]);
        *visit.entry(a).or_insert(0) += 1;
        *pair.entry((a, b)).or_insert(0) += 1;
    }
    Ok(SkippedCounts { s, n, m, visit, pair })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationResult {
    pub beta_hat: f64,
    pub s: usize,
    pub n: usize,
    pub m: usize,
}

pub fn beta_hat(counts: &SkippedCounts) -> EstimationResult {
    let m = counts.m as f64;
    let visit = |x: &u32| counts.visit.get(x).copied().unwrap_or(0) as f64;
    // Unseen pairs contribute N_x N_x' / m; over all pairs these products sum to m.
    let mut seen_abs = 0.0;
    let mut seen_expected = 0.0;
    for ((a, b), &c) in &counts.pair {
        let e = visit(a) * visit(b) / m;
        seen_abs += (c as f64 - e).abs();
        seen_expected += e;
    }
    let value = ((seen_abs + (m - seen_expected).max(0.0)) / (2.0 * m)).clamp(0.0, 1.0);
    EstimationResult { beta_hat: value, s: counts.s, n: counts.n, m: counts.m }
}

/// Dense counts over states `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseCounts {
    pub size: usize,
    pub m: u64,
    pub visit: Vec<u64>,
    pub pair: Vec<u64>,
}

impl DenseCounts {
    pub fn new(size: usize) -> Self {
        DenseCounts { size, m: 0, visit: vec![0; size], pair: vec![0; size * size] }
    }

    #[inline]
    pub fn add(&mut self, a: usize, b: usize) {
        self.m += 1;
        self.visit[a] += 1;
        self.pair[a * self.size + b] += 1;
    }

    pub fn beta_hat(&self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let m = self.m as f64;
        let mut total = 0.0;
        for a in 0..self.size {
            let va = self.visit[a] as f64;
            for b in 0..self.size {
                total += (self.pair[a * self.size + b] as f64 - va * self.visit[b] as f64 / m).abs();
            }
        }
        (total / (2.0 * m)).clamp(0.0, 1.0)
    }
}

/// `beta_hat(s)` of a state sequence, zero for `s >= n`.
pub fn beta_hat_states(states: &[u32], s: usize) -> f64 {
    let n = states.len();
    if s >= n || s == 0 {
        return 0.0;
    }
    let size = states.iter().max().map_or(0, |&x| x as usize + 1);
    if size <= 64 {
        let mut c = DenseCounts::new(size);
        for t in 1..=(n - 1) / s {
            c.add(states[s * (t - 1)] as usize, states[s * t] as usize);
        }
        c.beta_hat()
    } else {
        beta_hat(&skipped_counts_states(states, s).expect("s < n")).beta_hat
    }
}

/// Streams a trajectory once and keeps dense counts for every skip in `1..=s_max`.
#[derive(Debug, Clone)]
pub struct MultiSkipCounter {
    s_max: usize,
    seen: usize,
    ring: Vec<u32>,
    counts: Vec<DenseCounts>,
}

impl MultiSkipCounter {
    pub fn new(size: usize, s_max: usize) -> Self {
        MultiSkipCounter {
            s_max,
            seen: 0,
            ring: vec![0; s_max + 1],
            counts: (0..s_max).map(|_| DenseCounts::new(size)).collect(),
        }
    }

    /// Appends `X_j` with `j = seen + 1`.
    #[inline]
    pub fn push(&mut self, x: u32) {
        let len = self.ring.len();
        let j0 = self.seen;
        self.ring[j0 % len] = x;
        for s in 1..=self.s_max.min(j0) {
            if j0 % s == 0 {
                let a = self.ring[(j0 - s) % len];
                self.counts[s - 1].add(a as usize, x as usize);
            }
        }
        self.seen += 1;
    }

    pub fn len(&self) -> usize {
        self.seen
    }

    pub fn is_empty(&self) -> bool {
        self.seen == 0
    }

    /// `beta_hat(s)`, zero for `s >= n`.
    pub fn beta_hat(&self, s: usize) -> f64 {
        assert!(s >= 1 && s <= self.s_max, "skip {s} not tracked");
        if s >= self.seen {
            return 0.0;
        }
        self.counts[s - 1].beta_hat()
    }

    pub fn counts(&self, s: usize) -> &DenseCounts {
        &self.counts[s - 1]
    }

    /// `t_hat(xi)` if it is at most `s_max`.
    pub fn first_below(&self, xi: f64) -> Option<usize> {
        (1..=self.s_max).find(|&s| self.beta_hat(s) <= xi)
    }
}
