use std::path::{Path, PathBuf};

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{stationary_distribution, ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::rng::replica_rng;

/// Law of `X_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum StartMode {
    Stationary,
    Point(usize),
    Custom(ProbabilityVector),
}

/// Trajectory metadata, also the JSON sidecar of the binary format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub seed: u64,
    pub start_mode: StartMode,
    /// Checksum of the generating matrix.
    pub chain_checksum: String,
    /// `||pi P - pi||_1` of the solved stationary law, for stationary starts.
    pub stationary_residual: Option<f64>,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<u32>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    /// Wraps imported states; every state must index into `p`.
    pub fn from_states(states: Vec<u32>, p: &StochasticMatrix, seed: u64, start_mode: StartMode) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidRange(format!("a trajectory needs n >= 2, got {}", states.len())));
        }
        if let Some(bad) = states.iter().find(|&&x| x as usize >= p.size()) {
            return Err(Error::InvalidRange(format!("state {bad} out of range for size {}", p.size())));
        }
        let meta = TrajectoryMeta {
            seed,
            start_mode,
            chain_checksum: p.checksum(),
            stationary_residual: None,
            length: states.len(),
        };
        Ok(Trajectory { states, meta })
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }
}

/// Per-row samplers for a fixed matrix and start law.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    rows: Vec<WeightedIndex<f64>>,
    start: WeightedIndex<f64>,
    start_mode: StartMode,
    stationary_residual: Option<f64>,
    checksum: String,
}

impl ChainSampler {
    pub fn new(p: &StochasticMatrix, start: &StartMode) -> Result<Self> {
        let rows = (0..p.size())
            .map(|x| WeightedIndex::new(p.row(x)).map_err(|e| Error::InvalidMatrix(format!("row {x}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let (law, residual) = match start {
            StartMode::Stationary => {
                let pi = stationary_distribution(p)?;
                let moved = p.left_apply(pi.entries());
                let res = moved.iter().zip(pi.entries()).map(|(a, b)| (a - b).abs()).sum();
                (pi, Some(res))
            }
            StartMode::Point(x) => (ProbabilityVector::point(p.size(), *x)?, None),
            StartMode::Custom(mu) => {
                if mu.len() != p.size() {
                    return Err(Error::DimensionMismatch { expected: p.size(), got: mu.len() });
                }
                (mu.clone(), None)
            }
        };
        let start_index =
            WeightedIndex::new(law.entries()).map_err(|e| Error::InvalidVector(format!("start law: {e}")))?;
        Ok(ChainSampler {
            rows,
            start: start_index,
            start_mode: start.clone(),
            stationary_residual: residual,
            checksum: p.checksum(),
        })
    }

    #[inline]
    pub fn initial<R: Rng>(&self, rng: &mut R) -> u32 {
        self.start.sample(rng) as u32
    }

    #[inline]
    pub fn step<R: Rng>(&self, x: u32, rng: &mut R) -> u32 {
        self.rows[x as usize].sample(rng) as u32
    }

    /// Calls `visit` on `X_1, ..., X_n` without storing them.
    pub fn stream<R: Rng, F: FnMut(u32)>(&self, n: usize, rng: &mut R, mut visit: F) {
        if n == 0 {
            return;
        }
        let mut x = self.initial(rng);
        visit(x);
        for _ in 1..n {
            x = self.step(x, rng);
            visit(x);
        }
    }

    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<u32> {
        let mut out = Vec::with_capacity(n);
        self.stream(n, rng, |x| out.push(x));
        out
    }

    pub fn trajectory<R: Rng>(&self, n: usize, seed: u64, rng: &mut R) -> Trajectory {
        let states = self.sample(n, rng);
        let meta = TrajectoryMeta {
            seed,
            start_mode: self.start_mode.clone(),
            chain_checksum: self.checksum.clone(),
            stationary_residual: self.stationary_residual,
            length: n,
        };
        Trajectory { states, meta }
    }
}

/// Samples `X_1..X_n` from replica stream 0 of `seed`.
pub fn sample_trajectory(p: &StochasticMatrix, start: &StartMode, n: usize, seed: u64) -> Result<Trajectory> {
    if n < 2 {
        return Err(Error::InvalidRange(format!("a trajectory needs n >= 2, got {n}")));
    }
    let sampler = ChainSampler::new(p, start)?;
    Ok(sampler.trajectory(n, seed, &mut replica_rng(seed, 0)))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes little-endian `u32` states to `path` and metadata to `path.json`.
pub fn write_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    let bytes: Vec<u8> = traj.states.iter().flat_map(|x| x.to_le_bytes()).collect();
    crate::io::atomic_write(path, &bytes)?;
    crate::io::atomic_write(&sidecar(path), serde_json::to_string_pretty(&traj.meta)?.as_bytes())
}

/// Reads a trajectory written by [`write_trajectory`].
pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let bytes = std::fs::read(path)?;
    if bytes.len() % 4 != 0 {
        return Err(Error::InvalidRange(format!("{} is not a whole number of u32 states", path.display())));
    }
    let states: Vec<u32> = bytes.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
    let meta: TrajectoryMeta = serde_json::from_str(&std::fs::read_to_string(sidecar(path))?)?;
    if meta.length != states.len() {
        return Err(Error::DimensionMismatch { expected: meta.length, got: states.len() });
    }
    Ok(Trajectory { states, meta })
}
