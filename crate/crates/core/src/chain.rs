//! Finite stochastic matrices and the linear-algebra primitives built on them.
//!
//! A [`StochasticMatrix`] is a validated row-stochastic matrix `P` over states
//! `0..n`. Row sums are checked to `1e-12`; rows that are off by at most `1e-9`
//! are renormalized, anything further is rejected.
//!
//! ```text
//! stationary pi:     pi P = pi, sum pi = 1
//! total variation:   TV(mu, nu) = 1/2 sum |mu(x) - nu(x)|
//! Dobrushin:         kappa(P) = max_{x,y} TV(P(x,.), P(y,.))
//! absolute gap:      gamma* = 1 - max{|lambda| : lambda != 1}, t_rel = 1/gamma*
//! quasi-norm:        ||v||_q = (sum |v_i|^q)^(1/q), ||v||_0 = #{i : v_i != 0}
//! ```

use std::collections::VecDeque;
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Row-sum tolerance accepted without repair.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Row-sum tolerance that is repaired by renormalization.
pub const RENORMALIZE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixJson {
    /// Defaults to the number of rows.
    #[serde(default)]
    size: Option<usize>,
    rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Finite row-stochastic matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct StochasticMatrix {
    size: usize,
    data: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl TryFrom<MatrixJson> for StochasticMatrix {
    type Error = Error;
    fn try_from(value: MatrixJson) -> Result<Self> {
        let size = value.size.unwrap_or(value.rows.len());
        if value.rows.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: value.rows.len() });
        }
        let m = StochasticMatrix::new(value.rows)?;
        match value.labels {
            Some(labels) => m.with_labels(labels),
            None => Ok(m),
        }
    }
}

impl From<StochasticMatrix> for MatrixJson {
    fn from(m: StochasticMatrix) -> Self {
        MatrixJson { size: Some(m.size), rows: m.to_rows(), labels: m.labels }
    }
}

impl StochasticMatrix {
    /// Validates and builds a matrix from rows.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one state".into()));
        }
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::DimensionMismatch { expected: size, got: row.len() });
            }
            let row = normalize_row(row).map_err(|msg| Error::InvalidMatrix(format!("row {i}: {msg}")))?;
            data.extend(row);
        }
        Ok(StochasticMatrix { size, data, labels: None })
    }

    /// Builds from a row-major flat array.
    pub fn from_flat(size: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::DimensionMismatch { expected: size * size, got: data.len() });
        }
        Self::new(data.chunks(size).map(|r| r.to_vec()).collect())
    }

    /// Attaches state labels (metadata only).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::DimensionMismatch { expected: self.size, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.size + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.size..(x + 1) * self.size]
    }

    /// Row-major entries.
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// Nonzero entries of each row, as `(column, value)`.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.size)
            .map(|x| self.row(x).iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(y, &v)| (y, v)).collect())
            .collect()
    }

    /// `out = a * P` for a dense row-major `n x n` matrix `a`.
    pub fn right_multiply_into(&self, a: &[f64], out: &mut [f64], sparse: &[Vec<(usize, f64)>]) {
        let n = self.size;
        out.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let a_row = &a[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                for &(j, pkj) in &sparse[k] {
                    out_row[j] += aik * pkj;
                }
            }
        }
    }

    /// Dense `P^t` as a row-major array.
    pub fn power_flat(&self, t: usize) -> Vec<f64> {
        let n = self.size;
        let sparse = self.sparse_rows();
        let mut cur = identity_flat(n);
        let mut next = vec![0.0; n * n];
        for _ in 0..t {
            self.right_multiply_into(&cur, &mut next, &sparse);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// `P^t` as a stochastic matrix.
    pub fn power(&self, t: usize) -> Result<StochasticMatrix> {
        StochasticMatrix::from_flat(self.size, self.power_flat(t))
    }

    /// `mu P`.
    pub fn left_apply(&self, mu: &[f64]) -> Vec<f64> {
        let n = self.size;
        let mut out = vec![0.0; n];
        for (x, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (y, o) in out.iter_mut().enumerate() {
                *o += m * self.data[x * n + y];
            }
        }
        out
    }

    /// Hex SHA-256 of the little-endian entry bytes; identifies the chain in sidecars.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.size as u64).to_le_bytes());
        for v in &self.data {
            hasher.update(v.to_le_bytes());
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub(crate) fn identity_flat(n: usize) -> Vec<f64> {
    let mut id = vec![0.0; n * n];
    for i in 0..n {
        id[i * n + i] = 1.0;
    }
    id
}

fn normalize_row(mut row: Vec<f64>) -> std::result::Result<Vec<f64>, String> {
    for (j, &v) in row.iter().enumerate() {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(format!("entry {j} = {v} is not in [0, 1]"));
        }
    }
    let sum: f64 = row.iter().sum();
    let dev = (sum - 1.0).abs();
    if dev <= ROW_SUM_TOL {
        Ok(row)
    } else if dev <= RENORMALIZE_TOL {
        row.iter_mut().for_each(|v| *v /= sum);
        Ok(row)
    } else {
        Err(format!("sums to {sum}"))
    }
}

/// Nonnegative vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates entries; sums within `1e-9` of one are renormalized.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidVector("empty vector".into()));
        }
        let entries = normalize_row(entries).map_err(Error::InvalidVector)?;
        Ok(ProbabilityVector { entries })
    }

    /// Point mass at `x`.
    pub fn point(n: usize, x: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::InvalidVector(format!("state {x} out of range for size {n}")));
        }
        let mut e = vec![0.0; n];
        e[x] = 1.0;
        Ok(ProbabilityVector { entries: e })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector { entries: vec![1.0 / n as f64; n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, x: usize) -> f64 {
        self.entries[x]
    }

    /// Squared Euclidean norm.
    pub fn norm2_squared(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }
}

/// Half the l1 distance between two slices of equal length.
pub fn tv_slices(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Total variation distance.
pub fn tv_distance(mu: &ProbabilityVector, nu: &ProbabilityVector) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(Error::DimensionMismatch { expected: mu.len(), got: nu.len() });
    }
    Ok(tv_slices(mu.entries(), nu.entries()).min(1.0))
}

/// Why a chain is or is not ergodic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErgodicityDiagnosis {
    Ergodic,
    /// Some state cannot reach, or be reached from, state 0.
    Reducible {
        state: usize,
    },
    Periodic {
        period: usize,
    },
}

impl fmt::Display for ErgodicityDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErgodicityDiagnosis::Ergodic => write!(f, "ergodic"),
            ErgodicityDiagnosis::Reducible { state } => {
                write!(f, "reducible (state {state} not in the communicating class of state 0)")
            }
            ErgodicityDiagnosis::Periodic { period } => write!(f, "periodic with period {period}"),
        }
    }
}

/// Result of the structure check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    pub diagnosis: ErgodicityDiagnosis,
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap_or(0);
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Strong connectivity plus aperiodicity of the positive-entry graph.
pub fn is_ergodic(p: &StochasticMatrix) -> ErgodicityReport {
    let n = p.size();
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if p.get(x, y) > 0.0 {
                fwd[x].push(y);
                bwd[y].push(x);
            }
        }
    }
    let levels = bfs_levels(&fwd, 0);
    let back = bfs_levels(&bwd, 0);
    for x in 0..n {
        if levels[x].is_none() || back[x].is_none() {
            return ErgodicityReport { ergodic: false, diagnosis: ErgodicityDiagnosis::Reducible { state: x } };
        }
    }
    // Period = gcd over edges (u, v) of level(u) + 1 - level(v).
    let mut period = 0usize;
    for u in 0..n {
        let lu = levels[u].unwrap_or(0);
        for &v in &fwd[u] {
            let lv = levels[v].unwrap_or(0);
            let diff = (lu as i64 + 1 - lv as i64).unsigned_abs() as usize;
            period = gcd(period, diff);
        }
    }
    if period == 1 {
        ErgodicityReport { ergodic: true, diagnosis: ErgodicityDiagnosis::Ergodic }
    } else {
        ErgodicityReport { ergodic: false, diagnosis: ErgodicityDiagnosis::Periodic { period } }
    }
}

fn stationary_residual(p: &StochasticMatrix, pi: &[f64]) -> f64 {
    p.left_apply(pi).iter().zip(pi).map(|(a, b)| (a - b).abs()).sum()
}

fn clean_distribution(v: &mut [f64]) {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

fn dense_stationary(p: &StochasticMatrix) -> Option<Vec<f64>> {
    let n = p.size();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            a[(y, x)] = p.get(x, y);
        }
        a[(x, x)] -= 1.0;
    }
    for x in 0..n {
        a[(n - 1, x)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let inverse = a.clone().try_inverse()?;
    let cond = a.lp_norm(1).max(column_norm1(&a)) * column_norm1(&inverse).max(inverse.lp_norm(1));
    if !cond.is_finite() || cond > 1e12 {
        return None;
    }
    let sol = a.lu().solve(&b)?;
    let mut pi: Vec<f64> = sol.iter().copied().collect();
    if pi.iter().any(|v| !v.is_finite()) {
        return None;
    }
    clean_distribution(&mut pi);
    Some(pi)
}

fn column_norm1(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn power_stationary(p: &StochasticMatrix, start: Option<Vec<f64>>) -> Vec<f64> {
    let n = p.size();
    let mut pi = start.unwrap_or_else(|| vec![1.0 / n as f64; n]);
    for _ in 0..2_000_000 {
        let next = p.left_apply(&pi);
        // Lazy step keeps near-periodic chains convergent.
        let mut lazy: Vec<f64> = next.iter().zip(&pi).map(|(a, b)| 0.5 * (a + b)).collect();
        clean_distribution(&mut lazy);
        let change: f64 = lazy.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = lazy;
        if change < 1e-15 {
            break;
        }
    }
    pi
}

/// Stationary distribution after checking ergodicity.
pub fn stationary_distribution(p: &StochasticMatrix) -> Result<ProbabilityVector> {
    let report = is_ergodic(p);
    if !report.ergodic {
        return Err(Error::NonErgodic(report.diagnosis));
    }
    stationary_distribution_unchecked(p)
}

/// Stationary solve without the structure check.
pub fn stationary_distribution_unchecked(p: &StochasticMatrix) -> Result<ProbabilityVector> {
    let pi = match dense_stationary(p) {
        Some(pi) if stationary_residual(p, &pi) <= 1e-12 => pi,
        other => power_stationary(p, other),
    };
    let residual = stationary_residual(p, &pi);
    if residual > 1e-10 || pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(ProbabilityVector { entries: pi })
}

/// `max_{x,y} TV(P(x,.), P(y,.))`.
pub fn dobrushin_coefficient(p: &StochasticMatrix) -> f64 {
    let n = p.size();
    let mut kappa = 0.0f64;
    for x in 0..n {
        for y in (x + 1)..n {
            kappa = kappa.max(tv_slices(p.row(x), p.row(y)));
        }
    }
    kappa.min(1.0)
}

/// `max_{x,y} |pi(x)P(x,y) - pi(y)P(y,x)|`.
pub fn reversibility_residual(p: &StochasticMatrix, pi: &ProbabilityVector) -> f64 {
    let n = p.size();
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in (x + 1)..n {
            worst = worst.max((pi.get(x) * p.get(x, y) - pi.get(y) * p.get(y, x)).abs());
        }
    }
    worst
}

/// Spectrum of a reversible chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Absolute spectral gap.
    pub gamma_star: f64,
    /// `1 / gamma_star`; infinite when the gap is below `1e-12`.
    pub t_rel: f64,
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
}

impl SpectralSummary {
    pub fn has_gap(&self) -> bool {
        self.t_rel.is_finite()
    }
}

/// Eigen-decomposition of `D^{1/2} P D^{-1/2}` for a reversible chain.
pub fn spectral_summary(p: &StochasticMatrix, pi: &ProbabilityVector) -> Result<SpectralSummary> {
    let n = p.size();
    if pi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.len() });
    }
    let residual = reversibility_residual(p, pi);
    if residual > 1e-10 {
        return Err(Error::NotReversible { residual });
    }
    let sq: Vec<f64> = pi.entries().iter().map(|v| v.sqrt()).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            s[(x, y)] = sq[x] * p.get(x, y) / sq[y];
        }
    }
    let sym = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    // Drop the single eigenvalue closest to 1 (the Perron root).
    let top = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lambda_star =
        eigenvalues.iter().enumerate().filter(|(i, _)| *i != top).map(|(_, v)| v.abs()).fold(0.0f64, f64::max);
    let gamma_star = (1.0 - lambda_star).clamp(0.0, 1.0);
    let t_rel = if gamma_star <= 1e-12 { f64::INFINITY } else { 1.0 / gamma_star };
    Ok(SpectralSummary { gamma_star, t_rel, eigenvalues })
}

/// `(sum |v_i|^q)^{1/q}`; support size when `q = 0`.
pub fn lp_quasi_norm(v: &[f64], q: f64) -> f64 {
    if q == 0.0 {
        return v.iter().filter(|x| **x != 0.0).count() as f64;
    }
    v.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

/// `sum |v_i|^q`, which is `||v||_q^q`.
pub fn power_sum(v: &[f64], q: f64) -> f64 {
    v.iter().filter(|x| **x != 0.0).map(|x| x.abs().powf(q)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(p: f64, q: f64) -> StochasticMatrix {
        StochasticMatrix::new(vec![vec![1.0 - p, p], vec![q, 1.0 - q]]).unwrap()
    }

    #[test]
    fn two_point_stationary() {
        let pi = stationary_distribution(&two_point(0.1, 0.4)).unwrap();
        assert!((pi.get(0) - 0.8).abs() < 1e-14);
        assert!((pi.get(1) - 0.2).abs() < 1e-14);
        let pi = stationary_distribution(&two_point(0.5, 0.5)).unwrap();
        assert!((pi.get(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(StochasticMatrix::new(vec![vec![0.5, 0.6], vec![0.5, 0.5]]).is_err());
        assert!(StochasticMatrix::new(vec![vec![-0.1, 1.1], vec![0.5, 0.5]]).is_err());
        let m = StochasticMatrix::new(vec![vec![0.5, 0.5 + 5e-10], vec![0.5, 0.5]]).unwrap();
        assert!((m.row(0).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(StochasticMatrix::new(vec![]).is_err());
    }

    #[test]
    fn tv_examples() {
        let a = ProbabilityVector::new(vec![0.8, 0.2]).unwrap();
        let b = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert!((tv_distance(&a, &b).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        let e0 = ProbabilityVector::point(2, 0).unwrap();
        let e1 = ProbabilityVector::point(2, 1).unwrap();
        assert_eq!(tv_distance(&e0, &e1).unwrap(), 1.0);
        assert!(tv_distance(&a, &ProbabilityVector::uniform(3)).is_err());
    }

    #[test]
    fn ergodicity_diagnosis() {
        assert!(is_ergodic(&two_point(0.3, 0.6)).ergodic);
        let perm = StochasticMatrix::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(is_ergodic(&perm).diagnosis, ErgodicityDiagnosis::Periodic { period: 2 });
        let block = StochasticMatrix::new(vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.0, 0.0, 0.5, 0.5],
        ])
        .unwrap();
        assert!(matches!(is_ergodic(&block).diagnosis, ErgodicityDiagnosis::Reducible { .. }));
        assert!(matches!(stationary_distribution(&perm), Err(Error::NonErgodic(_))));
    }

    #[test]
    fn dobrushin_two_point() {
        assert!((dobrushin_coefficient(&two_point(0.1, 0.4)) - 0.5).abs() < 1e-15);
        let rank_one = StochasticMatrix::new(vec![vec![0.3, 0.7]; 2]).unwrap();
        assert_eq!(dobrushin_coefficient(&rank_one), 0.0);
    }

    #[test]
    fn spectral_two_point() {
        let p = two_point(0.1, 0.4);
        let pi = stationary_distribution(&p).unwrap();
        let s = spectral_summary(&p, &pi).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 0.5).abs() < 1e-12);
        assert!((s.t_rel - 2.0).abs() < 1e-11);
        let p = two_point(0.5, 0.5);
        let s = spectral_summary(&p, &stationary_distribution(&p).unwrap()).unwrap();
        assert!((s.gamma_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_refuses_irreversible() {
        let p = StochasticMatrix::new(vec![vec![0.1, 0.8, 0.1], vec![0.1, 0.1, 0.8], vec![0.8, 0.1, 0.1]]).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        assert!(matches!(spectral_summary(&p, &pi), Err(Error::NotReversible { .. })));
    }

    #[test]
    fn quasi_norms() {
        assert!((lp_quasi_norm(&[0.5, 0.5], 0.5) - 2.0).abs() < 1e-14);
        assert!((lp_quasi_norm(&[0.2, 0.3, 0.5], 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(lp_quasi_norm(&[1.0, 0.0, 0.0], 0.0), 1.0);
    }

    #[test]
    fn json_round_trip_is_bit_identical() {
        let p = StochasticMatrix::new(vec![vec![0.1 + 0.2, 0.7], vec![1.0 / 3.0, 2.0 / 3.0]])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into()])
            .unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: StochasticMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
        assert_eq!(p.checksum(), back.checksum());
    }
}
