//! Exact mixing quantities of a finite ergodic chain.
//!
//! All profiles propagate the full matrix `P^t` one step at a time, so every
//! intermediate horizon is available.
//!
//! ```text
//! d(t)        = max_x TV(e_x P^t, pi)
//! beta(t)     = sum_x pi(x) TV(e_x P^t, pi)
//! t_mix(xi)   = min { t >= 1 : d(t) <= xi }
//! t_sharp(xi) = min { t >= 1 : beta(t) <= xi }
//! Q^(s)       = diag(pi) P^s
//! J_p^(s)     = ||Q^(s)||_r^(1 - 1/p),  r = (1 - 1/p) / 2,  J_1 = 1,  J_inf = ||Q^(s)||_(1/2)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{
    identity_flat, is_ergodic, power_sum, tv_slices, ProbabilityVector, SpectralSummary, StochasticMatrix,
};
use crate::error::{Error, Result};

/// Values below this mark a beta profile as converged; later values are clamped to zero.
pub const CONVERGENCE_FLOOR: f64 = 1e-13;

/// Exponent `p` in `[1, inf]` used by the entropic terms and `B_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Finite(f64),
    Infinity,
}

impl PValue {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(PValue::Infinity)
        } else if p >= 1.0 {
            Ok(PValue::Finite(p))
        } else {
            Err(Error::InvalidRange(format!("p must be >= 1, got {p}")))
        }
    }

    /// `1/p`, zero at infinity.
    pub fn inverse(self) -> f64 {
        match self {
            PValue::Finite(p) => 1.0 / p,
            PValue::Infinity => 0.0,
        }
    }

    /// `1 - 1/p`.
    pub fn conjugate_weight(self) -> f64 {
        1.0 - self.inverse()
    }

    /// Quasi-norm index `(1 - 1/p) / 2`.
    pub fn r(self) -> f64 {
        0.5 * self.conjugate_weight()
    }

    pub fn as_f64(self) -> f64 {
        match self {
            PValue::Finite(p) => p,
            PValue::Infinity => f64::INFINITY,
        }
    }

    /// Default grid for minimizations over `p`.
    pub fn default_grid() -> Vec<PValue> {
        vec![
            PValue::Finite(1.25),
            PValue::Finite(1.5),
            PValue::Finite(2.0),
            PValue::Finite(3.0),
            PValue::Finite(4.0),
            PValue::Finite(8.0),
            PValue::Infinity,
        ]
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Finite(p) => write!(f, "{p}"),
            PValue::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for PValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" | "∞" => Ok(PValue::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::InvalidRange(format!("bad p value '{other}'")))?;
                PValue::new(p)
            }
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PValue::Finite(p) => serializer.serialize_f64(*p),
            PValue::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::Number(n) => {
                PValue::new(n.as_f64().unwrap_or(f64::NAN)).map_err(serde::de::Error::custom)
            }
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("p must be a number or \"inf\"")),
        }
    }
}

/// `beta(0..=t_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaProfile {
    values: Vec<f64>,
    t_max: usize,
    converged: bool,
}

impl BetaProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// True when some `beta(t)` fell below [`CONVERGENCE_FLOOR`].
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// `beta(t)`; zero past the horizon of a converged profile.
    pub fn get(&self, t: usize) -> Option<f64> {
        match self.values.get(t) {
            Some(v) => Some(*v),
            None if self.converged => Some(0.0),
            None => None,
        }
    }

    /// First `t >= 1` with `beta(t) <= xi`.
    pub fn t_sharp(&self, xi: f64) -> Option<usize> {
        first_at_most(&self.values, xi).or(if self.converged && xi >= 0.0 { Some(self.t_max + 1) } else { None })
    }

    /// `B_p^(s) = sum_{t < floor((n-1)/s)} beta(s t)^(1/p)`.
    pub fn b_p(&self, p: PValue, s: usize, n: usize) -> Result<f64> {
        if s == 0 || n < 2 {
            return Err(Error::InvalidRange(format!("b_p needs s >= 1 and n >= 2, got s={s}, n={n}")));
        }
        let m = (n - 1) / s;
        let inv = p.inverse();
        let mut total = 0.0;
        for t in 0..m {
            let beta = self.get(s * t).ok_or(Error::Unbounded { xi: 0.0, t_cap: self.t_max })?;
            if beta == 0.0 {
                if inv > 0.0 {
                    break;
                }
                total += (m - t) as f64;
                break;
            }
            total += beta.powf(inv);
        }
        Ok(total)
    }
}

fn first_at_most(values: &[f64], xi: f64) -> Option<usize> {
    values.iter().enumerate().skip(1).find(|(_, v)| **v <= xi).map(|(t, _)| t)
}

/// Beta and worst-case distance profiles computed together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingProfile {
    pub beta: BetaProfile,
    pub d: Vec<f64>,
}

/// Iterates `P^0, P^1, ...` as dense row-major matrices.
pub struct RowEvolution<'a> {
    p: &'a StochasticMatrix,
    sparse: Vec<Vec<(usize, f64)>>,
    current: Vec<f64>,
    scratch: Vec<f64>,
    t: usize,
}

impl<'a> RowEvolution<'a> {
    pub fn new(p: &'a StochasticMatrix) -> Self {
        let n = p.size();
        RowEvolution { p, sparse: p.sparse_rows(), current: identity_flat(n), scratch: vec![0.0; n * n], t: 0 }
    }

    /// Current power `t`.
    pub fn t(&self) -> usize {
        self.t
    }

    /// `P^t`, row-major.
    pub fn current(&self) -> &[f64] {
        &self.current
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.p.size();
        &self.current[x * n..(x + 1) * n]
    }

    /// Advances to `P^{t+1}`.
    pub fn step(&mut self) {
        self.p.right_multiply_into(&self.current, &mut self.scratch, &self.sparse);
        std::mem::swap(&mut self.current, &mut self.scratch);
        self.t += 1;
    }

    /// `(beta(t), d(t))` of the current power.
    pub fn distances(&self, pi: &[f64]) -> (f64, f64) {
        let n = self.p.size();
        let mut beta = 0.0;
        let mut d = 0.0f64;
        for (x, &px) in pi.iter().enumerate().take(n) {
            let tv = tv_slices(self.row(x), pi).min(1.0);
            beta += px * tv;
            d = d.max(tv);
        }
        (beta.min(1.0), d)
    }
}

fn require_ergodic(p: &StochasticMatrix, pi: &ProbabilityVector) -> Result<()> {
    if pi.len() != p.size() {
        return Err(Error::DimensionMismatch { expected: p.size(), got: pi.len() });
    }
    let report = is_ergodic(p);
    if !report.ergodic {
        return Err(Error::NonErgodic(report.diagnosis));
    }
    Ok(())
}

struct ProfileBuilder {
    beta: Vec<f64>,
    d: Vec<f64>,
    beta_converged: bool,
}

impl ProfileBuilder {
    fn push(&mut self, beta: f64, d: f64) {
        let beta = if self.beta_converged || beta < CONVERGENCE_FLOOR {
            self.beta_converged = true;
            0.0
        } else {
            beta
        };
        let d = if d < CONVERGENCE_FLOOR { 0.0 } else { d };
        self.beta.push(beta);
        self.d.push(d);
    }

    fn finish(self) -> MixingProfile {
        let t_max = self.beta.len() - 1;
        MixingProfile { beta: BetaProfile { values: self.beta, t_max, converged: self.beta_converged }, d: self.d }
    }
}

fn build_profile(
    p: &StochasticMatrix,
    pi: &ProbabilityVector,
    t_max: usize,
    mut stop: impl FnMut(&[f64], &[f64]) -> bool,
) -> MixingProfile {
    let mut evo = RowEvolution::new(p);
    let mut builder = ProfileBuilder { beta: Vec::new(), d: Vec::new(), beta_converged: false };
    loop {
        let (beta, d) = evo.distances(pi.entries());
        builder.push(beta, d);
        if evo.t() >= t_max || stop(&builder.beta, &builder.d) {
            break;
        }
        evo.step();
    }
    builder.finish()
}

/// `beta(0..=t_max)` and `d(0..=t_max)`.
pub fn mixing_profile(p: &StochasticMatrix, pi: &ProbabilityVector, t_max: usize) -> Result<MixingProfile> {
    require_ergodic(p, pi)?;
    Ok(build_profile(p, pi, t_max, |_, _| false))
}

/// `beta(0..=t_max)`.
pub fn exact_beta(p: &StochasticMatrix, pi: &ProbabilityVector, t_max: usize) -> Result<BetaProfile> {
    require_ergodic(p, pi)?;
    let profile =
        build_profile(p, pi, t_max, |beta, d| *beta.last().unwrap_or(&1.0) == 0.0 && *d.last().unwrap_or(&1.0) == 0.0);
    Ok(profile.beta)
}

/// `d(0..=t_max)`.
pub fn exact_worst_distance(p: &StochasticMatrix, pi: &ProbabilityVector, t_max: usize) -> Result<Vec<f64>> {
    Ok(mixing_profile(p, pi, t_max)?.d)
}

/// Mixing and average-mixing times at one proximity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub xi: f64,
    /// `None` when `d(t) > xi` for every `t <= t_cap`.
    pub t_mix: Option<usize>,
    /// `None` when `beta(t) > xi` for every `t <= t_cap`.
    pub t_sharp: Option<usize>,
    pub beta_profile: BetaProfile,
}

/// Searches `t = 1..=t_cap` for both thresholds.
pub fn mixing_times(p: &StochasticMatrix, pi: &ProbabilityVector, xi: f64, t_cap: usize) -> Result<MixingReport> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidRange(format!("xi must lie in (0, 1), got {xi}")));
    }
    require_ergodic(p, pi)?;
    let profile = build_profile(p, pi, t_cap.max(1), |beta, d| {
        beta.len() > 1 && first_at_most(d, xi).is_some() && first_at_most(beta, xi).is_some()
    });
    Ok(MixingReport {
        xi,
        t_mix: first_at_most(&profile.d, xi),
        t_sharp: first_at_most(profile.beta.values(), xi),
        beta_profile: profile.beta,
    })
}

/// Convenience: `t_sharp(xi)` or an `Unbounded` error. Stops as soon as `beta` crosses `xi`.
pub fn t_sharp(p: &StochasticMatrix, pi: &ProbabilityVector, xi: f64, t_cap: usize) -> Result<usize> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidRange(format!("xi must lie in (0, 1), got {xi}")));
    }
    require_ergodic(p, pi)?;
    let profile = build_profile(p, pi, t_cap.max(1), |beta, _| beta.len() > 1 && first_at_most(beta, xi).is_some());
    first_at_most(profile.beta.values(), xi).ok_or(Error::Unbounded { xi, t_cap })
}

/// Convenience: `t_mix(xi)` or an `Unbounded` error.
pub fn t_mix(p: &StochasticMatrix, pi: &ProbabilityVector, xi: f64, t_cap: usize) -> Result<usize> {
    mixing_times(p, pi, xi, t_cap)?.t_mix.ok_or(Error::Unbounded { xi, t_cap })
}

/// Joint law of `(X_1, X_{1+s})` under stationarity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairMatrix {
    s: usize,
    size: usize,
    entries: Vec<f64>,
}

impl PairMatrix {
    fn from_power(pi: &[f64], power: &[f64], s: usize) -> Self {
        let n = pi.len();
        let entries = (0..n * n).map(|i| pi[i / n] * power[i]).collect();
        PairMatrix { s, size: n, entries }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.entries[x * self.size + y]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.entries.chunks(self.size).map(|r| r.iter().sum()).collect()
    }

    pub fn column_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        for row in self.entries.chunks(self.size) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }
}

/// `Q^(s)(x, x') = pi(x) P^s(x, x')`.
pub fn pair_matrix(p: &StochasticMatrix, pi: &ProbabilityVector, s: usize) -> Result<PairMatrix> {
    require_ergodic(p, pi)?;
    let q = PairMatrix::from_power(pi.entries(), &p.power_flat(s), s);
    let marginal_err = q.row_marginal().iter().zip(pi.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if marginal_err > 1e-10 {
        return Err(Error::InvalidMatrix(format!("pair matrix marginal off by {marginal_err:.3e}")));
    }
    Ok(q)
}

/// `J_p` of a nonnegative array of pair probabilities.
pub fn entropic_from_entries(entries: &[f64], p: PValue) -> f64 {
    if p.conjugate_weight() == 0.0 {
        return 1.0;
    }
    // ||Q||_r^(2r) with r = (1 - 1/p)/2 equals (sum Q^r)^2.
    let root = power_sum(entries, p.r());
    root * root
}

/// `J_p^(s)`.
pub fn entropic_term(q: &PairMatrix, p: PValue) -> f64 {
    entropic_from_entries(q.entries(), p)
}

/// `J_{p,xi} = max_{1 <= s <= t_sharp(xi)} J_p^(s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropicSup {
    pub value: f64,
    pub argmax: usize,
    pub t_sharp: usize,
}

pub fn entropic_sup(
    p: &StochasticMatrix,
    pi: &ProbabilityVector,
    xi: f64,
    exponent: PValue,
    t_cap: usize,
) -> Result<EntropicSup> {
    let ts = t_sharp(p, pi, xi, t_cap)?;
    let mut evo = RowEvolution::new(p);
    let mut best = EntropicSup { value: f64::NEG_INFINITY, argmax: 1, t_sharp: ts };
    for s in 1..=ts {
        evo.step();
        let q = PairMatrix::from_power(pi.entries(), evo.current(), s);
        let j = entropic_term(&q, exponent);
        if j > best.value {
            best.value = j;
            best.argmax = s;
        }
    }
    Ok(best)
}

/// `t_rel * log(||pi||_{1/2} / (2 xi))`; infinite without a gap.
pub fn spectral_avg_mixing_bound(summary: &SpectralSummary, pi: &ProbabilityVector, xi: f64) -> f64 {
    if !summary.has_gap() {
        return f64::INFINITY;
    }
    let half_norm = power_sum(pi.entries(), 0.5).powi(2);
    summary.t_rel * (half_norm / (2.0 * xi)).ln()
}

/// `2 exp(-log(2) s / t_mix)`.
pub fn uniform_beta_envelope(t_mix: usize, s: usize) -> f64 {
    2.0 * (-(2f64.ln()) * s as f64 / t_mix as f64).exp()
}

/// `max_{0 <= t <= horizon} sum_x mu_t(x) TV(e_x P^s, mu_{s+t})` with `mu_t = mu0 P^t`.
pub fn nonstationary_beta(p: &StochasticMatrix, mu0: &ProbabilityVector, s: usize, horizon: usize) -> Result<f64> {
    if mu0.len() != p.size() {
        return Err(Error::DimensionMismatch { expected: p.size(), got: mu0.len() });
    }
    let n = p.size();
    let ps = p.power_flat(s);
    let mut mu_t = mu0.entries().to_vec();
    let mut best = 0.0f64;
    for _ in 0..=horizon {
        let mut mu_ts = vec![0.0; n];
        for (x, &m) in mu_t.iter().enumerate() {
            for (y, o) in mu_ts.iter_mut().enumerate() {
                *o += m * ps[x * n + y];
            }
        }
        let value: f64 = (0..n).map(|x| mu_t[x] * tv_slices(&ps[x * n..(x + 1) * n], &mu_ts)).sum();
        best = best.max(value);
        mu_t = p.left_apply(&mu_t);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::stationary_distribution;

    fn two_point(p: f64, q: f64) -> StochasticMatrix {
        StochasticMatrix::new(vec![vec![1.0 - p, p], vec![q, 1.0 - q]]).unwrap()
    }

    #[test]
    fn two_point_profiles() {
        let p = two_point(0.1, 0.4);
        let pi = stationary_distribution(&p).unwrap();
        let prof = mixing_profile(&p, &pi, 10).unwrap();
        assert!((prof.beta.get(0).unwrap() - 0.32).abs() < 1e-14);
        for t in 1..=10 {
            assert!((prof.beta.get(t).unwrap() - 0.32 * 0.5f64.powi(t as i32)).abs() < 1e-14);
            assert!((prof.d[t] - 0.8 * 0.5f64.powi(t as i32)).abs() < 1e-14);
        }
        let r = mixing_times(&p, &pi, 0.1, 100).unwrap();
        assert_eq!((r.t_mix, r.t_sharp), (Some(3), Some(2)));
    }

    #[test]
    fn rank_one_mixes_in_one_step() {
        let p = two_point(0.5, 0.5);
        let pi = stationary_distribution(&p).unwrap();
        let prof = mixing_profile(&p, &pi, 5).unwrap();
        assert_eq!(prof.beta.get(1), Some(0.0));
        assert_eq!(prof.d[1], 0.0);
        assert!(prof.beta.converged());
        let r = mixing_times(&p, &pi, 0.01, 10).unwrap();
        assert_eq!((r.t_mix, r.t_sharp), (Some(1), Some(1)));
    }

    #[test]
    fn unbounded_marker() {
        let p = two_point(0.001, 0.001);
        let pi = stationary_distribution(&p).unwrap();
        let r = mixing_times(&p, &pi, 0.01, 10).unwrap();
        assert_eq!(r.t_mix, None);
        assert!(matches!(t_sharp(&p, &pi, 0.01, 10), Err(Error::Unbounded { .. })));
    }

    #[test]
    fn pair_matrix_two_point() {
        let p = two_point(0.1, 0.4);
        let pi = stationary_distribution(&p).unwrap();
        let q = pair_matrix(&p, &pi, 1).unwrap();
        let want = [0.72, 0.08, 0.08, 0.12];
        for (a, b) in q.entries().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let q0 = pair_matrix(&p, &pi, 0).unwrap();
        assert_eq!(q0.get(0, 1), 0.0);
        assert!((q0.get(0, 0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn entropic_conventions() {
        let p = two_point(0.5, 0.5);
        let pi = stationary_distribution(&p).unwrap();
        let q = pair_matrix(&p, &pi, 1).unwrap();
        assert_eq!(entropic_term(&q, PValue::Finite(1.0)), 1.0);
        assert!((entropic_term(&q, PValue::Infinity) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn envelope_values() {
        assert_eq!(uniform_beta_envelope(5, 0), 2.0);
        assert!((uniform_beta_envelope(5, 5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_bound_two_point() {
        let p = two_point(0.1, 0.4);
        let pi = stationary_distribution(&p).unwrap();
        let summary = crate::chain::spectral_summary(&p, &pi).unwrap();
        let bound = spectral_avg_mixing_bound(&summary, &pi, 0.05);
        assert!((bound - 2.0 * 18f64.ln()).abs() < 1e-9);
        assert!(t_sharp(&p, &pi, 0.05, 100).unwrap() as f64 <= bound.ceil());
    }

    #[test]
    fn p_value_parsing() {
        assert_eq!("inf".parse::<PValue>().unwrap(), PValue::Infinity);
        assert_eq!("2".parse::<PValue>().unwrap(), PValue::Finite(2.0));
        assert!("0.5".parse::<PValue>().is_err());
        let json = serde_json::to_string(&vec![PValue::Finite(2.0), PValue::Infinity]).unwrap();
        assert_eq!(json, "[2.0,\"inf\"]");
    }
}
