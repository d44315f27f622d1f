//! Truncated birth-death chains and the Chebyshev-type random walk.
//!
//! State `n` (1-based) moves to `n-1`, `n`, `n+1` with probabilities
//! `u(n)`, `v(n)`, `w(n)`, and `u(1) = 0`. Truncating at `K` folds `w(K)` into
//! `v(K)`; the folded mass is reported.
//!
//! The Chebyshev walk with `theta > 0` and `lambda >= 2 theta^2 / ((1+theta)(1+3theta))`:
//!
//! ```text
//! w(1) = 1 / ((1+lambda)(1+theta))
//! u(n) = 1/(2(1+lambda)) * (1+(2n-1)theta) / (1+(2n-3)theta)     n >= 2
//! w(n) = 1/(2(1+lambda)) * (1+(2n-3)theta) / (1+(2n-1)theta)     n >= 2
//! weight(1) = theta
//! weight(n) = 2(1+theta)theta / ((1+(2n-1)theta)(1+(2n-3)theta)) n >= 2
//! ```
//!
//! The weights satisfy detailed balance and sum to `1 + theta`, so the
//! stationary tail beyond `K` is `1 / (1 + (2K-1)theta)`.

use serde::{Deserialize, Serialize};

use crate::chain::StochasticMatrix;
use crate::error::{Error, Result};
use crate::families::sequence::Sequence;

/// How the mass leaving the last retained state is handled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Fold `w(K)` into `v(K)`.
    #[default]
    Reflect,
    /// Same matrix as `Reflect`; kept as a distinct tag for provenance.
    AbsorbToSelf,
}

/// Birth-death probabilities for states `1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathSpec {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    #[serde(default)]
    pub boundary: Boundary,
}

impl BirthDeathSpec {
    /// Samples closed-form sequences at `1..=k`.
    pub fn from_sequences(u: &Sequence, v: &Sequence, w: &Sequence, k: usize, boundary: Boundary) -> Self {
        BirthDeathSpec { u: u.values(1, k), v: v.values(1, k), w: w.values(1, k), boundary }
    }

    pub fn truncation(&self) -> usize {
        self.u.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthDeathChain {
    pub matrix: StochasticMatrix,
    /// `w(K)`, moved onto the diagonal of the last row.
    pub repaired_mass: f64,
    pub boundary: Boundary,
}

/// Tridiagonal `K x K` matrix.
pub fn build_birth_death(spec: &BirthDeathSpec) -> Result<BirthDeathChain> {
    let k = spec.u.len();
    if k < 2 || spec.v.len() != k || spec.w.len() != k {
        return Err(Error::InvalidSequence(format!(
            "u, v, w must share a length >= 2, got {}, {}, {}",
            spec.u.len(),
            spec.v.len(),
            spec.w.len()
        )));
    }
    if spec.u[0] != 0.0 {
        return Err(Error::InvalidSequence(format!("u(1) must be 0, got {}", spec.u[0])));
    }
    let mut rows = vec![vec![0.0; k]; k];
    for i in 0..k {
        let (u, v, w) = (spec.u[i], spec.v[i], spec.w[i]);
        if u < 0.0 || v < 0.0 || w < 0.0 || !(u + v + w).is_finite() {
            return Err(Error::InvalidSequence(format!("negative probability in state {}", i + 1)));
        }
        if ((u + v + w) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSequence(format!("state {} row sums to {}", i + 1, u + v + w)));
        }
        if i > 0 {
            rows[i][i - 1] = u;
        }
        rows[i][i] = v;
        if i + 1 < k {
            rows[i][i + 1] = w;
        } else {
            rows[i][i] += w;
        }
    }
    Ok(BirthDeathChain { matrix: StochasticMatrix::new(rows)?, repaired_mass: spec.w[k - 1], boundary: spec.boundary })
}

/// Constant-coefficient reference rate `max(v + 2 sqrt(u w), w / (w + v))`.
pub fn constant_birth_death_rate(u: f64, v: f64, w: f64) -> f64 {
    (v + 2.0 * (u * w).sqrt()).max(w / (w + v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSpec {
    pub theta: f64,
    pub lambda: f64,
    pub truncation: usize,
}

impl ChebyshevSpec {
    /// Smallest admissible `lambda` for this `theta`.
    pub fn lambda_floor(theta: f64) -> f64 {
        2.0 * theta * theta / ((1.0 + theta) * (1.0 + 3.0 * theta))
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0) {
            return Err(Error::InvalidRange(format!("theta must be positive, got {}", self.theta)));
        }
        let floor = Self::lambda_floor(self.theta);
        if !(self.lambda >= floor) {
            return Err(Error::InvalidLambda { lambda: self.lambda, bound: floor });
        }
        if self.truncation < 3 {
            return Err(Error::InvalidRange(format!("truncation must be >= 3, got {}", self.truncation)));
        }
        Ok(())
    }

    pub fn u(&self, n: usize) -> f64 {
        if n <= 1 {
            return 0.0;
        }
        let (t, nf) = (self.theta, n as f64);
        (1.0 + (2.0 * nf - 1.0) * t) / (1.0 + (2.0 * nf - 3.0) * t) / (2.0 * (1.0 + self.lambda))
    }

    pub fn w(&self, n: usize) -> f64 {
        let t = self.theta;
        if n <= 1 {
            return 1.0 / ((1.0 + self.lambda) * (1.0 + t));
        }
        let nf = n as f64;
        (1.0 + (2.0 * nf - 3.0) * t) / (1.0 + (2.0 * nf - 1.0) * t) / (2.0 * (1.0 + self.lambda))
    }

    pub fn v(&self, n: usize) -> f64 {
        let v = 1.0 - self.u(n) - self.w(n);
        // At the lambda floor v(2) is 0 exactly; drop the rounding residue.
        if v < 0.0 && v > -1e-12 {
            0.0
        } else {
            v
        }
    }

    /// Unnormalized stationary weight; the weights sum to `1 + theta`.
    pub fn weight(&self, n: usize) -> f64 {
        let t = self.theta;
        if n <= 1 {
            return t;
        }
        chebyshev_formula(t, n)
    }

    /// Stationary mass beyond `K` for the untruncated walk.
    pub fn tail_mass(&self, k: usize) -> f64 {
        1.0 / (1.0 + (2.0 * k as f64 - 1.0) * self.theta)
    }
}

/// `2(1+theta)theta / ((1+(2n-1)theta)(1+(2n-3)theta))`.
pub fn chebyshev_formula(theta: f64, n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (1.0 + theta) * theta / ((1.0 + (2.0 * nf - 1.0) * theta) * (1.0 + (2.0 * nf - 3.0) * theta))
}

/// Smallest `n` with `sum_{k > n} formula(k) < xi / 2` (telescoped: `(1+theta)/(1+(2n-1)theta)`).
pub fn chebyshev_n_star(theta: f64, xi: f64) -> usize {
    let mut n = 1usize;
    while (1.0 + theta) / (1.0 + (2.0 * n as f64 - 1.0) * theta) >= xi / 2.0 {
        n += 1;
    }
    n
}

/// Smallest `n >= 2` with `formula(n) < xi / 2`.
pub fn chebyshev_pointwise_threshold(theta: f64, xi: f64) -> usize {
    let mut n = 2usize;
    while chebyshev_formula(theta, n) >= xi / 2.0 {
        n += 1;
    }
    n
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevChain {
    pub matrix: StochasticMatrix,
    /// Stationary weights renormalized over `1..=K`.
    pub pi_formula: Vec<f64>,
    /// Stationary mass of the untruncated walk beyond `K`.
    pub tail_mass: f64,
    pub repaired_mass: f64,
}

pub fn chebyshev_chain(spec: &ChebyshevSpec) -> Result<ChebyshevChain> {
    spec.validate()?;
    let k = spec.truncation;
    let bd = BirthDeathSpec {
        u: (1..=k).map(|n| spec.u(n)).collect(),
        v: (1..=k).map(|n| spec.v(n)).collect(),
        w: (1..=k).map(|n| spec.w(n)).collect(),
        boundary: Boundary::Reflect,
    };
    let built = build_birth_death(&bd)?;
    let weights: Vec<f64> = (1..=k).map(|n| spec.weight(n)).collect();
    let total: f64 = weights.iter().sum();
    Ok(ChebyshevChain {
        matrix: built.matrix,
        pi_formula: weights.iter().map(|w| w / total).collect(),
        tail_mass: spec.tail_mass(k),
        repaired_mass: built.repaired_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::stationary_distribution;

    #[test]
    fn two_state_truncation_is_two_point() {
        let spec =
            BirthDeathSpec { u: vec![0.0, 0.3], v: vec![0.8, 0.5], w: vec![0.2, 0.2], boundary: Boundary::Reflect };
        let bd = build_birth_death(&spec).unwrap();
        assert_eq!(bd.matrix.to_rows(), vec![vec![0.8, 0.2], vec![0.3, 0.7]]);
        assert_eq!(bd.repaired_mass, 0.2);
    }

    #[test]
    fn rejects_bad_sequences() {
        let spec =
            BirthDeathSpec { u: vec![0.1, 0.3], v: vec![0.7, 0.5], w: vec![0.2, 0.2], boundary: Boundary::Reflect };
        assert!(build_birth_death(&spec).is_err());
        let spec =
            BirthDeathSpec { u: vec![0.0, 0.3], v: vec![0.7, 0.5], w: vec![0.2, 0.3], boundary: Boundary::Reflect };
        assert!(build_birth_death(&spec).is_err());
    }

    #[test]
    fn constant_band_structure() {
        let (u, v, w) = (0.5, 0.3, 0.2);
        let seq = |c: f64| Sequence::constant(c);
        let mut spec = BirthDeathSpec::from_sequences(&seq(u), &seq(v), &seq(w), 6, Boundary::Reflect);
        spec.u[0] = 0.0;
        spec.v[0] = 0.0;
        spec.w[0] = 1.0;
        let m = build_birth_death(&spec).unwrap().matrix;
        assert_eq!(m.row(0), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.row(2), &[0.0, u, v, w, 0.0, 0.0]);
        assert_eq!(m.row(5), &[0.0, 0.0, 0.0, 0.0, u, v + w]);
    }

    #[test]
    fn chebyshev_weights_match_solve() {
        let spec = ChebyshevSpec { theta: 0.7, lambda: 0.5, truncation: 60 };
        let c = chebyshev_chain(&spec).unwrap();
        let pi = stationary_distribution(&c.matrix).unwrap();
        let l1: f64 = pi.entries().iter().zip(&c.pi_formula).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-10, "l1 = {l1}");
        let infinite: f64 = (1..200_000).map(|n| spec.weight(n)).sum::<f64>() / (1.0 + spec.theta);
        assert!((infinite - (1.0 - spec.tail_mass(199_999))).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_lambda_validity() {
        let theta = 1.0;
        let floor = ChebyshevSpec::lambda_floor(theta);
        assert!((floor - 0.25).abs() < 1e-15);
        let bad = ChebyshevSpec { theta, lambda: 0.2, truncation: 10 };
        assert!(matches!(chebyshev_chain(&bad), Err(Error::InvalidLambda { .. })));
        let edge = ChebyshevSpec { theta, lambda: floor, truncation: 10 };
        let c = chebyshev_chain(&edge).unwrap();
        assert!(c.matrix.get(1, 1) >= 0.0);
    }

    #[test]
    fn weights_decay_like_inverse_square() {
        let theta = 0.5;
        for &n in &[100usize, 1000, 10000] {
            let scaled = chebyshev_formula(theta, n) * (n * n) as f64;
            assert!((scaled - (1.0 + theta) / (2.0 * theta)).abs() < 5.0 / n as f64);
        }
    }

    #[test]
    fn pointwise_threshold_respects_sqrt_cap() {
        for &theta in &[0.2, 1.0, 3.0] {
            for &xi in &[0.5, 0.1, 0.01, 1e-4] {
                let n = chebyshev_pointwise_threshold(theta, xi) as f64;
                assert!(n <= 2.0 + ((1.0 + theta) / (xi * theta)).sqrt(), "theta={theta} xi={xi}");
            }
        }
    }

    #[test]
    fn n_star_tail_grows_like_inverse_xi() {
        let theta = 1.0;
        let a = chebyshev_n_star(theta, 1e-2) as f64;
        let b = chebyshev_n_star(theta, 1e-3) as f64;
        assert!((b / a - 10.0).abs() < 0.2);
        assert!(b > 2.0 + ((1.0 + theta) / (1e-3 * theta)).sqrt());
    }
}
