//! The two-state chain `P = [[1-p, p], [q, 1-q]]`.
//!
//! ```text
//! pi       = (q, p) / (p + q)
//! d(t)     = max(p, q) / (p + q) * |1 - p - q|^t
//! beta(t)  = 2 p q / (p + q)^2 * |1 - p - q|^t
//! d / beta = (1 + eta) / (2 eta),  eta = min(p, q) / max(p, q)
//! ```
//!
//! Shrinking `eta` makes `t_mix(xi) / t_sharp(xi)` as large as desired, which
//! [`gap_search`] does constructively.

use serde::Serialize;

use crate::chain::{ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::mixing::mixing_times;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointChain {
    p: f64,
    q: f64,
}

/// Closed-form distances at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPointForms {
    pub d_sharp: f64,
    pub d: f64,
    pub pi: ProbabilityVector,
}

impl TwoPointChain {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
            return Err(Error::InvalidRange(format!("two-point chain needs p, q in (0, 1), got p={p}, q={q}")));
        }
        Ok(TwoPointChain { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn matrix(&self) -> StochasticMatrix {
        StochasticMatrix::new(vec![vec![1.0 - self.p, self.p], vec![self.q, 1.0 - self.q]])
            .expect("two-point rows are stochastic")
    }

    pub fn stationary(&self) -> ProbabilityVector {
        let s = self.p + self.q;
        ProbabilityVector::new(vec![self.q / s, self.p / s]).expect("two-point stationary law is valid")
    }

    /// `min(p, q) / max(p, q)`.
    pub fn eta(&self) -> f64 {
        self.p.min(self.q) / self.p.max(self.q)
    }

    /// `d(t) / beta(t) = (1 + eta) / (2 eta)`.
    pub fn distance_ratio(&self) -> f64 {
        let eta = self.eta();
        (1.0 + eta) / (2.0 * eta)
    }
}

/// `beta(t)`, `d(t)` and `pi` from the closed forms.
pub fn two_point_closed_forms(c: &TwoPointChain, t: usize) -> TwoPointForms {
    let (p, q) = (c.p, c.q);
    let s = p + q;
    let decay = (1.0 - s).abs().powi(t as i32);
    TwoPointForms { d_sharp: 2.0 * p * q / (s * s) * decay, d: p.max(q) / s * decay, pi: c.stationary() }
}

/// A two-point chain whose mixing and average-mixing times differ by more than a factor `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSearchResult {
    pub p: f64,
    pub q: f64,
    pub eta: f64,
    pub t_mix: usize,
    pub t_sharp: usize,
    /// `t_mix / t_sharp`, from exact matrix computation.
    pub ratio: f64,
    pub evaluations: usize,
}

/// Finds `(p, q)` with `t_mix(xi) > M t_sharp(xi)`.
///
/// Walks `p + q = 2^-j / 2` for `j = 0, 1, ...` and, inside each level, shrinks
/// `eta = 2^-k` until `t_sharp` bottoms out at 1.
pub fn gap_search(xi: f64, m: f64, budget: usize) -> Result<GapSearchResult> {
    if !(m >= 1.0) {
        return Err(Error::InvalidRange(format!("gap_search needs M >= 1, got {m}")));
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidRange(format!("xi must lie in (0, 1), got {xi}")));
    }
    let mut evaluations = 0usize;
    for j in 0..40 {
        let sigma = 0.5 * 0.5f64.powi(j);
        for k in 1..60 {
            if evaluations >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
            evaluations += 1;
            let eta = 0.5f64.powi(k);
            let chain = TwoPointChain::new(eta * sigma / (1.0 + eta), sigma / (1.0 + eta))?;
            let p = chain.matrix();
            let pi = chain.stationary();
            // d(t) <= (1 - sigma)^t, so this cap always reaches t_mix.
            let t_cap = ((1.0 / xi).ln() / sigma).ceil() as usize + 2;
            let report = mixing_times(&p, &pi, xi, t_cap)?;
            let (Some(t_mix), Some(t_sharp)) = (report.t_mix, report.t_sharp) else {
                continue;
            };
            let ratio = t_mix as f64 / t_sharp as f64;
            if ratio > m {
                return Ok(GapSearchResult { p: chain.p, q: chain.q, eta, t_mix, t_sharp, ratio, evaluations });
            }
            if t_sharp == 1 {
                break;
            }
        }
    }
    Err(Error::BudgetExhausted { budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let c = TwoPointChain::new(0.1, 0.4).unwrap();
        let f = two_point_closed_forms(&c, 2);
        assert!((f.d_sharp - 0.08).abs() < 1e-15);
        assert!((f.d - 0.2).abs() < 1e-15);
        let c = TwoPointChain::new(0.3, 0.7).unwrap();
        assert_eq!(two_point_closed_forms(&c, 1).d_sharp, 0.0);
    }

    #[test]
    fn symmetric_case_has_equal_distances() {
        let c = TwoPointChain::new(0.2, 0.2).unwrap();
        for t in 0..10 {
            let f = two_point_closed_forms(&c, t);
            assert!((f.d - f.d_sharp).abs() < 1e-15);
        }
        assert_eq!(c.distance_ratio(), 1.0);
    }

    #[test]
    fn gap_search_unit_target() {
        let r = gap_search(0.1, 1.0, 1000).unwrap();
        assert!(r.ratio > 1.0);
        assert!(r.p != r.q);
    }

    #[test]
    fn gap_search_budget() {
        assert!(matches!(gap_search(0.1, 1000.0, 3), Err(Error::BudgetExhausted { budget: 3 })));
    }
}
