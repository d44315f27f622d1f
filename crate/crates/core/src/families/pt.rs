//! The countable family `P_T`, `T = (q, mu, nu)`, on states `1, 2, ...`.
//!
//! ```text
//! P(1, 1) = 1 - q        P(1, x) = q mu_x            (x >= 2)
//! P(x, 1) = nu_x         P(x, x) = 1 - nu_x          (x >= 2)
//! Z = 1 + q sum_{y>=2} mu_y / nu_y
//! pi(1) = 1 / Z          pi(x) = q mu_x / (nu_x Z)
//! ```
//!
//! Class `T`: `q > 0`, `mu` a positive probability sequence on `x >= 2`, `nu` in
//! `(0, 1]`, `sum mu / nu < inf`. Class `S` adds `q <= 1/4` and `nu` nonincreasing
//! with values in `(0, 1/2]`.
//!
//! The truncation `P_{T,K}` keeps states `1..=K` and puts the mass of the removed
//! jumps back on `P(1, 1) = 1 - q + q sum_{x>K} mu_x`. Its stationary law is the
//! formula above restricted to `1..=K` and renormalized, and its Dobrushin
//! coefficient is `1 - nu_K` on class `S`.
//!
//! ```text
//! beta(t) <= 2 (1 - nu_K)^t + 7 sum_{x>K} pi(x) + 2 t q sum_{x>K} mu_x        (K with tail <= 1/2)
//! beta(t) >= pi(y)/2 (1/4 - pi(y)),  y = ceil(t^(1/a)),  when nu_x = min(1/2, x^-a)
//! ```

use serde::{Deserialize, Serialize};

use crate::chain::{ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::families::sequence::Sequence;
use crate::mixing::PValue;

/// Largest stationary tail accepted by [`pt_chain`].
pub const MAX_TAIL_MASS: f64 = 0.1;
/// States checked explicitly when testing monotonicity and ranges beyond the truncation.
const FINITE_CHECK_HORIZON: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtSpec {
    pub q: f64,
    /// Probability sequence on `x >= 2`.
    pub mu: Sequence,
    /// Holding-escape probabilities on `x >= 2`.
    pub nu: Sequence,
    pub truncation: usize,
}

impl PtSpec {
    /// Rescales `mu` so that `sum_{x>=2} mu_x = 1`.
    pub fn with_normalized_mu(mut self) -> Result<Self> {
        let total = self.mu.sum_from(2)?;
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NotInT(format!("mu has total mass {total}")));
        }
        self.mu = self.mu.scaled(1.0 / total);
        Ok(self)
    }

    fn check_horizon(&self) -> usize {
        self.truncation.max(FINITE_CHECK_HORIZON)
    }

    pub fn mu_over_nu(&self) -> Sequence {
        Sequence::quotient(self.mu.clone(), self.nu.clone())
    }

    /// Checks membership in `T`.
    pub fn check_t(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::NotInT(format!("q = {} is not in (0, 1)", self.q)));
        }
        if self.truncation < 2 {
            return Err(Error::NotInT("truncation must keep at least two states".into()));
        }
        // Positivity is checked on the retained states only; closed forms may underflow further out.
        for x in 2..=self.check_horizon() {
            let (m, n) = (self.mu.eval(x), self.nu.eval(x));
            if x <= self.truncation && !(m > 0.0) {
                return Err(Error::NotInT(format!("mu_{x} = {m} is not positive")));
            }
            if !(n > 0.0 || x > self.truncation) || n > 1.0 || n.is_nan() {
                return Err(Error::NotInT(format!("nu_{x} = {n} is not in (0, 1]")));
            }
        }
        let total = self.mu.sum_from(2)?;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotInT(format!("mu sums to {total}, not 1")));
        }
        let ratio = self.mu_over_nu();
        if !ratio.is_summable() {
            return Err(Error::NotInT("sum mu / nu diverges".into()));
        }
        Ok(())
    }

    /// Checks membership in `S`.
    pub fn check_s(&self) -> Result<()> {
        self.check_t().map_err(|e| Error::NotInS(e.to_string()))?;
        if self.q > 0.25 {
            return Err(Error::NotInS(format!("q = {} exceeds 1/4", self.q)));
        }
        let mut prev = f64::INFINITY;
        for x in 2..=self.check_horizon() {
            let n = self.nu.eval(x);
            if n > 0.5 {
                return Err(Error::NotInS(format!("nu_{x} = {n} exceeds 1/2")));
            }
            if n > prev {
                return Err(Error::NotInS(format!("nu increases at x = {x}")));
            }
            prev = n;
        }
        Ok(())
    }

    pub fn in_t(&self) -> bool {
        self.check_t().is_ok()
    }

    pub fn in_s(&self) -> bool {
        self.check_s().is_ok()
    }

    /// `Z = 1 + q sum_{y>=2} mu_y / nu_y`.
    pub fn normalizer(&self) -> Result<f64> {
        Ok(1.0 + self.q * self.mu_over_nu().sum_from(2)?)
    }

    /// Stationary probability of state `x` for the untruncated chain.
    pub fn pi(&self, x: usize) -> Result<f64> {
        let z = self.normalizer()?;
        Ok(self.pi_with(x, z))
    }

    fn pi_with(&self, x: usize, z: f64) -> f64 {
        if x <= 1 {
            1.0 / z
        } else {
            self.q * self.mu.eval(x) / (self.nu.eval(x) * z)
        }
    }

    /// `sum_{x>k} pi(x)` for the untruncated chain.
    pub fn stationary_tail(&self, k: usize) -> Result<f64> {
        let z = self.normalizer()?;
        Ok(self.q * self.mu_over_nu().tail_sum(k.max(1))?.value / z)
    }

    /// `sum_{x>k} mu_x`.
    pub fn mu_tail(&self, k: usize) -> Result<f64> {
        Ok(self.mu.tail_sum(k.max(1))?.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtChain {
    /// `P_{T,K}`; index `i` is state `i + 1`.
    pub matrix: StochasticMatrix,
    /// Stationary law of the truncation.
    pub pi: ProbabilityVector,
    /// Stationary mass of the untruncated chain beyond `K`.
    pub tail_mass: f64,
    pub normalizer: f64,
}

/// Builds `P_{T,K}` and its stationary law.
pub fn pt_chain(spec: &PtSpec) -> Result<PtChain> {
    spec.check_t()?;
    let k = spec.truncation;
    let z = spec.normalizer()?;
    let tail_mass = spec.stationary_tail(k)?;
    if tail_mass > MAX_TAIL_MASS {
        return Err(Error::TruncationTooCoarse { tail: tail_mass, limit: MAX_TAIL_MASS });
    }
    let mut rows = vec![vec![0.0; k]; k];
    let mut kept = 0.0;
    for x in 2..=k {
        let jump = spec.q * spec.mu.eval(x);
        rows[0][x - 1] = jump;
        kept += jump;
        let nu = spec.nu.eval(x);
        rows[x - 1][0] = nu;
        rows[x - 1][x - 1] = 1.0 - nu;
    }
    rows[0][0] = 1.0 - kept;
    let matrix = StochasticMatrix::new(rows)?;
    let weights: Vec<f64> = (1..=k).map(|x| spec.pi_with(x, z)).collect();
    let total: f64 = weights.iter().sum();
    let pi = ProbabilityVector::new(weights.iter().map(|w| w / total).collect())?;
    Ok(PtChain { matrix, pi, tail_mass, normalizer: z })
}

/// The three terms of the upper bound on `beta(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtUpperTerms {
    pub k_inner: usize,
    /// `2 (1 - nu_K)^t`.
    pub contraction: f64,
    /// `ln` of the contraction term, finite even when the term underflows.
    pub ln_contraction: f64,
    /// `7 sum_{x>K} pi(x)`.
    pub stationary_tail: f64,
    /// `2 t q sum_{x>K} mu_x`.
    pub truncation_drift: f64,
}

impl PtUpperTerms {
    pub fn total(&self) -> f64 {
        self.contraction + self.stationary_tail + self.truncation_drift
    }

    /// `ln` of the total, computed without underflow.
    pub fn ln_total(&self) -> f64 {
        let others = self.stationary_tail + self.truncation_drift;
        let m = self.ln_contraction.max(if others > 0.0 { others.ln() } else { f64::NEG_INFINITY });
        let mut s = (self.ln_contraction - m).exp();
        if others > 0.0 {
            s += (others.ln() - m).exp();
        }
        m + s.ln()
    }
}

pub fn pt_beta_upper_terms(spec: &PtSpec, t: usize, k_inner: usize) -> Result<PtUpperTerms> {
    spec.check_s()?;
    if k_inner < 2 {
        return Err(Error::InvalidRange(format!("K_inner must be >= 2, got {k_inner}")));
    }
    let tail = spec.stationary_tail(k_inner)?;
    if tail > 0.5 {
        return Err(Error::TailTooHeavy { k_inner, tail });
    }
    let nu_k = spec.nu.eval(k_inner);
    let ln_contraction = 2f64.ln() + t as f64 * (-nu_k).ln_1p();
    Ok(PtUpperTerms {
        k_inner,
        contraction: ln_contraction.exp(),
        ln_contraction,
        stationary_tail: 7.0 * tail,
        truncation_drift: 2.0 * t as f64 * spec.q * spec.mu_tail(k_inner)?,
    })
}

/// `2 (1 - nu_K)^t + 7 sum_{x>K} pi(x) + 2 t q sum_{x>K} mu_x`.
pub fn pt_beta_upper(spec: &PtSpec, t: usize, k_inner: usize) -> Result<f64> {
    Ok(pt_beta_upper_terms(spec, t, k_inner)?.total())
}

/// Minimizes the upper bound over `points` log-spaced `K_inner` in `[2, k_max]`.
///
/// Grid points violating the tail condition are skipped; ties keep the smallest `K_inner`.
pub fn pt_beta_upper_best(spec: &PtSpec, t: usize, k_max: usize, points: usize) -> Result<PtUpperTerms> {
    let mut grid: Vec<usize> = (0..points.max(2))
        .map(|i| {
            let frac = i as f64 / (points.max(2) - 1) as f64;
            (2f64 * (k_max as f64 / 2.0).powf(frac)).round() as usize
        })
        .collect();
    grid.dedup();
    let mut best: Option<PtUpperTerms> = None;
    for k in grid {
        match pt_beta_upper_terms(spec, t, k) {
            Ok(terms) => {
                if best.is_none_or(|b| terms.ln_total() < b.ln_total()) {
                    best = Some(terms);
                }
            }
            Err(Error::TailTooHeavy { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::TailTooHeavy { k_inner: k_max, tail: spec.stationary_tail(k_max)? })
}

/// `pi(y)/2 (1/4 - pi(y))` with `y = ceil(t^(1/a))`; requires `nu_x = min(1/2, x^-a)`.
pub fn pt_beta_lower(spec: &PtSpec, t: usize, a: f64) -> Result<f64> {
    spec.check_s()?;
    if t < 2 || !(a > 0.0) {
        return Err(Error::InvalidRange(format!("lower bound needs t >= 2 and a > 0, got t={t}, a={a}")));
    }
    let y = (t as f64).powf(1.0 / a).ceil() as usize;
    for x in 2..=spec.truncation.max(y) {
        let want = 0.5f64.min((x as f64).powf(-a));
        let got = spec.nu.eval(x);
        if (got - want).abs() > 1e-12 {
            return Err(Error::WrongNuShape(format!("nu_{x} = {got}, expected {want}")));
        }
    }
    let p = spec.pi(y)?;
    Ok(p / 2.0 * (0.25 - p))
}

/// Whether the summability series is evaluated over the truncation or the whole chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateScope {
    Truncated,
    Infinite,
}

/// Weak V-geometric certificate `V = D = (1, mu_2^-1/2, mu_3^-1/2, ...)`, `b = q sum sqrt(mu)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtCertificate {
    pub v: Vec<f64>,
    pub d: Vec<f64>,
    pub b: f64,
    /// `sum_{x>=2} mu_x^(r/2) / nu_x^r`, `r = (1 - 1/p)/2`, over the requested scope.
    pub summability: f64,
    pub scope: CertificateScope,
}

pub fn pt_weak_vgeo_certificate(spec: &PtSpec, p: PValue, scope: CertificateScope) -> Result<PtCertificate> {
    spec.check_t()?;
    if p.conjugate_weight() <= 0.0 {
        return Err(Error::InvalidRange("certificate needs p > 1".into()));
    }
    let k = spec.truncation;
    let r = p.r();
    let root_mu = Sequence::pow(spec.mu.clone(), 0.5);
    let b = spec.q * root_mu.sum_from(2).map_err(|e| Error::SummabilityFailure(format!("sum sqrt(mu): {e}")))?;
    let mut v = vec![1.0; k];
    for x in 2..=k {
        v[x - 1] = 1.0 / spec.mu.eval(x).sqrt();
    }
    let series = Sequence::quotient(Sequence::pow(spec.mu.clone(), r / 2.0), Sequence::pow(spec.nu.clone(), r));
    let summability = match scope {
        CertificateScope::Truncated => (2..=k).map(|x| series.eval(x)).sum(),
        CertificateScope::Infinite => {
            if !series.is_summable() {
                return Err(Error::SummabilityFailure(format!("sum mu^{:.4} / nu^{:.4} diverges", r / 2.0, r)));
            }
            series.sum_from(2)?
        }
    };
    Ok(PtCertificate { d: v.clone(), v, b, summability, scope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{dobrushin_coefficient, stationary_distribution};

    fn geometric_spec(k: usize) -> PtSpec {
        PtSpec { q: 0.2, mu: Sequence::geometric(1.0, 0.5), nu: Sequence::constant(0.3), truncation: k }
            .with_normalized_mu()
            .unwrap()
    }

    #[test]
    fn geometric_mu_matches_stationary_solve() {
        let spec = geometric_spec(40);
        let c = pt_chain(&spec).unwrap();
        let solved = stationary_distribution(&c.matrix).unwrap();
        let l1: f64 = solved.entries().iter().zip(c.pi.entries()).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-9, "l1 = {l1}");
        let z = 1.0 + 0.2 / 0.3;
        assert!((spec.pi(1).unwrap() - 1.0 / z).abs() < 1e-14);
    }

    #[test]
    fn dobrushin_at_most_q_when_nu_large() {
        let spec = PtSpec { q: 0.3, mu: Sequence::geometric(1.0, 0.5), nu: Sequence::constant(0.8), truncation: 30 }
            .with_normalized_mu()
            .unwrap();
        let c = pt_chain(&spec).unwrap();
        assert!(dobrushin_coefficient(&c.matrix) <= 0.3 + 1e-15);
    }

    #[test]
    fn class_checks() {
        let spec = geometric_spec(20);
        assert!(spec.in_t() && spec.in_s());
        let mut wide = spec.clone();
        wide.q = 0.5;
        assert!(wide.in_t() && !wide.in_s());
        let mut bad = spec.clone();
        bad.nu = Sequence::constant(0.0);
        assert!(!bad.in_t());
        let unnormalized = PtSpec { mu: Sequence::geometric(1.0, 0.5), ..spec };
        assert!(matches!(unnormalized.check_t(), Err(Error::NotInT(_))));
    }

    #[test]
    fn coarse_truncation_rejected() {
        let spec = PtSpec { q: 0.2, mu: Sequence::power(1.0, 1.2), nu: Sequence::power(1.0, 0.1), truncation: 3 }
            .with_normalized_mu()
            .unwrap();
        assert!(matches!(pt_chain(&spec), Err(Error::TruncationTooCoarse { .. })));
    }

    #[test]
    fn upper_bound_is_vacuous_at_zero() {
        let spec = geometric_spec(30);
        assert!(pt_beta_upper(&spec, 0, 10).unwrap() >= 2.0);
    }

    #[test]
    fn lower_bound_by_substitution() {
        let nu = Sequence::capped_power(0.5, 1.0);
        let mu = Sequence::product(vec![nu.clone(), Sequence::power(1.0, 2.5)]);
        let spec = PtSpec { q: 0.2, mu, nu, truncation: 50 }.with_normalized_mu().unwrap();
        let p4 = spec.pi(4).unwrap();
        assert!((pt_beta_lower(&spec, 4, 1.0).unwrap() - p4 / 2.0 * (0.25 - p4)).abs() < 1e-16);
        assert!(matches!(pt_beta_lower(&spec, 4, 2.0), Err(Error::WrongNuShape(_))));
    }

    #[test]
    fn certificate_geometric_is_accepted() {
        let spec = geometric_spec(30);
        let cert = pt_weak_vgeo_certificate(&spec, PValue::Finite(2.0), CertificateScope::Infinite).unwrap();
        let mu_total = spec.mu.sum_from(2).unwrap();
        assert!((mu_total - 1.0).abs() < 1e-12);
        // mu_x = c 2^-x with c = 2 on x >= 2, so sum sqrt(mu) = sqrt(2) * sum_{x>=2} 2^(-x/2).
        let r = 0.5f64.sqrt();
        let expect = 0.2 * 2f64.sqrt() * r * r / (1.0 - r);
        assert!((cert.b - expect).abs() < 1e-12);
        assert_eq!(cert.v[0], 1.0);
    }

    #[test]
    fn certificate_divergent_series_fails() {
        let nu = Sequence::capped_power(0.5, 1.0);
        let mu = Sequence::product(vec![nu.clone(), Sequence::power(1.0, 2.5)]);
        let spec = PtSpec { q: 0.2, mu, nu, truncation: 50 }.with_normalized_mu().unwrap();
        let res = pt_weak_vgeo_certificate(&spec, PValue::Finite(2.0), CertificateScope::Infinite);
        assert!(matches!(res, Err(Error::SummabilityFailure(_))));
        assert!(pt_weak_vgeo_certificate(&spec, PValue::Finite(2.0), CertificateScope::Truncated).is_ok());
    }
}
