//! Closed-form bounds and sample-size calculators.
//!
//! Every calculator takes its constants explicitly; defaults come from the
//! constructive arguments behind each bound and can be overridden.

mod certificates;
mod json;
mod rate;

pub use certificates::{jps_bound, weak_vgeo_check, ErgodicCertificate, WeakVGeoCheck};
pub use json::{evaluate_json, BoundRequest, BoundResponse};
pub use rate::{bp_bound, deviation_sample_size, DeviationSampleSize, RateKind, RateModel};

use serde::{Deserialize, Serialize};

use crate::chain::ProbabilityVector;
use crate::error::{Error, Result};
use crate::mixing::PValue;

/// Constant of the uniformly ergodic bounds, `3 sqrt(2)`.
pub const C_UNIFORM: f64 = 3.0 * std::f64::consts::SQRT_2;
/// Default `C` of the general ergodic average-mixing sample size.
pub const C_ERGODIC_DEFAULT: f64 = 128.0;

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidRange(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn ceil_to_usize(v: f64) -> Result<usize> {
    if !v.is_finite() || v >= usize::MAX as f64 {
        return Err(Error::InvalidRange(format!("sample size {v} is not representable")));
    }
    Ok(v.ceil().max(0.0) as usize)
}

/// `3 sqrt((1/2 + bp) jp / floor((n-1)/s))`.
pub fn mad_bound_general(bp: f64, jp: f64, s: usize, n: usize) -> Result<f64> {
    if s == 0 || n <= s {
        return Err(Error::SkipTooLarge { s, n });
    }
    let m = ((n - 1) / s) as f64;
    Ok(3.0 * ((0.5 + bp) * jp / m).sqrt())
}

/// Constants of the general ergodic PAC sample size
/// `1 + ceil(c_outer log(L/delta)/eps^2 max{c_inner s bp jp / eps^2, t_sharp(eps^2 delta / (c_xi log(L/delta)))})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacConstants {
    pub c_outer: f64,
    pub c_inner: f64,
    pub c_xi: f64,
    pub log_scale: f64,
}

impl PacConstants {
    /// Values carried through the blocking argument.
    pub const PROOF: PacConstants = PacConstants { c_outer: 64.0, c_inner: 64.0, c_xi: 128.0, log_scale: 8.0 };

    /// One universal constant `c` in every slot and `log(1/delta)`.
    pub fn statement(c: f64) -> Self {
        PacConstants { c_outer: c, c_inner: c, c_xi: c, log_scale: 1.0 }
    }
}

impl Default for PacConstants {
    fn default() -> Self {
        Self::PROOF
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacSampleSize {
    pub n: usize,
    /// Threshold handed to `t_sharp`.
    pub xi: f64,
    pub t_sharp: usize,
    pub constants: PacConstants,
}

pub fn pac_sample_size_general(
    eps: f64,
    delta: f64,
    s: usize,
    bp: f64,
    jp: f64,
    t_sharp: &dyn Fn(f64) -> Result<usize>,
    constants: PacConstants,
) -> Result<PacSampleSize> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    if s == 0 {
        return Err(Error::InvalidRange("skip must be >= 1".into()));
    }
    let log_term = (constants.log_scale / delta).ln();
    let xi = eps * eps * delta / (constants.c_xi * log_term);
    let ts = t_sharp(xi)?;
    let branch = (constants.c_inner * s as f64 * bp * jp / (eps * eps)).max(ts as f64);
    let n = 1 + ceil_to_usize(constants.c_outer * log_term / (eps * eps) * branch)?;
    Ok(PacSampleSize { n, xi, t_sharp: ts, constants })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformBounds {
    pub mad_bound: f64,
    pub pac_n: usize,
}

/// `C_u sqrt((t_mix + 2s)/(n-1) J_inf)` and `1 + ceil(4(t_mix + 2s)/eps^2 max{C_u^2 J_inf, 576 log(2/delta)})`.
pub fn mad_and_pac_uniform(
    eps: f64,
    delta: f64,
    s: usize,
    t_mix: usize,
    j_inf: f64,
    n: usize,
) -> Result<UniformBounds> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    if s == 0 {
        return Err(Error::InvalidRange("skip must be >= 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidRange(format!("n must be >= 2, got {n}")));
    }
    let span = (t_mix + 2 * s) as f64;
    let mad_bound = C_UNIFORM * (span / (n - 1) as f64 * j_inf).sqrt();
    let inner = (C_UNIFORM * C_UNIFORM * j_inf).max(576.0 * (2.0 / delta).ln());
    let pac_n = 1 + ceil_to_usize(4.0 * span / (eps * eps) * inner)?;
    Ok(UniformBounds { mad_bound, pac_n })
}

/// One `(p, B_p, J_{p, xi(1-eps)})` candidate of the ergodic minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicCandidate {
    pub p: PValue,
    pub bp: f64,
    pub jp: f64,
}

/// Inputs of the average-mixing-time sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AtmixInput {
    /// `j_inf` is `J_{inf, xi(1-eps)}`.
    Uniform { t_mix: usize, j_inf: f64 },
    /// `J` replaced by `|X|^2`.
    Finite { t_mix: usize, size: usize },
    /// `t_sharp_outer = t_sharp(eps^2 delta/(C log(1/delta)))`, `t_sharp_xi = t_sharp(xi)`.
    Ergodic {
        candidates: Vec<ErgodicCandidate>,
        t_sharp_outer: usize,
        t_sharp_xi: usize,
        #[serde(default = "default_c_erg")]
        c_erg: f64,
    },
}

fn default_c_erg() -> f64 {
    C_ERGODIC_DEFAULT
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtmixSampleSize {
    pub n: usize,
    /// Index into the candidate list for the ergodic mode.
    pub chosen: Option<usize>,
}

/// `eps^2 delta / (c log(1/delta))`, the threshold of the outer `t_sharp` in the ergodic mode.
pub fn atmix_outer_xi(eps: f64, delta: f64, c_erg: f64) -> f64 {
    eps * eps * delta / (c_erg * (1.0 / delta).ln())
}

fn ceil_log2(v: f64) -> f64 {
    v.log2().ceil()
}

pub fn atmix_sample_size(xi: f64, eps: f64, delta: f64, input: &AtmixInput) -> Result<AtmixSampleSize> {
    check_unit("xi", xi)?;
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    let low = xi * (1.0 - eps);
    if !(low > 0.0) {
        return Err(Error::InvalidBand { value: low });
    }
    let uniform = |t_mix: usize, j: f64| -> Result<usize> {
        let t = t_mix as f64;
        let lead = 4.0 * t * (1.0 + ceil_log2(1.0 / low)) / (xi * xi * eps * eps);
        let log_arg = 4.0 * t * ceil_log2(1.0 / xi) / delta;
        let inner = (C_UNIFORM * C_UNIFORM * j).max(576.0 * log_arg.ln());
        Ok(1 + ceil_to_usize(lead * inner)?)
    };
    match input {
        AtmixInput::Uniform { t_mix, j_inf } => Ok(AtmixSampleSize { n: uniform(*t_mix, *j_inf)?, chosen: None }),
        AtmixInput::Finite { t_mix, size } => {
            Ok(AtmixSampleSize { n: uniform(*t_mix, (*size as f64).powi(2))?, chosen: None })
        }
        AtmixInput::Ergodic { candidates, t_sharp_outer, t_sharp_xi, c_erg } => {
            let (chosen, best) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.bp * c.jp))
                .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
                    Some((_, b)) if b <= v => acc,
                    _ => Some((i, v)),
                })
                .ok_or_else(|| Error::InvalidRange("ergodic mode needs at least one candidate".into()))?;
            let x4e4 = (xi * eps).powi(4);
            let log_term = (4.0 * *t_sharp_xi as f64 / delta).ln();
            let n = 1 + ceil_to_usize(c_erg * c_erg * *t_sharp_outer as f64 / x4e4 * best * log_term)?;
            Ok(AtmixSampleSize { n, chosen: Some(chosen) })
        }
    }
}

/// `(sum_x pi(x) (mu(x)/pi(x))^q)^(1/q)`.
pub fn nonstationary_multiplier(mu: &ProbabilityVector, pi: &ProbabilityVector, q: f64) -> Result<f64> {
    if mu.len() != pi.len() {
        return Err(Error::DimensionMismatch { expected: pi.len(), got: mu.len() });
    }
    if !(q > 1.0) {
        return Err(Error::InvalidRange(format!("q must exceed 1, got {q}")));
    }
    let mut total = 0.0;
    for (x, (&m, &p)) in mu.entries().iter().zip(pi.entries()).enumerate() {
        if p == 0.0 {
            if m > 0.0 {
                return Err(Error::NotAbsolutelyContinuous { state: x });
            }
            continue;
        }
        total += p * (m / p).powf(q);
    }
    Ok(total.powf(1.0 / q))
}

/// `4 (n-1) pi(x)^(1-1/p) B_p`, bounding `Var(sum_{t<n} 1{X_t = x})`.
pub fn variance_bound_visits(pi_x: f64, p: PValue, n: usize, bp: f64) -> f64 {
    4.0 * n.saturating_sub(1) as f64 * pi_x.powf(p.conjugate_weight()) * bp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mad_bound_scaling() {
        assert_eq!(mad_bound_general(1.0, 0.0, 1, 10).unwrap(), 0.0);
        let a = mad_bound_general(1.0, 2.0, 1, 101).unwrap();
        let b = mad_bound_general(1.0, 2.0, 1, 401).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!(mad_bound_general(1.0, 2.0, 5, 5).is_err());
    }

    #[test]
    fn pac_first_branch_scales_as_eps_minus_four() {
        let ts = |_: f64| Ok(1usize);
        let a = pac_sample_size_general(0.2, 0.1, 1, 10.0, 10.0, &ts, PacConstants::statement(1.0)).unwrap();
        let b = pac_sample_size_general(0.1, 0.1, 1, 10.0, 10.0, &ts, PacConstants::statement(1.0)).unwrap();
        let ratio = (b.n - 1) as f64 / (a.n - 1) as f64;
        assert!((ratio - 16.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn uniform_pac_linear_in_span() {
        let a = mad_and_pac_uniform(0.1, 0.1, 1, 3, 2.0, 100).unwrap();
        let b = mad_and_pac_uniform(0.1, 0.1, 1, 8, 2.0, 100).unwrap();
        assert!((((b.pac_n - 1) as f64) / ((a.pac_n - 1) as f64) - 2.0).abs() < 1e-3);
        assert!(mad_and_pac_uniform(0.1, 0.1, 0, 3, 2.0, 100).is_err());
    }

    #[test]
    fn finite_mode_hand_value() {
        // xi = 0.2, eps = 0.25: ceil(log2(1/0.15)) = 3, ceil(log2 5) = 3.
        let n = atmix_sample_size(0.2, 0.25, 0.1, &AtmixInput::Finite { t_mix: 3, size: 2 }).unwrap().n;
        let lead = 4.0 * 3.0 * 4.0 / (0.04 * 0.0625);
        let inner = (18.0f64 * 4.0).max(576.0 * (4.0f64 * 3.0 * 3.0 / 0.1).ln());
        assert_eq!(n, 1 + (lead * inner).ceil() as usize);
    }

    #[test]
    fn ergodic_mode_tie_keeps_first() {
        let c = |p: f64, bp: f64, jp: f64| ErgodicCandidate { p: PValue::Finite(p), bp, jp };
        let input = AtmixInput::Ergodic {
            candidates: vec![c(2.0, 2.0, 3.0), c(4.0, 3.0, 2.0), c(8.0, 4.0, 4.0)],
            t_sharp_outer: 5,
            t_sharp_xi: 2,
            c_erg: 1.0,
        };
        assert_eq!(atmix_sample_size(0.2, 0.25, 0.1, &input).unwrap().chosen, Some(0));
    }

    #[test]
    fn multiplier_values() {
        let pi = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        for q in [1.5, 2.0, 4.0] {
            assert!((nonstationary_multiplier(&pi, &pi, q).unwrap() - 1.0).abs() < 1e-14);
            let e = ProbabilityVector::point(3, 1).unwrap();
            let want = 0.3f64.powf(1.0 / q - 1.0);
            assert!((nonstationary_multiplier(&e, &pi, q).unwrap() - want).abs() < 1e-12);
        }
        let pi0 = ProbabilityVector::new(vec![0.0, 1.0]).unwrap();
        let mu = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(nonstationary_multiplier(&mu, &pi0, 2.0), Err(Error::NotAbsolutelyContinuous { state: 0 })));
    }
}
