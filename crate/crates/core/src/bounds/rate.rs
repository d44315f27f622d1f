use serde::{Deserialize, Serialize};

use crate::bounds::{ceil_to_usize, check_unit};
use crate::error::{Error, Result};
use crate::mixing::{BetaProfile, PValue};
use crate::special::{riemann_zeta, upper_incomplete_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    /// `beta(s) <= beta0 exp(-beta1 s)`.
    Exponential,
    /// `beta(s) <= beta0 exp(-beta1 s^b)`, `b` in `(0, 1]`.
    SubExponential,
    /// `beta(0) <= beta0`, `beta(s) <= beta1 / s^b` for `s >= 1`.
    Polynomial,
}

/// Decay envelope of `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    pub kind: RateKind,
    pub beta0: f64,
    pub beta1: f64,
    pub b: f64,
}

impl RateModel {
    pub fn exponential(beta0: f64, beta1: f64) -> Result<Self> {
        RateModel { kind: RateKind::Exponential, beta0, beta1, b: 1.0 }.validated()
    }

    pub fn sub_exponential(beta0: f64, beta1: f64, b: f64) -> Result<Self> {
        RateModel { kind: RateKind::SubExponential, beta0, beta1, b }.validated()
    }

    pub fn polynomial(beta0: f64, beta1: f64, b: f64) -> Result<Self> {
        RateModel { kind: RateKind::Polynomial, beta0, beta1, b }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self.kind {
            RateKind::Exponential => self.beta0 >= 1.0 && self.beta1 > 0.0 && self.b == 1.0,
            RateKind::SubExponential => self.beta0 >= 1.0 && self.beta1 > 0.0 && self.b > 0.0 && self.b <= 1.0,
            RateKind::Polynomial => self.beta0 >= 0.0 && self.beta1 > 0.0 && self.b > 0.0,
        };
        if !ok {
            return Err(Error::HypothesisViolated(format!("rate parameters out of range: {self:?}")));
        }
        Ok(self)
    }

    /// Envelope value at `s`.
    pub fn envelope(&self, s: usize) -> f64 {
        match self.kind {
            RateKind::Exponential | RateKind::SubExponential => {
                self.beta0 * (-self.beta1 * (s as f64).powf(self.b)).exp()
            }
            RateKind::Polynomial if s == 0 => self.beta0,
            RateKind::Polynomial => self.beta1 / (s as f64).powf(self.b),
        }
    }

    /// Smallest `s >= 1` at which the envelope is at most `xi`; bounds `t_sharp(xi)` from above.
    pub fn t_sharp_upper(&self, xi: f64) -> Result<usize> {
        if !(xi > 0.0) {
            return Err(Error::InvalidRange(format!("xi must be positive, got {xi}")));
        }
        let raw = match self.kind {
            RateKind::Exponential | RateKind::SubExponential => {
                ((self.beta0 / xi).ln().max(0.0) / self.beta1).powf(1.0 / self.b)
            }
            RateKind::Polynomial => (self.beta1 / xi).powf(1.0 / self.b),
        };
        let mut s = ceil_to_usize(raw)?.max(1);
        // Guard against rounding right at the crossing.
        while self.envelope(s) > xi {
            s += 1;
        }
        Ok(s)
    }

    /// Tightest envelope of this kind with the given `beta0` (ignored for polynomial) and `b`
    /// that dominates `profile` pointwise on its horizon.
    pub fn fit(profile: &BetaProfile, kind: RateKind, beta0: f64, b: f64) -> Result<Self> {
        let values = profile.values();
        match kind {
            RateKind::Exponential | RateKind::SubExponential => {
                let b = if kind == RateKind::Exponential { 1.0 } else { b };
                let beta1 = values
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, v)| **v > 0.0)
                    .map(|(t, v)| (beta0 / v).ln() / (t as f64).powf(b))
                    .fold(f64::INFINITY, f64::min);
                let beta1 = if beta1.is_finite() { beta1 } else { 1.0 };
                RateModel { kind, beta0, beta1, b }.validated()
            }
            RateKind::Polynomial => {
                let beta1 = values.iter().enumerate().skip(1).map(|(t, v)| v * (t as f64).powf(b)).fold(0.0, f64::max);
                let beta1 = if beta1 > 0.0 { beta1 } else { f64::MIN_POSITIVE };
                RateModel { kind, beta0: values[0], beta1, b }.validated()
            }
        }
    }

    /// Whether the envelope dominates `profile` at every stored `t`.
    pub fn dominates(&self, profile: &BetaProfile) -> bool {
        profile.values().iter().enumerate().all(|(t, v)| *v <= self.envelope(t) * (1.0 + 1e-12))
    }
}

/// Upper bound on `B_p^(s)` for every `n`.
///
/// ```text
/// exponential      beta0^(1/p) / (1 - exp(-beta1 s / p))
/// sub-exponential  beta0^(1/p) (1 + exp(-beta1 s^b / p) + Gamma(1/b, s^b beta1 / p) / (b s (beta1/p)^(1/b)))
/// polynomial       beta0^(1/p) + zeta(b/p) beta1^(1/p) / s^(b/p)             (b/p > 1)
/// ```
pub fn bp_bound(model: &RateModel, p: PValue, s: usize) -> Result<f64> {
    model.validated()?;
    if s == 0 {
        return Err(Error::InvalidRange("skip must be >= 1".into()));
    }
    let inv = p.inverse();
    let sf = s as f64;
    let lead = model.beta0.powf(inv);
    match model.kind {
        RateKind::Exponential => Ok(lead / (1.0 - (-model.beta1 * sf * inv).exp())),
        RateKind::SubExponential => {
            if inv == 0.0 {
                return Ok(f64::INFINITY);
            }
            let rate = model.beta1 * inv;
            let x = sf.powf(model.b) * rate;
            let tail = upper_incomplete_gamma(1.0 / model.b, x)? / (model.b * sf * rate.powf(1.0 / model.b));
            Ok(lead * (1.0 + (-x).exp() + tail))
        }
        RateKind::Polynomial => {
            let r = model.b * inv;
            if !(r > 1.0) {
                return Err(Error::HypothesisViolated(format!("polynomial rate needs b/p > 1, got {r}")));
            }
            Ok(lead + riemann_zeta(r)? * model.beta1.powf(inv) / sf.powf(r))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationSampleSize {
    pub n: usize,
    /// Threshold handed to `t_sharp`; absent for the polynomial form.
    pub xi: Option<f64>,
    pub t_sharp: Option<usize>,
}

/// Trajectory length after which `P(mean of f > eps) <= delta` for centered `f` with values in `[-1, 1]`.
///
/// ```text
/// (sub-)exponential  n = ceil(8/eps^2 log(4/delta) 2^(1/b) t_sharp(xi)),  xi = delta eps^2 / (16 log(4/delta))
/// polynomial         n = ceil((8/eps^2 log(4/delta))^((b+1)/b) (2 beta1/delta)^(1/b))
/// ```
pub fn deviation_sample_size(
    model: &RateModel,
    eps: f64,
    delta: f64,
    t_sharp: &dyn Fn(f64) -> Result<usize>,
) -> Result<DeviationSampleSize> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    model.validated()?;
    let base = 8.0 / (eps * eps) * (4.0 / delta).ln();
    match model.kind {
        RateKind::Exponential | RateKind::SubExponential => {
            let xi = delta * eps * eps / (16.0 * (4.0 / delta).ln());
            let ts = t_sharp(xi)?;
            let n = ceil_to_usize(base * 2f64.powf(1.0 / model.b) * ts as f64)?;
            Ok(DeviationSampleSize { n, xi: Some(xi), t_sharp: Some(ts) })
        }
        RateKind::Polynomial => {
            let b = model.b;
            let n = ceil_to_usize(base.powf((b + 1.0) / b) * (2.0 * model.beta1 / delta).powf(1.0 / b))?;
            Ok(DeviationSampleSize { n, xi: None, t_sharp: None })
        }
    }
}
