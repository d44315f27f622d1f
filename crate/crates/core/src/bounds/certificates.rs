use serde::{Deserialize, Serialize};

use crate::chain::{power_sum, ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::mixing::PValue;

/// Structural facts that bound `J_p^(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErgodicCertificate {
    /// `||e_x P^s - pi||_V <= M V(x) theta^s`.
    VGeometric { v: Vec<f64>, m: f64, theta: f64 },
    /// `P(x, .) <= C nu(.)` for every `x`.
    Dominating { c: f64, nu: ProbabilityVector },
    /// `sup_x' V(x') (P^s(x, x') - pi(x')) <= D(x) + b (s - 1)`.
    WeakVGeometric { v: Vec<f64>, d: Vec<f64>, b: f64 },
    /// Connection graph growth `g(s) <= G s^q`.
    PolynomialGrowth { g: f64, q: f64 },
}

impl ErgodicCertificate {
    fn validate(&self, size: usize) -> Result<()> {
        let at_least_one = |name: &str, v: &[f64]| -> Result<()> {
            if v.len() != size {
                return Err(Error::DimensionMismatch { expected: size, got: v.len() });
            }
            if v.iter().any(|x| !(*x >= 1.0)) {
                return Err(Error::InvalidRange(format!("{name} must be >= 1 entrywise")));
            }
            Ok(())
        };
        match self {
            ErgodicCertificate::VGeometric { v, m, theta } => {
                at_least_one("V", v)?;
                if !(*theta > 0.0 && *theta < 1.0 && *m > 0.0) {
                    return Err(Error::InvalidRange(format!(
                        "need M > 0 and theta in (0, 1), got M={m}, theta={theta}"
                    )));
                }
            }
            ErgodicCertificate::Dominating { c, nu } => {
                if !(*c > 0.0) {
                    return Err(Error::InvalidRange(format!("C must be positive, got {c}")));
                }
                if nu.len() != size {
                    return Err(Error::DimensionMismatch { expected: size, got: nu.len() });
                }
            }
            ErgodicCertificate::WeakVGeometric { v, d, b } => {
                at_least_one("V", v)?;
                at_least_one("D", d)?;
                if !(*b >= 0.0) {
                    return Err(Error::InvalidRange(format!("b must be nonnegative, got {b}")));
                }
            }
            ErgodicCertificate::PolynomialGrowth { g, q } => {
                if !(*g >= 1.0 && *q >= 1.0) {
                    return Err(Error::InvalidRange(format!("need G >= 1 and q >= 1, got G={g}, q={q}")));
                }
            }
        }
        Ok(())
    }
}

/// Bound on `J_p^(s)` implied by `cert`.
///
/// With `r = (1 - 1/p)/2` and `S(f) = sum_x f(x)^r`:
///
/// ```text
/// weak V-geometric  sqrt(J) <= S(pi)^2 + S(1/V) (S(pi D) + S(pi) (b(s-1))^r)
/// V-geometric       the same with D = M theta V, b = 0
/// dominating        J <= C^(1-1/p) S(nu)^2 S(pi)^2
/// growth            J <= G^(1+1/p) t_sharp^(q(1+1/p)) S(pi)^2      (valid for s <= t_sharp)
/// ```
pub fn jps_bound(
    cert: &ErgodicCertificate,
    pi: &ProbabilityVector,
    p: PValue,
    s: usize,
    t_sharp_xi: usize,
) -> Result<f64> {
    cert.validate(pi.len())?;
    if p.conjugate_weight() == 0.0 {
        return Ok(1.0);
    }
    let r = p.r();
    let sp = power_sum(pi.entries(), r);
    let weak = |v: &[f64], d: &[f64], b: f64| -> f64 {
        let inv_v: Vec<f64> = v.iter().map(|x| 1.0 / x).collect();
        let pd: Vec<f64> = pi.entries().iter().zip(d).map(|(a, b)| a * b).collect();
        let drift = if b * (s as f64 - 1.0) > 0.0 { sp * (b * (s as f64 - 1.0)).powf(r) } else { 0.0 };
        let root = sp * sp + power_sum(&inv_v, r) * (power_sum(&pd, r) + drift);
        root * root
    };
    let value = match cert {
        ErgodicCertificate::WeakVGeometric { v, d, b } => weak(v, d, *b),
        ErgodicCertificate::VGeometric { v, m, theta } => {
            let d: Vec<f64> = v.iter().map(|x| m * theta * x).collect();
            weak(v, &d, 0.0)
        }
        ErgodicCertificate::Dominating { c, nu } => {
            let sn = power_sum(nu.entries(), r);
            c.powf(p.conjugate_weight()) * sn * sn * sp * sp
        }
        ErgodicCertificate::PolynomialGrowth { g, q } => {
            let e = 1.0 + p.inverse();
            g.powf(e) * (t_sharp_xi as f64).powf(q * e) * sp * sp
        }
    };
    if !value.is_finite() {
        return Err(Error::SummabilityFailure(format!("certificate series diverge for p = {p}")));
    }
    Ok(value)
}

/// Worst residuals of the one-step weak V-geometric conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakVGeoCheck {
    pub passed: bool,
    /// `max_x (sup_x' V(x')(P(x,x') - pi(x')) - D(x))`.
    pub drift_residual: f64,
    /// `max_x ((P D)(x) - D(x) - b)`.
    pub recursion_residual: f64,
}

/// Checks `sup_x' V(x')(P(x,x') - pi(x')) <= D(x)` and `P D <= D + b`.
pub fn weak_vgeo_check(
    p: &StochasticMatrix,
    pi: &ProbabilityVector,
    v: &[f64],
    d: &[f64],
    b: f64,
) -> Result<WeakVGeoCheck> {
    let n = p.size();
    for len in [pi.len(), v.len(), d.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, got: len });
        }
    }
    let mut drift = f64::NEG_INFINITY;
    let mut recursion = f64::NEG_INFINITY;
    let mut passed = true;
    for x in 0..n {
        let row = p.row(x);
        let sup = row.iter().zip(pi.entries()).zip(v).map(|((a, b), w)| w * (a - b)).fold(f64::NEG_INFINITY, f64::max);
        let pd: f64 = row.iter().zip(d).map(|(a, b)| a * b).sum();
        let r1 = sup - d[x];
        let r2 = pd - d[x] - b;
        drift = drift.max(r1);
        recursion = recursion.max(r2);
        let tol = 1e-12 * d[x].abs().max(1.0);
        passed &= r1 <= tol && r2 <= tol + 1e-12 * b;
    }
    Ok(WeakVGeoCheck { passed, drift_residual: drift, recursion_residual: recursion })
}
