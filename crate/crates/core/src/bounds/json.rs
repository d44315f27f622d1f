//! `{"bound": name, "params": {...}}` in, `{"value": ..., "constants_used": {...}}` out.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{
    atmix_sample_size, bp_bound, deviation_sample_size, jps_bound, mad_and_pac_uniform, mad_bound_general,
    nonstationary_multiplier, pac_sample_size_general, variance_bound_visits, AtmixInput, ErgodicCertificate,
    PacConstants, RateModel, C_UNIFORM,
};
use crate::chain::ProbabilityVector;
use crate::error::{Error, Result};
use crate::mixing::PValue;
use crate::special::{lambert_w0, riemann_zeta, upper_incomplete_gamma};

/// Source of `t_sharp(xi)` for calculators that need it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TSharpSource {
    /// The same value for every `xi`.
    Fixed(usize),
    /// Upper bound read off a rate envelope.
    Rate(RateModel),
}

impl TSharpSource {
    fn eval(&self, xi: f64) -> Result<usize> {
        match self {
            TSharpSource::Fixed(t) => Ok(*t),
            TSharpSource::Rate(m) => m.t_sharp_upper(xi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bound", content = "params", rename_all = "snake_case")]
pub enum BoundRequest {
    Deviation {
        model: RateModel,
        eps: f64,
        delta: f64,
        t_sharp: Option<TSharpSource>,
    },
    Bp {
        model: RateModel,
        p: PValue,
        s: usize,
    },
    MadGeneral {
        bp: f64,
        jp: f64,
        s: usize,
        n: usize,
    },
    PacGeneral {
        eps: f64,
        delta: f64,
        s: usize,
        bp: f64,
        jp: f64,
        t_sharp: TSharpSource,
        constants: Option<PacConstants>,
    },
    Uniform {
        eps: f64,
        delta: f64,
        s: usize,
        t_mix: usize,
        j_inf: f64,
        n: usize,
    },
    Atmix {
        xi: f64,
        eps: f64,
        delta: f64,
        input: AtmixInput,
    },
    Jps {
        certificate: ErgodicCertificate,
        pi: ProbabilityVector,
        p: PValue,
        s: usize,
        t_sharp: usize,
    },
    Multiplier {
        mu: ProbabilityVector,
        pi: ProbabilityVector,
        q: f64,
    },
    VarianceVisits {
        pi_x: f64,
        p: PValue,
        n: usize,
        bp: f64,
    },
    LambertW0 {
        x: f64,
    },
    UpperIncompleteGamma {
        a: f64,
        x: f64,
    },
    RiemannZeta {
        r: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResponse {
    pub bound: String,
    pub value: Value,
    pub constants_used: Value,
}

impl BoundRequest {
    pub fn name(&self) -> &'static str {
        match self {
            BoundRequest::Deviation { .. } => "deviation",
            BoundRequest::Bp { .. } => "bp",
            BoundRequest::MadGeneral { .. } => "mad_general",
            BoundRequest::PacGeneral { .. } => "pac_general",
            BoundRequest::Uniform { .. } => "uniform",
            BoundRequest::Atmix { .. } => "atmix",
            BoundRequest::Jps { .. } => "jps",
            BoundRequest::Multiplier { .. } => "multiplier",
            BoundRequest::VarianceVisits { .. } => "variance_visits",
            BoundRequest::LambertW0 { .. } => "lambert_w0",
            BoundRequest::UpperIncompleteGamma { .. } => "upper_incomplete_gamma",
            BoundRequest::RiemannZeta { .. } => "riemann_zeta",
        }
    }

    pub fn evaluate(&self) -> Result<BoundResponse> {
        let (value, constants_used) = match self {
            BoundRequest::Deviation { model, eps, delta, t_sharp } => {
                let source = t_sharp.clone().unwrap_or(TSharpSource::Rate(*model));
                let r = deviation_sample_size(model, *eps, *delta, &|xi| source.eval(xi))?;
                (serde_json::to_value(r)?, json!({"leading": 8.0, "xi_denominator": 16.0}))
            }
            BoundRequest::Bp { model, p, s } => (json!(bp_bound(model, *p, *s)?), json!({})),
            BoundRequest::MadGeneral { bp, jp, s, n } => {
                (json!(mad_bound_general(*bp, *jp, *s, *n)?), json!({"c": 3.0}))
            }
            BoundRequest::PacGeneral { eps, delta, s, bp, jp, t_sharp, constants } => {
                let c = constants.unwrap_or_default();
                let r = pac_sample_size_general(*eps, *delta, *s, *bp, *jp, &|xi| t_sharp.eval(xi), c)?;
                (serde_json::to_value(r)?, serde_json::to_value(c)?)
            }
            BoundRequest::Uniform { eps, delta, s, t_mix, j_inf, n } => {
                let r = mad_and_pac_uniform(*eps, *delta, *s, *t_mix, *j_inf, *n)?;
                (serde_json::to_value(r)?, json!({"c_uniform": C_UNIFORM, "log_factor": 576.0}))
            }
            BoundRequest::Atmix { xi, eps, delta, input } => {
                let r = atmix_sample_size(*xi, *eps, *delta, input)?;
                let constants = match input {
                    AtmixInput::Ergodic { c_erg, .. } => json!({"c_ergodic": c_erg}),
                    _ => json!({"c_uniform": C_UNIFORM, "log_factor": 576.0}),
                };
                (serde_json::to_value(r)?, constants)
            }
            BoundRequest::Jps { certificate, pi, p, s, t_sharp } => {
                (json!(jps_bound(certificate, pi, *p, *s, *t_sharp)?), json!({}))
            }
            BoundRequest::Multiplier { mu, pi, q } => (json!(nonstationary_multiplier(mu, pi, *q)?), json!({})),
            BoundRequest::VarianceVisits { pi_x, p, n, bp } => {
                (json!(variance_bound_visits(*pi_x, *p, *n, *bp)), json!({"c": 4.0}))
            }
            BoundRequest::LambertW0 { x } => (json!(lambert_w0(*x)?), json!({})),
            BoundRequest::UpperIncompleteGamma { a, x } => (json!(upper_incomplete_gamma(*a, *x)?), json!({})),
            BoundRequest::RiemannZeta { r } => (json!(riemann_zeta(*r)?), json!({})),
        };
        Ok(BoundResponse { bound: self.name().to_string(), value, constants_used })
    }
}

/// Parses a request and evaluates it.
pub fn evaluate_json(text: &str) -> Result<BoundResponse> {
    let req: BoundRequest = serde_json::from_str(text).map_err(|e| Error::Config(format!("bound request: {e}")))?;
    req.evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mad_request_round_trip() {
        let out = evaluate_json(r#"{"bound":"mad_general","params":{"bp":1.5,"jp":2.0,"s":1,"n":101}}"#).unwrap();
        assert_eq!(out.bound, "mad_general");
        let want = 3.0 * (2.0f64 * 2.0 / 100.0).sqrt();
        assert!((out.value.as_f64().unwrap() - want).abs() < 1e-15);
        assert_eq!(out.constants_used["c"], 3.0);
    }

    #[test]
    fn pac_reports_constants() {
        let text = r#"{"bound":"pac_general","params":{"eps":0.1,"delta":0.1,"s":1,"bp":2.0,"jp":3.0,
            "t_sharp":{"fixed":4},"constants":null}}"#;
        let out = evaluate_json(text).unwrap();
        assert_eq!(out.constants_used["c_xi"], 128.0);
        assert!(out.value["n"].as_u64().unwrap() > 1);
    }

    #[test]
    fn unknown_bound_is_config_error() {
        assert!(matches!(evaluate_json(r#"{"bound":"nope","params":{}}"#), Err(Error::Config(_))));
    }
}
