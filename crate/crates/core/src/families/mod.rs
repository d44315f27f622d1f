//! Example chain families with closed-form analytics.

pub mod birth_death;
pub mod pt;
pub mod sequence;
pub mod two_point;

pub use birth_death::{
    build_birth_death, chebyshev_chain, chebyshev_formula, chebyshev_n_star, chebyshev_pointwise_threshold,
    constant_birth_death_rate, BirthDeathChain, BirthDeathSpec, Boundary, ChebyshevChain, ChebyshevSpec,
};
pub use pt::{
    pt_beta_lower, pt_beta_upper, pt_beta_upper_best, pt_beta_upper_terms, pt_chain, pt_weak_vgeo_certificate,
    CertificateScope, PtCertificate, PtChain, PtSpec, PtUpperTerms,
};
pub use sequence::{Sequence, TailMethod, TailSum};
pub use two_point::{gap_search, two_point_closed_forms, GapSearchResult, TwoPointChain, TwoPointForms};

use serde::{Deserialize, Serialize};

use crate::chain::{ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};

/// JSON family description: `{"family": ..., "params": {...}, "truncation": K}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum FamilyParams {
    TwoPoint {
        p: f64,
        q: f64,
    },
    Chebyshev {
        theta: f64,
        /// Defaults to the smallest admissible value.
        #[serde(default)]
        lambda: Option<f64>,
    },
    Pt {
        q: f64,
        mu: Sequence,
        nu: Sequence,
        /// Rescale `mu` to a probability sequence before use.
        #[serde(default = "default_true")]
        normalize_mu: bool,
    },
    BirthDeath {
        u: Sequence,
        v: Sequence,
        w: Sequence,
        #[serde(default)]
        boundary: Boundary,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub params: FamilyParams,
    #[serde(default)]
    pub truncation: Option<usize>,
}

/// A finite chain built from a [`FamilySpec`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuiltFamily {
    pub family: &'static str,
    pub matrix: StochasticMatrix,
    /// Closed-form stationary law, when the family has one.
    pub pi: Option<ProbabilityVector>,
    /// Stationary mass lost to truncation; 0 for finite families.
    pub tail_mass: f64,
    pub boundary: Option<Boundary>,
}

impl FamilySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn truncation_or(&self, family: &str) -> Result<usize> {
        self.truncation.ok_or_else(|| Error::Config(format!("family {family} needs a truncation")))
    }

    pub fn build(&self) -> Result<BuiltFamily> {
        match &self.params {
            FamilyParams::TwoPoint { p, q } => {
                let c = TwoPointChain::new(*p, *q)?;
                Ok(BuiltFamily {
                    family: "two_point",
                    matrix: c.matrix(),
                    pi: Some(c.stationary()),
                    tail_mass: 0.0,
                    boundary: None,
                })
            }
            FamilyParams::Chebyshev { theta, lambda } => {
                let spec = ChebyshevSpec {
                    theta: *theta,
                    lambda: lambda.unwrap_or_else(|| ChebyshevSpec::lambda_floor(*theta)),
                    truncation: self.truncation_or("chebyshev")?,
                };
                let c = chebyshev_chain(&spec)?;
                Ok(BuiltFamily {
                    family: "chebyshev",
                    matrix: c.matrix,
                    pi: Some(ProbabilityVector::new(c.pi_formula)?),
                    tail_mass: c.tail_mass,
                    boundary: Some(Boundary::Reflect),
                })
            }
            FamilyParams::Pt { q, mu, nu, normalize_mu } => {
                let mut spec = PtSpec { q: *q, mu: mu.clone(), nu: nu.clone(), truncation: self.truncation_or("pt")? };
                if *normalize_mu {
                    spec = spec.with_normalized_mu()?;
                }
                let c = pt_chain(&spec)?;
                Ok(BuiltFamily {
                    family: "pt",
                    matrix: c.matrix,
                    pi: Some(c.pi),
                    tail_mass: c.tail_mass,
                    boundary: None,
                })
            }
            FamilyParams::BirthDeath { u, v, w, boundary } => {
                let k = self.truncation_or("birth_death")?;
                let spec = BirthDeathSpec::from_sequences(u, v, w, k, *boundary);
                let c = build_birth_death(&spec)?;
                Ok(BuiltFamily {
                    family: "birth_death",
                    matrix: c.matrix,
                    pi: None,
                    tail_mass: 0.0,
                    boundary: Some(c.boundary),
                })
            }
        }
    }
}
