use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Distribution of the requested shipment weight `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DemandDist {
    Uniform { d_min: f64, d_max: f64 },
    /// Normal with mean `mu` and variance `sigma2`, redrawn until positive.
    TruncatedGaussian { mu: f64, sigma2: f64 },
}

/// Parameters of a cargo-loading campaign. Weights are in kg, volumes in
/// m³ and densities in kg/m³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CargoConfig {
    /// Customers per trial.
    pub m: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Arrivals per trial; `50 m` when absent.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub arrivals: Option<usize>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_p_min")]
    pub p_min: f64,
    #[serde(default = "default_p_max")]
    pub p_max: f64,
    #[serde(default = "default_rho_min")]
    pub rho_min: f64,
    #[serde(default = "default_rho_max")]
    pub rho_max: f64,
    pub d_dist: DemandDist,
    /// Weight capacity.
    #[serde(rename = "W")]
    pub w: f64,
    /// Volume capacity.
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(default)]
    pub seed: u64,
    /// Fraction of arrivals that are also checked by a full re-solve.
    #[serde(default = "default_audit_fraction")]
    pub audit_fraction: f64,
}

fn default_trials() -> usize {
    100
}
fn default_beta() -> f64 {
    1e-7
}
fn default_p_min() -> f64 {
    20.0
}
fn default_p_max() -> f64 {
    60.0
}
fn default_rho_min() -> f64 {
    900.0
}
fn default_rho_max() -> f64 {
    7000.0
}
fn default_audit_fraction() -> f64 {
    0.01
}

impl CargoConfig {
    /// Configuration with default prices, densities, trial count and `β`.
    pub fn new(m: usize, d_dist: DemandDist, w: f64, v: f64, seed: u64) -> Self {
        CargoConfig {
            m,
            trials: default_trials(),
            arrivals: None,
            beta: default_beta(),
            p_min: default_p_min(),
            p_max: default_p_max(),
            rho_min: default_rho_min(),
            rho_max: default_rho_max(),
            d_dist,
            w,
            v,
            seed,
            audit_fraction: default_audit_fraction(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cfg: CargoConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn arrivals(&self) -> usize {
        self.arrivals.unwrap_or(50 * self.m)
    }

    /// Every how many arrivals a re-solve audit runs.
    pub fn audit_every(&self) -> Option<usize> {
        (self.audit_fraction > 0.0).then(|| (1.0 / self.audit_fraction).round().max(1.0) as usize)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.m == 0 {
            return bad("m must be at least 1".into());
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("beta = {} is not in (0, 1)", self.beta));
        }
        if self.arrivals == Some(0) {
            return bad("M must be at least 1".into());
        }
        if !(self.p_min.is_finite() && self.p_max.is_finite() && self.p_min <= self.p_max) {
            return bad(format!("price range [{}, {}] is invalid", self.p_min, self.p_max));
        }
        if !(self.rho_min > 0.0 && self.rho_max.is_finite() && self.rho_min <= self.rho_max) {
            return bad(format!("density range [{}, {}] is invalid", self.rho_min, self.rho_max));
        }
        match self.d_dist {
            DemandDist::Uniform { d_min, d_max } => {
                if !(d_min > 0.0 && d_max.is_finite() && d_min < d_max) {
                    return bad(format!("weight range [{d_min}, {d_max}] is invalid"));
                }
            }
            DemandDist::TruncatedGaussian { mu, sigma2 } => {
                if !(mu.is_finite() && sigma2 > 0.0 && sigma2.is_finite()) {
                    return bad(format!("gaussian (mu = {mu}, sigma2 = {sigma2}) is invalid"));
                }
            }
        }
        if !(self.w > 0.0 && self.w.is_finite() && self.v > 0.0 && self.v.is_finite()) {
            return bad("W and V must be positive and finite".into());
        }
        if !(0.0..=1.0).contains(&self.audit_fraction) {
            return bad(format!("audit_fraction = {} is not in [0, 1]", self.audit_fraction));
        }
        Ok(())
    }
}
