use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Market and trader parameters shared by every cost functional and equilibrium.
///
/// * `kappa`: permanent impact relative to temporary impact.
/// * `lambda`: adversary size in units of the unit trader's target.
/// * `sigma`: volatility / shape parameter of the sinh and exponential families
///   and of the holding-risk terms.
/// * `xi_a`, `xi_b`: holding-risk weights of the unit trader and the adversary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactParams {
    pub kappa: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub xi_a: f64,
    pub xi_b: f64,
}

impl ImpactParams {
    /// Risk-neutral parameters: `sigma = xi_a = xi_b = 0`.
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        Self {
            kappa,
            lambda,
            sigma: 0.0,
            xi_a: 0.0,
            xi_b: 0.0,
        }
        .validated()
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self { sigma, ..self }.validated()
    }

    pub fn with_risk(self, xi_a: f64, xi_b: f64) -> Result<Self> {
        Self { xi_a, xi_b, ..self }.validated()
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self { kappa, ..self }.validated()
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self { lambda, ..self }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        nonnegative("kappa", self.kappa)?;
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(domain("lambda", self.lambda, "must be finite and positive"));
        }
        nonnegative("sigma", self.sigma)?;
        nonnegative("xi_a", self.xi_a)?;
        nonnegative("xi_b", self.xi_b)?;
        Ok(self)
    }
}

pub(crate) fn nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(domain(name, value, "must be finite and nonnegative"))
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(domain(name, value, "must be finite and positive"))
    }
}
