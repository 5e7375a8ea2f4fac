//! Best responses of the unit trader to a fixed λ-scaled adversary.
//!
//! Against a fixed `b` the unit trader's Euler–Lagrange equation is
//! `ä = -(λ/2)(b̈ + κḃ)`. Integrating twice gives
//! `a(t) = -(λ/2)(b(t) + κ∫_0^t b) + w t + z`, with `w` and `z` fixed by the
//! boundary conditions.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::params::{positive, ImpactParams};
use crate::strategy::{AnalyticStrategy, Family, SampledStrategy, Strategy};

/// Auxiliary function of the risk-averse best response,
/// `q(t) = sinh(σt)/sinh(σ) + (κ/σ) cosh(σt)/sinh(σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QAux {
    pub kappa: f64,
    pub sigma: f64,
}

impl QAux {
    pub fn new(kappa: f64, sigma: f64) -> Result<Self> {
        crate::params::nonnegative("kappa", kappa)?;
        positive("sigma", sigma)?;
        Ok(Self { kappa, sigma })
    }

    pub fn q(&self, t: f64) -> f64 {
        let s = self.sigma;
        let lead = (s * (t - 1.0)).exp();
        let back = (-2.0 * s * t).exp();
        let den = -(-2.0 * s).exp_m1();
        lead * ((1.0 - back) + self.kappa / s * (1.0 + back)) / den
    }
}

/// Best response to any adversary shape, from its values and running integral.
///
/// `b` is unit-shaped and scaled by `params.lambda`. Derivatives of the result
/// are assembled from those of `b`, so nothing is differentiated twice.
pub fn best_response_generic(
    b: &impl Strategy,
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<SampledStrategy> {
    respond(&b.tabulate(grid)?, params.lambda, params.kappa)
}

/// The adversary's best response to a unit strategy `a`, as a unit shape.
///
/// B's equation `b̈ = -(ä + κȧ)/(2λ)` is A's with λ replaced by 1/λ.
pub fn best_response_generic_b(
    a: &impl Strategy,
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<SampledStrategy> {
    respond(&a.tabulate(grid)?, 1.0 / params.lambda, params.kappa)
}

fn respond(other: &SampledStrategy, scale: f64, kappa: f64) -> Result<SampledStrategy> {
    let grid = *other.grid();
    let n = grid.n_intervals();
    let half = 0.5 * scale;
    let (x, dx, ddx, ix) = (
        other.values(),
        other.first_deriv(),
        other.second_deriv(),
        other.integral(),
    );
    let u = |i: usize| x[i] + kappa * ix[i];
    let z = half * u(0);
    let w = 1.0 - z + half * u(n);
    let mut values: Vec<f64> = (0..=n)
        .map(|i| -half * u(i) + w * grid.point(i) + z)
        .collect();
    values[0] = 0.0;
    values[n] = 1.0;
    let first = (0..=n).map(|i| -half * (dx[i] + kappa * x[i]) + w).collect();
    let second = (0..=n).map(|i| -half * (ddx[i] + kappa * dx[i])).collect();
    SampledStrategy::from_parts(grid, values, first, second)
}

/// Closed-form best response to a λ-scaled `sinh(σt)/sinh(σ)` adversary:
/// `(λ/2)(q(0) - q(t)) + (1 + (λ/2)(q(1) - q(0))) t`.
pub fn br_to_risk_averse(params: &ImpactParams) -> Result<AnalyticStrategy> {
    require_sigma(params)?;
    AnalyticStrategy::new(Family::BestResponseToRiskAverse {
        kappa: params.kappa,
        lambda: params.lambda,
        sigma: params.sigma,
    })
}

/// Closed-form best response to a λ-scaled linear adversary:
/// `(1 + λκ/4) t - (λκ/4) t²`.
pub fn br_to_risk_neutral(params: &ImpactParams) -> Result<AnalyticStrategy> {
    AnalyticStrategy::new(Family::BestResponseToRiskNeutral {
        kappa: params.kappa,
        lambda: params.lambda,
    })
}

/// Closed-form best response to a λ-scaled eager adversary
/// `(e^{-σt} - 1)/(e^{-σ} - 1)`.
pub fn br_to_eager(params: &ImpactParams) -> Result<AnalyticStrategy> {
    require_sigma(params)?;
    AnalyticStrategy::new(Family::BestResponseToEager {
        kappa: params.kappa,
        lambda: params.lambda,
        sigma: params.sigma,
    })
}

fn require_sigma(params: &ImpactParams) -> Result<()> {
    if params.sigma > 0.0 {
        Ok(())
    } else {
        Err(domain(
            "sigma",
            params.sigma,
            "must be positive; the zero limit is the risk-neutral adversary",
        ))
    }
}
