//! Strategy selection under uncertainty about the adversary, expected cost
//! over a log-normal adversary size, and sensitivity to mis-estimated κ.

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use serde::{Deserialize, Serialize};

use crate::best_response::br_to_eager;
use crate::cost::{total_cost, CostBreakdown, Side};
use crate::equilibrium::two_trader;
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::params::{nonnegative, positive, ImpactParams};
use crate::strategy::{AnalyticStrategy, Family};

/// The four strategies of the selection game.
///
/// Case 1a: both traders believe they face a single adversary and play the
/// two-trader equilibrium (`a1a`, `b1a`). Case 1b: the unit trader believes it
/// faces λ unit traders and plays the symmetric multi-trader strategy with
/// exponent `κλ/(λ+2)` (`a1b`); `b1b` is the adversary's best response to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyStrategies {
    pub a1a: AnalyticStrategy,
    pub b1a: AnalyticStrategy,
    pub a1b: AnalyticStrategy,
    pub b1b: AnalyticStrategy,
}

/// Non-integer λ is accepted; the "λ unit traders" reading then is only formal.
pub fn uncertainty_strategies(params: &ImpactParams) -> Result<UncertaintyStrategies> {
    let (kappa, lambda) = (params.kappa, params.lambda);
    let pair = two_trader(params)?;
    Ok(UncertaintyStrategies {
        a1a: pair.a,
        b1a: pair.b,
        a1b: AnalyticStrategy::new(Family::Case1bA { kappa, lambda })?,
        b1b: AnalyticStrategy::new(Family::Case1bB { kappa, lambda })?,
    })
}

/// Adversary's total cost for each combination of the unit trader's actual
/// strategy (rows `a1a`, `a1b`) and the adversary's choice (columns `b1a`, `b1b`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub params: ImpactParams,
    pub matrix: [[f64; 2]; 2],
    pub col_mean: [f64; 2],
    /// Sample standard deviation (divisor 1) over the two equally likely rows.
    pub col_std: [f64; 2],
}

pub fn selection_matrix(params: &ImpactParams, grid: &TimeGrid) -> Result<SelectionReport> {
    let s = uncertainty_strategies(params)?;
    let rows = [s.a1a, s.a1b];
    let cols = [s.b1a, s.b1b];
    let mut matrix = [[0.0; 2]; 2];
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in cols.iter().enumerate() {
            matrix[i][j] = total_cost(a, b, params, Side::B, grid)?.total;
        }
    }
    let col_mean = [0, 1].map(|j| 0.5 * (matrix[0][j] + matrix[1][j]));
    let col_std = [0, 1].map(|j| (matrix[0][j] - matrix[1][j]).abs() / std::f64::consts::SQRT_2);
    Ok(SelectionReport {
        params: *params,
        matrix,
        col_mean,
        col_std,
    })
}

/// Unit trader's total cost in the two-trader equilibrium at adversary size λ.
pub fn equilibrium_cost(kappa: f64, lambda: f64, grid: &TimeGrid) -> Result<CostBreakdown> {
    let p = ImpactParams::new(kappa, lambda)?;
    let pair = two_trader(&p)?;
    total_cost(&pair.a, &pair.b, &p, Side::A, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of the unit trader's equilibrium cost when the adversary
/// size is log-normal, `ln λ ~ N(μ, σ_ln²)`.
///
/// Gauss–Hermite quadrature in `u` with `λ = exp(μ + √2 σ_ln u)`.
pub fn expected_cost_lognormal(
    mu: f64,
    sigma_ln: f64,
    kappa: f64,
    n_quad: usize,
    grid: &TimeGrid,
) -> Result<Moments> {
    if !mu.is_finite() {
        return Err(domain("mu", mu, "must be finite"));
    }
    nonnegative("sigma_ln", sigma_ln)?;
    nonnegative("kappa", kappa)?;
    if n_quad < 8 {
        return Err(domain("n_quad", n_quad as f64, "need at least 8 nodes"));
    }
    if sigma_ln == 0.0 {
        let c = equilibrium_cost(kappa, mu.exp(), grid)?.total;
        return Ok(Moments {
            mean: c,
            variance: 0.0,
        });
    }
    let rule = GaussHermite::new(NonZeroUsize::new(n_quad).expect("n_quad >= 8"));
    let norm = std::f64::consts::PI.sqrt();
    let (mut m1, mut m2) = (0.0, 0.0);
    for &(u, w) in rule.as_node_weight_pairs() {
        let lambda = (mu + std::f64::consts::SQRT_2 * sigma_ln * u).exp();
        let c = equilibrium_cost(kappa, lambda, grid)?.total;
        m1 += w * c / norm;
        m2 += w * c * c / norm;
    }
    Ok(Moments {
        mean: m1,
        variance: (m2 - m1 * m1).max(0.0),
    })
}

/// How the adversary enters the priced cost functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pricing {
    /// Adversary trades `λ b`, as in the equilibrium itself.
    Scaled,
    /// Adversary's shape `b` priced at unit size. Reproduces the published
    /// mis-estimation tables.
    #[default]
    UnitAdversary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisestimationOptions {
    /// Factor applied to κ for the shifted row.
    pub shrink: f64,
    pub pricing: Pricing,
    /// Trade the shifted-κ strategies but price them under the original κ.
    pub fixed_truth: bool,
}

impl Default for MisestimationOptions {
    fn default() -> Self {
        Self {
            shrink: 0.75,
            pricing: Pricing::default(),
            fixed_truth: false,
        }
    }
}

/// Central-difference partial derivatives of a total cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Partials {
    pub d_kappa: f64,
    pub d_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub lambda: f64,
    pub kappa: f64,
    pub shifted_kappa: f64,
    pub options: MisestimationOptions,
    /// Unit trader's cost at the original κ.
    pub base: CostBreakdown,
    /// Unit trader's cost at the shifted κ.
    pub shifted: CostBreakdown,
    pub rel_total_diff: f64,
    pub partials_a: Partials,
    pub partials_b: Partials,
}

/// Cost of the two-trader equilibrium built for `kappa_strategy`, priced under
/// `kappa_price`.
fn priced_equilibrium(
    kappa_strategy: f64,
    kappa_price: f64,
    lambda: f64,
    pricing: Pricing,
    side: Side,
    grid: &TimeGrid,
) -> Result<CostBreakdown> {
    let pair = two_trader(&ImpactParams::new(kappa_strategy, lambda)?)?;
    let priced_lambda = match pricing {
        Pricing::Scaled => lambda,
        Pricing::UnitAdversary => 1.0,
    };
    let p = ImpactParams::new(kappa_price, priced_lambda)?;
    total_cost(&pair.a, &pair.b, &p, side, grid)
}

/// One pair of rows of the mis-estimation table: the unit trader's equilibrium
/// cost at κ and at `shrink·κ`, with cost sensitivities at the base point.
pub fn misestimation_row(
    lambda: f64,
    kappa: f64,
    options: MisestimationOptions,
    grid: &TimeGrid,
) -> Result<SensitivityReport> {
    positive("kappa", kappa)?;
    positive("lambda", lambda)?;
    positive("shrink", options.shrink)?;
    let shifted_kappa = options.shrink * kappa;
    let price = |ks: f64, kp: f64, l: f64, side: Side| {
        priced_equilibrium(ks, kp, l, options.pricing, side, grid)
    };
    let base = price(kappa, kappa, lambda, Side::A)?;
    let shifted_price = if options.fixed_truth { kappa } else { shifted_kappa };
    let shifted = price(shifted_kappa, shifted_price, lambda, Side::A)?;

    let (dk, dl) = (1e-4 * kappa, 1e-4 * lambda);
    let partials = |side: Side| -> Result<Partials> {
        let c = |k: f64, l: f64| price(k, k, l, side).map(|c| c.total);
        Ok(Partials {
            d_kappa: (c(kappa + dk, lambda)? - c(kappa - dk, lambda)?) / (2.0 * dk),
            d_lambda: (c(kappa, lambda + dl)? - c(kappa, lambda - dl)?) / (2.0 * dl),
        })
    };
    Ok(SensitivityReport {
        lambda,
        kappa,
        shifted_kappa,
        options,
        base,
        shifted,
        rel_total_diff: shifted.total / base.total - 1.0,
        partials_a: partials(Side::A)?,
        partials_b: partials(Side::B)?,
    })
}

/// Unit trader's costs against a λ-scaled eager adversary, first for its best
/// response and then for the linear strategy.
pub fn eager_competition_costs(
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<(CostBreakdown, CostBreakdown)> {
    let adversary = AnalyticStrategy::new(Family::Eager {
        sigma: params.sigma,
    })?;
    let best = total_cost(&br_to_eager(params)?, &adversary, params, Side::A, grid)?;
    let linear = AnalyticStrategy::new(Family::RiskNeutral)?;
    let naive = total_cost(&linear, &adversary, params, Side::A, grid)?;
    Ok((best, naive))
}
