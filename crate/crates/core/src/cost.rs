//! Impact cost functionals and their Euler–Lagrange residuals.
//!
//! Trader A holds the unit strategy `a`, trader B holds `λ b`. Temporary impact
//! is proportional to the aggregate trading rate, permanent impact to κ times
//! the aggregate position, and each trader pays the price it moves on its own
//! trades.

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::Result;
use crate::grid::{TimeGrid, DEFAULT_INTERVALS};
use crate::numerics::{cumulative_integral, integral};
use crate::params::{nonnegative, ImpactParams};
use crate::strategy::{sup_gap, AnalyticStrategy, Family, SampledStrategy, Strategy};

/// Whose cost is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The unit trader holding `a`.
    A,
    /// The adversary holding `λ b`.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub temporary: f64,
    pub permanent: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(temporary: f64, permanent: f64) -> Self {
        Self {
            temporary,
            permanent,
            total: temporary + permanent,
        }
    }
}

/// Temporary and permanent cost rates from positions and rates at one instant.
fn rates(a: f64, da: f64, b: f64, db: f64, p: &ImpactParams, side: Side) -> (f64, f64) {
    let flow = da + p.lambda * db;
    let level = a + p.lambda * b;
    let own = match side {
        Side::A => da,
        Side::B => p.lambda * db,
    };
    (flow * own, p.kappa * level * own)
}

/// Instantaneous `(temporary, permanent)` cost rates at time `t`.
///
/// The temporary rate is negative exactly when the aggregate flow opposes the
/// trader's own direction.
pub fn instantaneous_cost(
    a: &AnalyticStrategy,
    b: &AnalyticStrategy,
    params: &ImpactParams,
    side: Side,
    t: f64,
) -> (f64, f64) {
    rates(a.value(t), a.deriv(t), b.value(t), b.deriv(t), params, side)
}

fn rate_arrays(
    a: &SampledStrategy,
    b: &SampledStrategy,
    params: &ImpactParams,
    side: Side,
) -> (Vec<f64>, Vec<f64>) {
    (0..a.values().len())
        .map(|i| {
            rates(
                a.values()[i],
                a.first_deriv()[i],
                b.values()[i],
                b.first_deriv()[i],
                params,
                side,
            )
        })
        .unzip()
}

fn tabulate_pair(
    a: &impl Strategy,
    b: &impl Strategy,
    grid: &TimeGrid,
) -> Result<(SampledStrategy, SampledStrategy)> {
    Ok((a.tabulate(grid)?, b.tabulate(grid)?))
}

/// Total cost over `[0, 1]` by the tenth-order panel rule on `grid`.
///
/// `b` is unit-shaped; it is scaled by `params.lambda` inside the functional.
pub fn total_cost(
    a: &impl Strategy,
    b: &impl Strategy,
    params: &ImpactParams,
    side: Side,
    grid: &TimeGrid,
) -> Result<CostBreakdown> {
    let (sa, sb) = tabulate_pair(a, b, grid)?;
    let (temp, perm) = rate_arrays(&sa, &sb, params, side);
    let h = grid.spacing();
    Ok(CostBreakdown::new(integral(&temp, h), integral(&perm, h)))
}

/// Running total cost `∫_0^{t_i}` at every grid point; the last entry is the total.
pub fn cumulative_cost(
    a: &impl Strategy,
    b: &impl Strategy,
    params: &ImpactParams,
    side: Side,
    grid: &TimeGrid,
) -> Result<Vec<f64>> {
    let (sa, sb) = tabulate_pair(a, b, grid)?;
    let (temp, perm) = rate_arrays(&sa, &sb, params, side);
    let sum: Vec<f64> = temp.iter().zip(&perm).map(|(x, y)| x + y).collect();
    Ok(cumulative_integral(&sum, grid.spacing()))
}

/// Pointwise defect of the equilibrium equation at interior grid points.
///
/// For A: `ä + (λ/2)(b̈ + κḃ)`. For B: `b̈ + (ä + κȧ)/(2λ)`. Derivatives are
/// taken by finite differences of the sampled values, whatever the source.
pub fn el_residual(
    a: &impl Strategy,
    b: &impl Strategy,
    params: &ImpactParams,
    side: Side,
    grid: &TimeGrid,
) -> Result<Vec<f64>> {
    let (sa, sb) = tabulate_pair(a, b, grid)?;
    let (sa, sb) = (sa.resampled(), sb.resampled());
    let (k, l) = (params.kappa, params.lambda);
    let n = grid.n_intervals();
    Ok((1..n)
        .map(|i| {
            let (da, dda) = (sa.first_deriv()[i], sa.second_deriv()[i]);
            let (db, ddb) = (sb.first_deriv()[i], sb.second_deriv()[i]);
            match side {
                Side::A => dda + 0.5 * l * (ddb + k * db),
                Side::B => ddb + (dda + k * da) / (2.0 * l),
            }
        })
        .collect())
}

/// `max |r|` over a residual array.
pub fn sup_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Loss `p ẋ² + q x ẋ + r x²` of a single trader with a fixed holding cost.
#[derive(Debug, Clone, Copy, PartialEq)]
struct QuadraticLagrangian {
    p: f64,
    q: f64,
    r: f64,
}

impl QuadraticLagrangian {
    /// Coefficients `(c2, c1, c0)` of `c2 ẍ + c1 ẋ + c0 x = 0`.
    ///
    /// `d/dt ∂L/∂ẋ = 2p ẍ + q ẋ` and `∂L/∂x = q ẋ + 2r x`; the cross term
    /// contributes `q ẋ` to both sides.
    fn euler_lagrange(&self) -> (f64, f64, f64) {
        let from_momentum = self.q;
        let from_position = self.q;
        (2.0 * self.p, from_momentum - from_position, -2.0 * self.r)
    }
}

/// Solves `c2 ẍ + c1 ẋ + c0 x = 0`, `x(0) = 0`, `x(1) = 1` by central
/// differences on `n` intervals.
fn linear_bvp(c2: f64, c1: f64, c0: f64, n: usize) -> Result<Vec<f64>> {
    let h = 1.0 / n as f64;
    let m = n - 1;
    let lo = c2 / (h * h) - c1 / (2.0 * h);
    let hi = c2 / (h * h) + c1 / (2.0 * h);
    let mid = -2.0 * c2 / (h * h) + c0;
    let mut mat = BandMatrix::zeros(m, 1, 1);
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        mat.add(k, k, mid);
        if k > 0 {
            mat.add(k, k - 1, lo);
        }
        if k + 1 < m {
            mat.add(k, k + 1, hi);
        }
    }
    rhs[m - 1] -= hi;
    let inner = mat.solve(rhs)?;
    let mut x = Vec::with_capacity(n + 1);
    x.push(0.0);
    x.extend(inner);
    x.push(1.0);
    Ok(x)
}

/// Sup-norm gap between the optimal execution path of a risk-averse trader
/// whose loss carries a permanent-impact term `κ x ẋ`, solved numerically, and
/// the closed-form `sinh(σt)/sinh(σ)` path.
///
/// The Euler–Lagrange boundary-value problem is solved by central differences
/// on two nested grids and Richardson-extrapolated.
pub fn perm_invariance_gap(sigma: f64, kappa: f64) -> Result<f64> {
    nonnegative("sigma", sigma)?;
    nonnegative("kappa", kappa)?;
    let loss = QuadraticLagrangian {
        p: 1.0,
        q: kappa,
        r: sigma * sigma,
    };
    let (c2, c1, c0) = loss.euler_lagrange();
    let n = DEFAULT_INTERVALS;
    let coarse = linear_bvp(c2, c1, c0, n)?;
    let fine = linear_bvp(c2, c1, c0, 2 * n)?;
    let extrapolated: Vec<f64> = coarse
        .iter()
        .enumerate()
        .map(|(i, x)| (4.0 * fine[2 * i] - x) / 3.0)
        .collect();
    let grid = TimeGrid::new(n)?;
    let reference = AnalyticStrategy::new(Family::AlmgrenChriss { sigma })?.tabulate(&grid)?;
    Ok(sup_gap(&extrapolated, reference.values()))
}

/// True when permanent impact leaves the optimal risk-averse path unchanged to 1e-8.
pub fn perm_invariance_check(sigma: f64, kappa: f64) -> Result<bool> {
    Ok(perm_invariance_gap(sigma, kappa)? <= 1e-8)
}
