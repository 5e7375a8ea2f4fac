//! Inverse problems: the adversary strategy against which a given strategy is
//! the best response.
//!
//! Both directions reduce to `ÿ + κẏ = -k ẍ` with `y(0) = 0`, `y(1) = 1`.
//! Integrating once gives `ẏ + κy = C - k ẋ`, and the integrating factor
//! `e^{κt}` followed by one integration by parts yields
//! `y(t) = C t (1 - e^{-κt})/(κt) - k [x(t) - e^{-κt} x(0) - κ ∫_0^t e^{-κ(t-s)} x(s) ds]`.
//! The decay factor is applied exactly, so large κ is harmless.

use crate::error::Result;
use crate::grid::TimeGrid;
use crate::numerics::{exp_convolution, exprel};
use crate::params::ImpactParams;
use crate::strategy::{SampledStrategy, Strategy};

/// Unit-shaped `b*` such that `a` is the unit trader's best response to `λ b*`.
pub fn inverse_for_b(
    a: &impl Strategy,
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<SampledStrategy> {
    invert(&a.tabulate(grid)?, 2.0 / params.lambda, params.kappa)
}

/// Unit strategy `a*` against which `λ b` is the adversary's best response.
pub fn inverse_for_a(
    b: &impl Strategy,
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<SampledStrategy> {
    invert(&b.tabulate(grid)?, 2.0 * params.lambda, params.kappa)
}

fn invert(x: &SampledStrategy, k: f64, kappa: f64) -> Result<SampledStrategy> {
    let grid = *x.grid();
    let n = grid.n_intervals();
    let conv = exp_convolution(x.values(), kappa, grid.spacing());
    let x0 = x.values()[0];
    let psi: Vec<f64> = (0..=n)
        .map(|i| x.values()[i] - (-kappa * grid.point(i)).exp() * x0 - kappa * conv[i])
        .collect();
    let phi = |t: f64| t * exprel(-kappa * t);
    let c = (1.0 + k * psi[n]) / phi(1.0);

    let mut values: Vec<f64> = (0..=n).map(|i| c * phi(grid.point(i)) - k * psi[i]).collect();
    values[0] = 0.0;
    values[n] = 1.0;
    let first: Vec<f64> = (0..=n)
        .map(|i| c - k * x.first_deriv()[i] - kappa * values[i])
        .collect();
    let second = (0..=n)
        .map(|i| -kappa * first[i] - k * x.second_deriv()[i])
        .collect();
    SampledStrategy::from_parts(grid, values, first, second)
}
