//! Open-loop equilibria: two traders in closed form, symmetric multi-trader
//! equilibria, and the two-trader equilibrium with holding risk.

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::params::{nonnegative, ImpactParams};
use crate::strategy::{AnalyticStrategy, Family, SampledStrategy, Strategy};

/// Unit strategy `a` and unit-shaped adversary strategy `b`; B trades `λ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPair<S> {
    pub a: S,
    pub b: S,
    pub params: ImpactParams,
}

impl<S: Strategy> EquilibriumPair<S> {
    pub fn tabulate(&self, grid: &TimeGrid) -> Result<EquilibriumPair<SampledStrategy>> {
        Ok(EquilibriumPair {
            a: self.a.tabulate(grid)?,
            b: self.b.tabulate(grid)?,
            params: self.params,
        })
    }
}

/// Closed-form two-trader equilibrium for the given κ and λ.
pub fn two_trader(params: &ImpactParams) -> Result<EquilibriumPair<AnalyticStrategy>> {
    let (kappa, lambda) = (params.kappa, params.lambda);
    Ok(EquilibriumPair {
        a: AnalyticStrategy::new(Family::TwoTraderEqUnit { kappa, lambda })?,
        b: AnalyticStrategy::new(Family::TwoTraderEqScaled { kappa, lambda })?,
        params: *params,
    })
}

/// Symmetric equilibrium among `n_traders` unit traders:
/// `(1 - e^{-ct}) / (1 - e^{-c})` with `c = (T - 1)κ / (T + 1)`.
pub fn multi_trader(n_traders: u32, kappa: f64) -> Result<AnalyticStrategy> {
    AnalyticStrategy::new(Family::MultiTraderSym { kappa, n_traders })
}

/// Limit of [`multi_trader`] as the number of traders grows: `c = κ`.
pub fn multi_trader_limit(kappa: f64) -> Result<AnalyticStrategy> {
    AnalyticStrategy::new(Family::MultiTraderLimit { kappa })
}

/// Defect of `(T + 1) ä + (T - 1) κ ȧ = 0`, the equation every trader satisfies
/// in a symmetric equilibrium of `T` identical traders, at interior grid points.
///
/// `total_traders` may be fractional.
pub fn symmetric_residual(
    a: &impl Strategy,
    total_traders: f64,
    kappa: f64,
    grid: &TimeGrid,
) -> Result<Vec<f64>> {
    if !(total_traders >= 1.0) {
        return Err(domain("total_traders", total_traders, "must be at least 1"));
    }
    let s = a.tabulate(grid)?.resampled();
    let n = grid.n_intervals();
    Ok((1..n)
        .map(|i| {
            (total_traders + 1.0) * s.second_deriv()[i]
                + (total_traders - 1.0) * kappa * s.first_deriv()[i]
        })
        .collect())
}

/// Coefficients of the explicit system `ä = Σ α·(a, ȧ, b, ḃ)`, `b̈ = Σ β·(a, ȧ, b, ḃ)`.
///
/// The equilibrium equations with holding risk,
/// `2ä + λb̈ + κλḃ - 2ξ_a σ² a = 0` and `ä + 2λb̈ + κȧ - 2(ξ_b/λ) σ² b = 0`,
/// are solved for `(ä, b̈)` through the matrix `[[2, λ], [1, 2λ]]`, whose
/// determinant is `3λ`.
fn explicit_coefficients(p: &ImpactParams) -> ([f64; 4], [f64; 4]) {
    let (k, l) = (p.kappa, p.lambda);
    let s2 = p.sigma * p.sigma;
    // right-hand sides r1, r2 as coefficient vectors over (a, ȧ, b, ḃ)
    let r1 = [2.0 * p.xi_a * s2, 0.0, 0.0, -k * l];
    let r2 = [0.0, -k, 2.0 * p.xi_b * s2 / l, 0.0];
    let det = 3.0 * l;
    let mut alpha = [0.0; 4];
    let mut beta = [0.0; 4];
    for j in 0..4 {
        alpha[j] = (2.0 * l * r1[j] - l * r2[j]) / det;
        beta[j] = (-r1[j] + 2.0 * r2[j]) / det;
    }
    (alpha, beta)
}

/// Central-difference solve on `n` intervals; returns `(a, b)` including boundaries.
fn solve_risk_bvp(p: &ImpactParams, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (alpha, beta) = explicit_coefficients(p);
    let h = 1.0 / n as f64;
    let m = 2 * (n - 1);
    let mut mat = BandMatrix::zeros(m, 3, 3);
    let mut rhs = vec![0.0; m];
    let boundary = |node: usize| if node == 0 { 0.0 } else { 1.0 };

    for i in 1..n {
        for (eq, coef, comp) in [(0usize, &alpha, 0usize), (1, &beta, 1)] {
            let row = 2 * (i - 1) + eq;
            // (node, component, weight) triples of x_comp'' - Σ coef·(a, ȧ, b, ḃ)
            let mut terms = vec![
                (i - 1, comp, 1.0 / (h * h)),
                (i, comp, -2.0 / (h * h)),
                (i + 1, comp, 1.0 / (h * h)),
            ];
            for (c, var) in [(0usize, 0usize), (2, 1)] {
                terms.push((i, var, -coef[c]));
                terms.push((i + 1, var, -coef[c + 1] / (2.0 * h)));
                terms.push((i - 1, var, coef[c + 1] / (2.0 * h)));
            }
            for (node, var, w) in terms {
                if node == 0 || node == n {
                    rhs[row] -= w * boundary(node);
                } else {
                    mat.add(row, 2 * (node - 1) + var, w);
                }
            }
        }
    }
    let x = mat.solve(rhs)?;
    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for i in 1..n {
        a[i] = x[2 * (i - 1)];
        b[i] = x[2 * (i - 1) + 1];
    }
    a[n] = 1.0;
    b[n] = 1.0;
    Ok((a, b))
}

/// Two-trader equilibrium when each trader also pays for holding risk,
/// `ξ_a σ² a²` and `ξ_b σ² b²`.
///
/// The coupled linear boundary-value problem is discretized with central
/// differences as one banded system, solved on `grid` and on its refinement,
/// and Richardson-extrapolated back onto `grid`.
pub fn risk_equilibrium(
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<EquilibriumPair<SampledStrategy>> {
    let p = params.validated()?;
    let n = grid.n_intervals();
    let (ac, bc) = solve_risk_bvp(&p, n)?;
    let (af, bf) = solve_risk_bvp(&p, 2 * n)?;
    let extrapolate = |coarse: &[f64], fine: &[f64]| -> Vec<f64> {
        (0..=n)
            .map(|i| (4.0 * fine[2 * i] - coarse[i]) / 3.0)
            .collect()
    };
    Ok(EquilibriumPair {
        a: SampledStrategy::from_values(*grid, extrapolate(&ac, &af))?,
        b: SampledStrategy::from_values(*grid, extrapolate(&bc, &bf))?,
        params: p,
    })
}

/// Interior defects of the two equilibrium equations with holding risk:
/// `ä + (λ/2)(b̈ + κḃ) - ξ_a σ² a` and `b̈ + (ä + κȧ)/(2λ) - (ξ_b/λ²) σ² b`.
pub fn risk_residuals(
    a: &impl Strategy,
    b: &impl Strategy,
    params: &ImpactParams,
    grid: &TimeGrid,
) -> Result<(Vec<f64>, Vec<f64>)> {
    nonnegative("sigma", params.sigma)?;
    let sa = a.tabulate(grid)?.resampled();
    let sb = b.tabulate(grid)?.resampled();
    let (k, l) = (params.kappa, params.lambda);
    let s2 = params.sigma * params.sigma;
    let n = grid.n_intervals();
    Ok((1..n)
        .map(|i| {
            let (x, dx, ddx) = (sa.values()[i], sa.first_deriv()[i], sa.second_deriv()[i]);
            let (y, dy, ddy) = (sb.values()[i], sb.first_deriv()[i], sb.second_deriv()[i]);
            (
                ddx + 0.5 * l * (ddy + k * dy) - params.xi_a * s2 * x,
                ddy + (ddx + k * dx) / (2.0 * l) - params.xi_b * s2 * y / (l * l),
            )
        })
        .unzip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{el_residual, sup_norm, Side};
    use crate::strategy::sup_gap;

    #[test]
    fn two_trader_equal_sizes_match_symmetric_form() {
        let k: f64 = 3.0;
        let pair = two_trader(&ImpactParams::new(k, 1.0).unwrap()).unwrap();
        for t in [0.0, 0.2, 0.7, 1.0] {
            let printed = (1.0 - (-k * t / 3.0).exp()) * ((k / 3.0).exp() + (2.0 * k / 3.0).exp() + k.exp())
                / (k.exp() - 1.0);
            assert!((pair.a.value(t) - printed).abs() < 1e-14);
            assert!((pair.b.value(t) - printed).abs() < 1e-14);
        }
    }

    #[test]
    fn two_trader_residuals_vanish() {
        let g = TimeGrid::default();
        for k in [0.1, 2.0, 25.0] {
            for l in [1.0, 5.0, 25.0] {
                let p = ImpactParams::new(k, l).unwrap();
                let pair = two_trader(&p).unwrap();
                for side in [Side::A, Side::B] {
                    let r = el_residual(&pair.a, &pair.b, &p, side, &g).unwrap();
                    assert!(sup_norm(&r) < 1e-6, "k {k} l {l} {side:?}: {:e}", sup_norm(&r));
                }
            }
        }
    }

    #[test]
    fn multi_trader_of_two_is_two_trader_with_equal_sizes() {
        for k in [0.1, 1.0, 5.0, 25.0] {
            let m = multi_trader(2, k).unwrap();
            let pair = two_trader(&ImpactParams::new(k, 1.0).unwrap()).unwrap();
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                assert!((m.value(t) - pair.a.value(t)).abs() < 1e-12);
            }
        }
        assert!(multi_trader(1, 1.0).is_err());
    }

    #[test]
    fn multi_trader_limit_values() {
        let m = multi_trader_limit(2.0).unwrap();
        let expect = (1.0 - (-1f64).exp()) / (1.0 - (-2f64).exp());
        assert!((m.value(0.5) - expect).abs() < 1e-15);
        assert!((m.value(0.5) - 0.7311).abs() < 1e-4);
        let big = multi_trader(1_000_000, 2.0).unwrap();
        let g = TimeGrid::new(1000).unwrap();
        let gap = sup_gap(big.tabulate(&g).unwrap().values(), m.tabulate(&g).unwrap().values());
        assert!(gap < 1e-5);
    }

    #[test]
    fn multi_trader_satisfies_symmetric_equation() {
        let g = TimeGrid::default();
        for t in [2u32, 3, 10] {
            let a = multi_trader(t, 5.0).unwrap();
            let r = symmetric_residual(&a, f64::from(t), 5.0, &g).unwrap();
            assert!(sup_norm(&r) < 1e-6);
        }
    }

    #[test]
    fn explicit_coefficients_reproduce_original_equations() {
        let p = ImpactParams::new(1.7, 2.3)
            .unwrap()
            .with_sigma(0.4)
            .unwrap()
            .with_risk(1.1, 3.0)
            .unwrap();
        let (alpha, beta) = explicit_coefficients(&p);
        let state = [0.3, -0.2, 0.9, 1.4];
        let dd = |c: &[f64; 4]| c.iter().zip(state).map(|(x, y)| x * y).sum::<f64>();
        let (aa, bb) = (dd(&alpha), dd(&beta));
        let (k, l, s2) = (p.kappa, p.lambda, p.sigma * p.sigma);
        let e1 = 2.0 * aa + l * bb + k * l * state[3] - 2.0 * p.xi_a * s2 * state[0];
        let e2 = aa + 2.0 * l * bb + k * state[1] - 2.0 * p.xi_b / l * s2 * state[2];
        assert!(e1.abs() < 1e-14 && e2.abs() < 1e-14);
    }

    #[test]
    fn risk_bvp_without_risk_matches_closed_form() {
        let g = TimeGrid::default();
        let p = ImpactParams::new(5.0, 5.0).unwrap().with_sigma(0.5).unwrap();
        let pair = risk_equilibrium(&p, &g).unwrap();
        let closed = two_trader(&p).unwrap().tabulate(&g).unwrap();
        assert!(pair.a.sup_distance(&closed.a).unwrap() < 1e-6);
        assert!(pair.b.sup_distance(&closed.b).unwrap() < 1e-6);
    }

    #[test]
    fn risk_bvp_is_symmetric_for_equal_traders() {
        let g = TimeGrid::new(400).unwrap();
        let p = ImpactParams::new(3.0, 1.0)
            .unwrap()
            .with_sigma(1.0)
            .unwrap()
            .with_risk(2.0, 2.0)
            .unwrap();
        let pair = risk_equilibrium(&p, &g).unwrap();
        assert!(pair.a.sup_distance(&pair.b).unwrap() < 1e-8);
    }
}
