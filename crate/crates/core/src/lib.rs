//! Optimal position building when two or more traders compete through linear
//! temporary and permanent market impact.
//!
//! Strategies live on the unit horizon `[0, 1]` and move a position from 0 to 1.
//! The unit trader holds `a(t)`, the adversary holds `λ b(t)`, and `κ` is the
//! ratio of permanent to temporary impact.

pub mod analysis;
mod banded;
pub mod best_response;
pub mod cost;
pub mod equilibrium;
pub mod error;
pub mod grid;
pub mod inverse;
pub mod numerics;
pub mod params;
pub mod strategy;

pub use analysis::{
    eager_competition_costs, equilibrium_cost, expected_cost_lognormal, misestimation_row, selection_matrix, uncertainty_strategies,
    MisestimationOptions, Moments, Partials, Pricing, SelectionReport, SensitivityReport, UncertaintyStrategies,
};
pub use best_response::{
    best_response_generic, best_response_generic_b, br_to_eager, br_to_risk_averse,
    br_to_risk_neutral, QAux,
};
pub use cost::{
    cumulative_cost, el_residual, instantaneous_cost, perm_invariance_check, perm_invariance_gap,
    sup_norm, total_cost, CostBreakdown, Side,
};
pub use equilibrium::{
    multi_trader, multi_trader_limit, risk_equilibrium, risk_residuals, symmetric_residual,
    two_trader, EquilibriumPair,
};
pub use error::{Error, Result};
pub use grid::{TimeGrid, DEFAULT_INTERVALS};
pub use inverse::{inverse_for_a, inverse_for_b};
pub use params::ImpactParams;
pub use strategy::{AnalyticStrategy, Family, SampledStrategy, Strategy};
