//! Browser bindings for the demo page in `www/`.
//!
//! Every call returns the unit trader's curve `a`, the adversary's unit shape
//! `b`, the traded position `λb`, and both running costs on a uniform grid.

use wasm_bindgen::prelude::*;

use impact_games::{
    best_response_generic, br_to_eager, br_to_risk_averse, br_to_risk_neutral, cumulative_cost,
    risk_equilibrium, two_trader, AnalyticStrategy, Family, ImpactParams, SampledStrategy, Side,
    Strategy, TimeGrid,
};

/// Interval count used by the page; fine enough to draw, cheap enough to drag.
pub const DEMO_INTERVALS: usize = 400;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curves {
    t: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    lambda: f64,
    cost_a: Vec<f64>,
    cost_b: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    pub fn a(&self) -> Vec<f64> {
        self.a.clone()
    }

    pub fn b(&self) -> Vec<f64> {
        self.b.clone()
    }

    pub fn lambda_b(&self) -> Vec<f64> {
        self.b.iter().map(|x| self.lambda * x).collect()
    }

    pub fn cost_a(&self) -> Vec<f64> {
        self.cost_a.clone()
    }

    pub fn cost_b(&self) -> Vec<f64> {
        self.cost_b.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn total_a(&self) -> f64 {
        *self.cost_a.last().expect("non-empty grid")
    }

    #[wasm_bindgen(getter)]
    pub fn total_b(&self) -> f64 {
        *self.cost_b.last().expect("non-empty grid")
    }
}

fn curves(a: &SampledStrategy, b: &SampledStrategy, p: &ImpactParams) -> impact_games::Result<Curves> {
    let g = *a.grid();
    Ok(Curves {
        t: g.points().collect(),
        a: a.values().to_vec(),
        b: b.values().to_vec(),
        lambda: p.lambda,
        cost_a: cumulative_cost(a, b, p, Side::A, &g)?,
        cost_b: cumulative_cost(a, b, p, Side::B, &g)?,
    })
}

fn grid() -> TimeGrid {
    TimeGrid::new(DEMO_INTERVALS).expect("valid demo grid")
}

/// Two-trader equilibrium.
pub fn equilibrium_curves(kappa: f64, lambda: f64) -> Result<Curves, String> {
    let run = || {
        let p = ImpactParams::new(kappa, lambda)?;
        let pair = two_trader(&p)?.tabulate(&grid())?;
        curves(&pair.a, &pair.b, &p)
    };
    run().map_err(|e| e.to_string())
}

/// Unit trader's best response to a λ-scaled adversary of the named family.
///
/// `adversary` is one of `risk-neutral`, `risk-averse`, `eager`, `parabolic`;
/// `shape` is σ for the sinh and exponential families and `c` for the parabola.
pub fn best_response_curves(adversary: &str, kappa: f64, lambda: f64, shape: f64) -> Result<Curves, String> {
    let family = match adversary {
        "risk-neutral" => Family::RiskNeutral,
        "risk-averse" => Family::RiskAverse { sigma: shape },
        "eager" => Family::Eager { sigma: shape },
        "parabolic" => Family::Parabolic { c: shape },
        other => return Err(format!("unknown adversary `{other}`")),
    };
    let run = || {
        let g = grid();
        let p = ImpactParams::new(kappa, lambda)?;
        let b = AnalyticStrategy::new(family)?;
        let a = match family {
            Family::RiskNeutral => br_to_risk_neutral(&p)?.tabulate(&g)?,
            Family::RiskAverse { sigma } => br_to_risk_averse(&p.with_sigma(sigma)?)?.tabulate(&g)?,
            Family::Eager { sigma } => br_to_eager(&p.with_sigma(sigma)?)?.tabulate(&g)?,
            _ => best_response_generic(&b, &p, &g)?,
        };
        curves(&a, &b.tabulate(&g)?, &p)
    };
    run().map_err(|e| e.to_string())
}

/// Two-trader equilibrium with holding risk `ξ σ²`.
pub fn risk_equilibrium_curves(kappa: f64, lambda: f64, sigma: f64, xi_a: f64, xi_b: f64) -> Result<Curves, String> {
    let run = || {
        let p = ImpactParams::new(kappa, lambda)?.with_sigma(sigma)?.with_risk(xi_a, xi_b)?;
        let pair = risk_equilibrium(&p, &grid())?;
        curves(&pair.a, &pair.b, &p)
    };
    run().map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn equilibrium(kappa: f64, lambda: f64) -> Result<Curves, JsError> {
    equilibrium_curves(kappa, lambda).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn best_response(adversary: &str, kappa: f64, lambda: f64, shape: f64) -> Result<Curves, JsError> {
    best_response_curves(adversary, kappa, lambda, shape).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn risk_equilibrium_demo(kappa: f64, lambda: f64, sigma: f64, xi_a: f64, xi_b: f64) -> Result<Curves, JsError> {
    risk_equilibrium_curves(kappa, lambda, sigma, xi_a, xi_b).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_curves_run_from_zero_to_one() {
        let c = equilibrium_curves(5.0, 3.0).unwrap();
        assert_eq!(c.t().len(), DEMO_INTERVALS + 1);
        for x in [c.a(), c.b()] {
            assert_eq!(x[0], 0.0);
            assert!((x[DEMO_INTERVALS] - 1.0).abs() < 1e-12);
        }
        assert!((c.lambda_b()[DEMO_INTERVALS] - 3.0).abs() < 1e-12);
        assert_eq!(c.cost_a()[0], 0.0);
    }

    #[test]
    fn best_response_is_cheaper_than_trading_linearly() {
        use impact_games::total_cost;
        let p = ImpactParams::new(2.0, 5.0).unwrap();
        let linear = AnalyticStrategy::new(Family::RiskNeutral).unwrap();
        for (adversary, family) in [
            ("risk-neutral", Family::RiskNeutral),
            ("risk-averse", Family::RiskAverse { sigma: 3.0 }),
            ("eager", Family::Eager { sigma: 3.0 }),
        ] {
            let c = best_response_curves(adversary, 2.0, 5.0, 3.0).unwrap();
            let b = AnalyticStrategy::new(family).unwrap();
            let naive = total_cost(&linear, &b, &p, Side::A, &grid()).unwrap().total;
            assert!(c.total_a() < naive, "{adversary}");
        }
        let p = best_response_curves("parabolic", 1.0, 5.0, -4.0).unwrap();
        assert!(p.a()[0].abs() < 1e-12);
    }

    #[test]
    fn bad_input_is_reported_not_panicked() {
        assert!(equilibrium_curves(-1.0, 1.0).unwrap_err().contains("kappa"));
        assert!(best_response_curves("sideways", 1.0, 1.0, 1.0).unwrap_err().contains("sideways"));
        assert!(risk_equilibrium_curves(1.0, 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn risk_free_limit_matches_closed_form() {
        let r = risk_equilibrium_curves(4.0, 2.0, 0.0, 1.0, 1.0).unwrap();
        let c = equilibrium_curves(4.0, 2.0).unwrap();
        let gap = r.a().iter().zip(c.a()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(gap < 1e-6, "{gap}");
    }
}
