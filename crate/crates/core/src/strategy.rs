//! Position-building strategies: closed-form families and grid samples.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::TimeGrid;
use crate::numerics::{
    cumulative_integral, exprel, exprel2, exprel3, first_derivative, second_derivative,
    sinh_minus_x,
};
use crate::params::{nonnegative, positive};

/// Shape parameters below this are evaluated through their linear limit.
pub const LIMIT_THRESHOLD: f64 = 1e-8;

/// Anything that can be laid out on a time grid with first and second
/// derivatives and a running integral.
pub trait Strategy {
    fn tabulate(&self, grid: &TimeGrid) -> Result<SampledStrategy>;
}

impl<S: Strategy + ?Sized> Strategy for &S {
    fn tabulate(&self, grid: &TimeGrid) -> Result<SampledStrategy> {
        (**self).tabulate(grid)
    }
}

/// Closed-form strategy families. Every family runs from 0 at `t = 0` to 1 at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `t`
    RiskNeutral,
    /// `sinh(σt) / sinh(σ)`
    RiskAverse { sigma: f64 },
    /// `(e^{-σt} - 1) / (e^{-σ} - 1)`
    Eager { sigma: f64 },
    /// `t (t - c) / (1 - c)`
    Parabolic { c: f64 },
    /// Passive risk-averse execution; same curve as [`Family::RiskAverse`].
    AlmgrenChriss { sigma: f64 },
    BestResponseToRiskAverse { kappa: f64, lambda: f64, sigma: f64 },
    BestResponseToRiskNeutral { kappa: f64, lambda: f64 },
    BestResponseToEager { kappa: f64, lambda: f64, sigma: f64 },
    /// Unit trader's half of the two-trader equilibrium.
    TwoTraderEqUnit { kappa: f64, lambda: f64 },
    /// Unit-shaped half of the λ-scaled trader in the two-trader equilibrium.
    TwoTraderEqScaled { kappa: f64, lambda: f64 },
    /// Symmetric equilibrium among `n_traders` identical unit traders.
    MultiTraderSym { kappa: f64, n_traders: u32 },
    /// Symmetric equilibrium as the number of traders grows without bound.
    MultiTraderLimit { kappa: f64 },
    /// Unit trader who believes the adversary is λ separate unit traders.
    Case1bA { kappa: f64, lambda: f64 },
    /// Adversary's best response to [`Family::Case1bA`].
    Case1bB { kappa: f64, lambda: f64 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        use Family::*;
        match *self {
            RiskNeutral => Ok(()),
            RiskAverse { sigma } | Eager { sigma } | AlmgrenChriss { sigma } => {
                nonnegative("sigma", sigma)
            }
            Parabolic { c } => {
                if !c.is_finite() {
                    Err(domain("c", c, "must be finite"))
                } else if c == 1.0 {
                    Err(domain("c", c, "parabolic family is undefined at c = 1"))
                } else {
                    Ok(())
                }
            }
            BestResponseToRiskAverse { kappa, lambda, sigma }
            | BestResponseToEager { kappa, lambda, sigma } => {
                nonnegative("kappa", kappa)?;
                nonnegative("lambda", lambda)?;
                nonnegative("sigma", sigma)
            }
            BestResponseToRiskNeutral { kappa, lambda } => {
                nonnegative("kappa", kappa)?;
                nonnegative("lambda", lambda)
            }
            TwoTraderEqUnit { kappa, lambda }
            | TwoTraderEqScaled { kappa, lambda }
            | Case1bA { kappa, lambda }
            | Case1bB { kappa, lambda } => {
                nonnegative("kappa", kappa)?;
                positive("lambda", lambda)
            }
            MultiTraderSym { kappa, n_traders } => {
                nonnegative("kappa", kappa)?;
                if n_traders < 2 {
                    Err(domain("n_traders", f64::from(n_traders), "need at least two traders"))
                } else {
                    Ok(())
                }
            }
            MultiTraderLimit { kappa } => nonnegative("kappa", kappa),
        }
    }

    fn jet(&self, t: f64) -> Jet {
        use Family::*;
        match *self {
            RiskNeutral => Jet::linear(t),
            RiskAverse { sigma } | AlmgrenChriss { sigma } => sinh_jet(sigma, t),
            Eager { sigma } => exp_jet(sigma, t),
            Parabolic { c } => {
                let k = 1.0 / (1.0 - c);
                Jet {
                    v: k * t * (t - c),
                    d1: k * (2.0 * t - c),
                    d2: 2.0 * k,
                    i1: k * (t * t * t / 3.0 - c * t * t / 2.0),
                }
            }
            BestResponseToRiskAverse { kappa, lambda, sigma } => {
                br_risk_averse_jet(kappa, lambda, sigma, t)
            }
            BestResponseToRiskNeutral { kappa, lambda } => {
                let al = lambda * kappa / 4.0;
                Jet {
                    v: (1.0 + al) * t - al * t * t,
                    d1: 1.0 + al - 2.0 * al * t,
                    d2: -2.0 * al,
                    i1: (1.0 + al) * t * t / 2.0 - al * t * t * t / 3.0,
                }
            }
            BestResponseToEager { kappa, lambda, sigma } => br_eager_jet(kappa, lambda, sigma, t),
            TwoTraderEqUnit { kappa, lambda } => two_trader_jets(kappa, lambda, t).0,
            TwoTraderEqScaled { kappa, lambda } => two_trader_jets(kappa, lambda, t).1,
            MultiTraderSym { kappa, n_traders } => {
                let n = f64::from(n_traders);
                exp_jet((n - 1.0) * kappa / (n + 1.0), t)
            }
            MultiTraderLimit { kappa } => exp_jet(kappa, t),
            Case1bA { kappa, lambda } => exp_jet(case1b_rate(kappa, lambda), t),
            Case1bB { kappa, lambda } => {
                let w = 1.0 / (lambda * lambda);
                Jet::linear(t) * (1.0 - w) + exp_jet(case1b_rate(kappa, lambda), t) * w
            }
        }
    }
}

/// Exponent of the case-1b multi-trader strategy: `κλ / (λ + 2)`.
pub(crate) fn case1b_rate(kappa: f64, lambda: f64) -> f64 {
    kappa * lambda / (lambda + 2.0)
}

/// Value, first and second derivative, and running integral at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet {
    v: f64,
    d1: f64,
    d2: f64,
    i1: f64,
}

impl Jet {
    fn linear(t: f64) -> Self {
        Jet {
            v: t,
            d1: 1.0,
            d2: 0.0,
            i1: 0.5 * t * t,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            i1: self.i1 + o.i1,
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        Jet {
            v: k * self.v,
            d1: k * self.d1,
            d2: k * self.d2,
            i1: k * self.i1,
        }
    }
}

/// `sinh(σt) / sinh(σ)`, written with decaying exponentials so large σ cannot overflow.
fn sinh_jet(sigma: f64, t: f64) -> Jet {
    if sigma < LIMIT_THRESHOLD {
        return Jet::linear(t);
    }
    let den = -(-2.0 * sigma).exp_m1();
    let lead = (sigma * (t - 1.0)).exp();
    let back = (-2.0 * sigma * t).exp();
    let v = lead * (1.0 - back) / den;
    let em = (-sigma * t).exp_m1();
    Jet {
        v,
        d1: sigma * lead * (1.0 + back) / den,
        d2: sigma * sigma * v,
        // (cosh(σt) - 1) / (σ sinh σ)
        i1: lead * em * em / (sigma * den),
    }
}

/// `∫_0^t ∫_0^s sinh(σu)/sinh(σ) du ds = (sinh(σt) - σt) / (σ² sinh σ)`.
fn sinh_double_integral(sigma: f64, t: f64) -> f64 {
    if sigma < LIMIT_THRESHOLD {
        t * t * t / 6.0
    } else if sigma <= 1.0 {
        sinh_minus_x(sigma * t) / (sigma * sigma * sigma.sinh())
    } else {
        let inv_sinh = 2.0 * (-sigma).exp() / -(-2.0 * sigma).exp_m1();
        (sinh_jet(sigma, t).v - sigma * t * inv_sinh) / (sigma * sigma)
    }
}

/// `(1 - e^{-σt}) / (1 - e^{-σ})`
fn exp_jet(sigma: f64, t: f64) -> Jet {
    if sigma < LIMIT_THRESHOLD {
        return Jet::linear(t);
    }
    let den = -(-sigma).exp_m1();
    let d1 = sigma * (-sigma * t).exp() / den;
    Jet {
        v: -(-sigma * t).exp_m1() / den,
        d1,
        d2: -sigma * d1,
        i1: sigma * t * t * exprel2(-sigma * t) / den,
    }
}

/// Best response to a λ-scaled `sinh(σt)/sinh(σ)` adversary.
///
/// With `q(t) = sinh(σt)/sinh(σ) + (κ/σ) cosh(σt)/sinh(σ)` the response is
/// `(λ/2)(q(0) - q(t)) + (1 + (λ/2)(q(1) - q(0))) t`. The difference
/// `q(t) - q(0)` is the adversary plus κ times its running integral, which
/// avoids the `cosh - 1` cancellation.
fn br_risk_averse_jet(kappa: f64, lambda: f64, sigma: f64, t: f64) -> Jet {
    let r = sinh_jet(sigma, t);
    let q = Jet {
        v: r.v + kappa * r.i1,
        d1: r.d1 + kappa * r.v,
        d2: r.d2 + kappa * r.d1,
        i1: r.i1 + kappa * sinh_double_integral(sigma, t),
    };
    let q1 = 1.0 + kappa * sinh_jet(sigma, 1.0).i1;
    let w = 1.0 + 0.5 * lambda * q1;
    q * (-0.5 * lambda) + Jet {
        v: w * t,
        d1: w,
        d2: 0.0,
        i1: 0.5 * w * t * t,
    }
}

/// Best response to a λ-scaled eager adversary.
///
/// The closed form multiplied through by `e^{-σ}` and regrouped with
/// `E(x) = (e^{-x} - 1 + x) / x²`:
/// `a = [2t - t((λ+2)σ - κλ) E(σ) + λ(σ - κ) t² E(σt)] / (2 (1 - e^{-σ})/σ)`.
/// Continuous at σ = 0, where it reduces to the response to `t`.
fn br_eager_jet(kappa: f64, lambda: f64, sigma: f64, t: f64) -> Jet {
    let x = 2.0 * exprel(-sigma);
    let k1 = ((lambda + 2.0) * sigma - kappa * lambda) * exprel2(-sigma);
    let k2 = lambda * (sigma - kappa);
    let st = sigma * t;
    Jet {
        v: ((2.0 - k1) * t + k2 * t * t * exprel2(-st)) / x,
        d1: (2.0 - k1 + k2 * t * exprel(-st)) / x,
        d2: k2 * (-st).exp() / x,
        i1: ((2.0 - k1) * t * t / 2.0 + k2 * t * t * t * exprel3(-st)) / x,
    }
}

/// Both halves of the two-trader equilibrium, `(a, b)`.
///
/// With `D = 2(1 - e^{-κ})`, `E₁ = (λ+1)(1 + e^{-κ/3} + e^{-2κ/3})(1 - e^{-κt/3}) / D`
/// and `E₂ = (e^{κ(t-1)} - e^{-κ}) / D`, the pair is `a = E₁ - (λ-1)E₂` and
/// `λb = E₁ + (λ-1)E₂`. Only decaying exponentials appear.
fn two_trader_jets(kappa: f64, lambda: f64, t: f64) -> (Jet, Jet) {
    if kappa < LIMIT_THRESHOLD {
        return (Jet::linear(t), Jet::linear(t));
    }
    let k3 = kappa / 3.0;
    let den = -2.0 * (-kappa).exp_m1();
    let g0 = (lambda + 1.0) * (1.0 + (-k3).exp() + (-2.0 * k3).exp()) / den;
    let d1 = g0 * k3 * (-k3 * t).exp();
    let e1 = Jet {
        v: -g0 * (-k3 * t).exp_m1(),
        d1,
        d2: -k3 * d1,
        i1: g0 * k3 * t * t * exprel2(-k3 * t),
    };
    let em = (-kappa).exp();
    let lead = (kappa * (t - 1.0)).exp();
    let e2 = if kappa < 1.0 {
        Jet {
            v: em * (kappa * t).exp_m1(),
            d1: kappa * lead,
            d2: kappa * kappa * lead,
            i1: em * kappa * t * t * exprel2(kappa * t),
        }
    } else {
        Jet {
            v: lead - em,
            d1: kappa * lead,
            d2: kappa * kappa * lead,
            i1: lead * -(-kappa * t).exp_m1() / kappa - t * em,
        }
    } * (1.0 / den);
    let l1 = lambda - 1.0;
    (e1 + e2 * -l1, (e1 + e2 * l1) * (1.0 / lambda))
}

/// A closed-form family, optionally multiplied by a positive scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticStrategy {
    family: Family,
    scale: f64,
}

impl AnalyticStrategy {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(Self { family, scale: 1.0 })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// 1 for a unit strategy, λ after [`AnalyticStrategy::scaled`].
    pub fn scale_factor(&self) -> f64 {
        self.scale
    }

    /// The λ-scaled trajectory `λ·x(t)`. Its endpoint is λ, not 1.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(Self {
            family: self.family,
            scale: self.scale * lambda,
        })
    }

    fn jet(&self, t: f64) -> Jet {
        self.family.jet(t) * self.scale
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).v
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.jet(t).d1
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        self.jet(t).d2
    }

    /// `∫_0^t value`
    pub fn integral(&self, t: f64) -> f64 {
        self.jet(t).i1
    }

    /// Grid values with finite-difference derivatives and high-order running integral,
    /// exactly as an externally supplied trajectory would be treated.
    pub fn sample(&self, grid: &TimeGrid) -> SampledStrategy {
        let values = grid.points().map(|t| self.value(t)).collect();
        SampledStrategy::from_values(*grid, values).expect("length matches grid")
    }
}

impl Strategy for AnalyticStrategy {
    /// Exact derivatives and integrals at the grid points.
    fn tabulate(&self, grid: &TimeGrid) -> Result<SampledStrategy> {
        let n = grid.len();
        let mut s = SampledStrategy {
            grid: *grid,
            values: Vec::with_capacity(n),
            first: Vec::with_capacity(n),
            second: Vec::with_capacity(n),
            integral: Vec::with_capacity(n),
        };
        for t in grid.points() {
            let j = self.jet(t);
            s.values.push(j.v);
            s.first.push(j.d1);
            s.second.push(j.d2);
            s.integral.push(j.i1);
        }
        Ok(s)
    }
}

/// A strategy known only at the points of a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledStrategy {
    grid: TimeGrid,
    values: Vec<f64>,
    first: Vec<f64>,
    second: Vec<f64>,
    integral: Vec<f64>,
}

impl SampledStrategy {
    /// Derivatives from sixth-order finite differences, integral from
    /// the panel rule.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        let h = grid.spacing();
        let first = first_derivative(&values, h);
        let second = second_derivative(&values, h);
        let integral = cumulative_integral(&values, h);
        Ok(Self {
            grid,
            values,
            first,
            second,
            integral,
        })
    }

    /// Values with derivatives already known to the caller; the integral is
    /// accumulated by the panel rule.
    pub fn from_parts(
        grid: TimeGrid,
        values: Vec<f64>,
        first: Vec<f64>,
        second: Vec<f64>,
    ) -> Result<Self> {
        for len in [values.len(), first.len(), second.len()] {
            check_len(&grid, len)?;
        }
        let integral = cumulative_integral(&values, grid.spacing());
        Ok(Self {
            grid,
            values,
            first,
            second,
            integral,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first_deriv(&self) -> &[f64] {
        &self.first
    }

    pub fn second_deriv(&self) -> &[f64] {
        &self.second
    }

    /// Running integral `∫_0^{t_i}` at each grid point.
    pub fn integral(&self) -> &[f64] {
        &self.integral
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        let m = |v: &[f64]| v.iter().map(|x| lambda * x).collect();
        Ok(Self {
            grid: self.grid,
            values: m(&self.values),
            first: m(&self.first),
            second: m(&self.second),
            integral: m(&self.integral),
        })
    }

    /// Copy whose derivatives are recomputed from the values alone.
    pub fn resampled(&self) -> Self {
        Self::from_values(self.grid, self.values.clone()).expect("length matches grid")
    }

    /// Largest pointwise gap between two strategies on the same grid.
    pub fn sup_distance(&self, other: &SampledStrategy) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(sup_gap(&self.values, &other.values))
    }

    /// Values at every other point, i.e. on a grid with half as many intervals.
    pub fn coarsened(&self) -> Result<Self> {
        let coarse = TimeGrid::new(self.grid.n_intervals() / 2)?;
        let v = self.values.iter().step_by(2).copied().collect();
        Self::from_values(coarse, v)
    }
}

impl Strategy for SampledStrategy {
    fn tabulate(&self, grid: &TimeGrid) -> Result<SampledStrategy> {
        self.grid.check_same(grid)?;
        Ok(self.clone())
    }
}

fn check_len(grid: &TimeGrid, len: usize) -> Result<()> {
    if len == grid.len() {
        Ok(())
    } else {
        Err(Error::Grid(format!(
            "expected {} samples, got {len}",
            grid.len()
        )))
    }
}

pub(crate) fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
